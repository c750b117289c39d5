#include <numeric>

#include "doctest.h"
#include "ptw/tensor.hpp"

using namespace ptw;

namespace {

Tensor random_tensor(const FieldCtx& ctx, u32 n, std::vector<Label> labels, Rng& rng) {
  Tensor t(ctx, n, std::move(labels));
  for (u64& x : t.fe) x = rng.below(ctx.mod());
  return t;
}

HyperMatrix random_hyper(const FieldCtx& ctx, u32 n, u32 d, Rng& rng) {
  std::size_t side = checked_tensor_size(n, d);
  return HyperMatrix(n, d, random_matrix(ctx, side, side, rng));
}

}  // namespace

TEST_CASE("pairing bijection") {
  CHECK(pair_index(1, 1, 2) == 1);
  CHECK(pair_index(2, 3, 3) == 6);
  for (u64 n = 1; n <= 16; ++n)
    for (u64 i = 1; i <= n; ++i)
      for (u64 j = 1; j <= n; ++j) {
        auto [a, b] = unpair_index(pair_index(i, j, n), n);
        CHECK(a == i);
        CHECK(b == j);
      }
  CHECK_THROWS(pair_index(0, 1, 2));
  CHECK_THROWS(pair_index(1, 3, 2));
}

TEST_CASE("tensor size guard refuses oversized index spaces") {
  CHECK(checked_tensor_size(2, 10) == 1024);
  CHECK_THROWS(checked_tensor_size(2, 31));
  CHECK_THROWS(checked_tensor_size(1024, 4));
}

TEST_CASE("flattening an order-2 tensor recovers the matrix") {
  FieldCtx ctx = FieldCtx::gfp(5);
  Tensor t(ctx, 3, {Label::plain(1), Label::plain(2)});
  for (std::size_t e = 0; e < 9; ++e) t.fe[e] = e % 5;
  DenseMatrix m = flatten_mat(t, {Label::plain(1)}, {Label::plain(2)});
  CHECK(m.rows == 3);
  CHECK(m.cols == 3);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) CHECK(m.f(r, c) == (r * 3 + c) % 5);
  // swapping the row and column label lists transposes the flattening
  DenseMatrix mt = flatten_mat(t, {Label::plain(2)}, {Label::plain(1)});
  CHECK(approx_equal(mt, transpose(m)));
}

TEST_CASE("flattening rank is multiplicative over tensor products") {
  FieldCtx ctx = FieldCtx::gfp(3);
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    Tensor a = random_tensor(ctx, 3, {Label::plain(1), Label::plain(2)}, rng);
    Tensor b = random_tensor(ctx, 3, {Label::plain(3), Label::plain(4)}, rng);
    Tensor ab = tensor_product(a, b);
    std::size_t ra = rank(flatten_mat(a, {Label::plain(1)}, {Label::plain(2)}));
    std::size_t rb = rank(flatten_mat(b, {Label::plain(3)}, {Label::plain(4)}));
    std::size_t rab = rank(flatten_mat(ab, {Label::plain(1), Label::plain(3)},
                                       {Label::plain(2), Label::plain(4)}));
    CHECK(rab == ra * rb);
  }
}

TEST_CASE("all-ones tensor flattens to rank one") {
  FieldCtx ctx = FieldCtx::gfp(7);
  Tensor t(ctx, 2,
           {Label::plain(1), Label::plain(2), Label::plain(3), Label::plain(4)});
  for (u64& x : t.fe) x = 1;
  DenseMatrix m = flatten_mat(t, {Label::plain(1), Label::plain(3)},
                              {Label::plain(2), Label::plain(4)});
  CHECK(rank(m) == 1);
}

TEST_CASE("tensor product is pointwise multiplication") {
  FieldCtx ctx = FieldCtx::gfp(3);
  Rng rng(7);
  Tensor a = random_tensor(ctx, 2, {Label::plain(1), Label::plain(2)}, rng);
  Tensor b = random_tensor(ctx, 2, {Label::plain(5)}, rng);
  Tensor ab = tensor_product(a, b);
  for (int probe = 0; probe < 50; ++probe) {
    std::size_t x = rng.below(a.size());
    std::size_t y = rng.below(b.size());
    CHECK(ab.fe[x * b.size() + y] == (a.fe[x] * b.fe[y]) % 3);
  }
  Tensor z(ctx, 2, {Label::plain(9)});
  CHECK(tensor_is_zero(tensor_product(z, a)));
  CHECK_THROWS(tensor_product(a, a));  // label collision
}

TEST_CASE("reordering labels permutes axes consistently") {
  FieldCtx ctx = FieldCtx::gfp(5);
  Rng rng(11);
  Tensor a = random_tensor(ctx, 3, {Label::plain(1), Label::plain(2)}, rng);
  Tensor at = reorder_labels(a, {Label::plain(2), Label::plain(1)});
  for (u64 i = 0; i < 3; ++i)
    for (u64 j = 0; j < 3; ++j) CHECK(at.fe[j * 3 + i] == a.fe[i * 3 + j]);
  CHECK(reorder_labels(at, a.labels) == a);
}

TEST_CASE("single-edge identity flattens through the pairing") {
  FieldCtx ctx = FieldCtx::gfp(2);
  Tensor a(ctx, 2, {Label::dedge(0, 1), Label::dedge(1, 0)});
  a.fe[0] = 1;  // (1,1)
  a.fe[3] = 1;  // (2,2)
  Tensor f = flat(a);
  CHECK(f.n == 4);
  CHECK(f.labels == std::vector<Label>{Label::plain(1)});
  CHECK(f.fe == std::vector<u64>{1, 0, 0, 1});
  CHECK(unflat(f) == a);
}

TEST_CASE("flat commutes with tensor products over disjoint edges") {
  FieldCtx ctx = FieldCtx::gfp(3);
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    Tensor a = random_tensor(ctx, 2, {Label::dedge(0, 1), Label::dedge(1, 0)}, rng);
    Tensor b = random_tensor(ctx, 2, {Label::dedge(1, 2), Label::dedge(2, 1)}, rng);
    Tensor lhs = flat(tensor_product(a, b));
    Tensor rhs = tensor_product(flat(a), flat(b));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("padded and shifted tensors are the same entries regrouped") {
  Rng rng(17);
  for (u64 p : {u64{2}, u64{3}}) {
    FieldCtx ctx = FieldCtx::gfp(p);
    for (int trial = 0; trial < 10; ++trial) {
      HyperMatrix m = random_hyper(ctx, 2, 2, rng);
      Tensor pt = padded_tensor(m);
      Tensor st = shifted_tensor(m);
      CHECK(flat(pt) == st);
      // nonzero count is preserved
      std::size_t nnz_m = 0, nnz_s = 0;
      for (u64 x : m.m.fe) nnz_m += x != 0;
      for (u64 x : st.fe) nnz_s += x != 0;
      CHECK(nnz_m == nnz_s);
    }
  }
}

TEST_CASE("padded identity supports only matched pad-one entries") {
  FieldCtx ctx = FieldCtx::gfp(3);
  HyperMatrix id = HyperMatrix::identity(ctx, 2, 1);
  Tensor t = padded_tensor(id);  // digits (p, i1, j1, q), pads at value 1
  CHECK(t.order() == 4);
  for (u64 p = 0; p < 2; ++p)
    for (u64 i = 0; i < 2; ++i)
      for (u64 j = 0; j < 2; ++j)
        for (u64 q = 0; q < 2; ++q) {
          u64 v = t.fe[((p * 2 + i) * 2 + j) * 2 + q];
          CHECK(v == ((p == 0 && q == 0 && i == j) ? 1 : 0));
        }
}

TEST_CASE("iterated matrix multiplication tensor") {
  FieldCtx ctx = FieldCtx::gfp(2);
  Tensor imm = imm_tensor(2, 2, ctx);
  CHECK(imm.size() == 16);
  CHECK(std::accumulate(imm.fe.begin(), imm.fe.end(), u64{0}) == 8);  // n^3 chains
  Tensor ones = imm_tensor(1, 3, ctx);
  for (u64 x : ones.fe) CHECK(x == 1);
}

TEST_CASE("shifted identity is the boundary-pinned slice of the chain tensor") {
  for (u64 p : {u64{2}, u64{3}}) {
    FieldCtx ctx = FieldCtx::gfp(p);
    for (u32 n : {2u, 3u}) {
      for (u32 d : {2u, 3u}) {
        HyperMatrix id = HyperMatrix::identity(ctx, n, d - 1);
        Tensor st = shifted_tensor(id);
        Tensor imm = imm_tensor(n, d, ctx);
        // mask the chain tensor to a_1 = 1, b_d = 1
        std::size_t nn = static_cast<std::size_t>(n) * n;
        std::size_t tail = 1;
        for (u32 k = 1; k < d; ++k) tail *= nn;
        for (std::size_t off = 0; off < imm.size(); ++off) {
          u64 first = off / tail;           // symbol at axis 1
          u64 last = off % nn;              // symbol at axis d
          bool keep = (first / n == 0) && (last % n == 0);
          if (!keep) imm.fe[off] = 0;
        }
        CHECK(imm.fe == st.fe);
        // and the unrestricted chain tensor has strictly more support for n > 1
        Tensor full = imm_tensor(n, d, ctx);
        std::size_t full_nnz = 0, slice_nnz = 0;
        for (u64 x : full.fe) full_nnz += x != 0;
        for (u64 x : st.fe) slice_nnz += x != 0;
        CHECK(full_nnz > slice_nnz);
      }
    }
  }
}
