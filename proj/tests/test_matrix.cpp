#include "doctest.h"
#include "ptw/matrix.hpp"

using namespace ptw;

namespace {

DenseMatrix from_ints(const FieldCtx& ctx, std::size_t rows, std::size_t cols,
                      const std::vector<i64>& vals) {
  DenseMatrix m(ctx, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m.set_int(r, c, vals[r * cols + c]);
  return m;
}

}  // namespace

TEST_CASE("rank over small finite fields") {
  for (u64 p : {u64{2}, u64{3}, u64{7}}) {
    FieldCtx ctx = FieldCtx::gfp(p);
    CHECK(rank(DenseMatrix::identity(ctx, 5)) == 5);
    CHECK(rank(DenseMatrix(ctx, 4, 6)) == 0);
    // rank-1 outer product
    DenseMatrix m(ctx, 3, 3);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) m.set_int(r, c, static_cast<i64>((r + 1) * (c + 1)));
    if (p > 3)
      CHECK(rank(m) == 1);
    else
      CHECK(rank(m) <= 1);  // some entries may vanish mod small p
  }
  // char-sensitive example: all-ones 2x2 plus identity is singular mod 3
  FieldCtx f3 = FieldCtx::gfp(3);
  CHECK(rank(from_ints(f3, 2, 2, {2, 1, 1, 2})) == 1);
}

TEST_CASE("rank over the complex numbers tolerates scale") {
  FieldCtx cx = FieldCtx::complex_approx();
  DenseMatrix m(cx, 3, 3);
  m.c(0, 0) = {1e6, 0};
  m.c(1, 1) = {1e-2, 0};  // eight orders below scale: still well above eps*scale
  m.c(2, 2) = {0, 1e6};
  CHECK(rank(m) == 3);
  m.c(1, 1) = {1e-6, 0};  // twelve orders below scale: numerically zero
  CHECK(rank(m) == 2);
  DenseMatrix r1(cx, 3, 3);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) r1.c(r, c) = cplx(1.0 + r, 0.0) * cplx(2.0 - c, 1.0);
  CHECK(rank(r1) == 1);
}

TEST_CASE("rank factorization reproduces the matrix with rank-many terms") {
  Rng rng(1001);
  for (u64 p : {u64{2}, u64{5}}) {
    FieldCtx ctx = FieldCtx::gfp(p);
    for (int trial = 0; trial < 20; ++trial) {
      DenseMatrix m = random_matrix(ctx, 4 + trial % 3, 5, rng);
      auto [u, v] = rank_factor(m);
      CHECK(u.cols == rank(m));
      CHECK(v.rows == rank(m));
      CHECK(approx_equal(mul(u, v), m));
    }
  }
  FieldCtx cx = FieldCtx::complex_approx();
  for (int trial = 0; trial < 10; ++trial) {
    DenseMatrix m = random_matrix(cx, 4, 4, rng);
    auto [u, v] = rank_factor(m);
    CHECK(u.cols == rank(m));
    CHECK(approx_equal(mul(u, v), m));
  }
}

TEST_CASE("gram factorization writes symmetric matrices as L^T L") {
  Rng rng(2002);
  for (u64 p : {u64{3}, u64{7}, u64{1048583}}) {
    FieldCtx ctx = FieldCtx::gfp(p);
    for (int trial = 0; trial < 15; ++trial) {
      DenseMatrix a = random_matrix(ctx, 4, 4, rng);
      DenseMatrix s = add(a, transpose(a));  // symmetric, char != 2
      DenseMatrix l = gram_factor(s);
      CHECK(approx_equal(mul(transpose(l), l), s));
      CHECK(l.rows <= 2 * rank(s));
    }
  }
  FieldCtx cx = FieldCtx::complex_approx();
  for (int trial = 0; trial < 10; ++trial) {
    DenseMatrix a = random_matrix(cx, 3, 3, rng);
    DenseMatrix s = add(a, transpose(a));
    DenseMatrix l = gram_factor(s);
    CHECK(approx_equal(mul(transpose(l), l), s));
    CHECK(l.rows == rank(s));
  }
}

TEST_CASE("gram factorization rejects characteristic two and asymmetry") {
  FieldCtx f2 = FieldCtx::gfp(2);
  CHECK_THROWS(gram_factor(DenseMatrix::identity(f2, 2)));
  FieldCtx f3 = FieldCtx::gfp(3);
  CHECK_THROWS(gram_factor(from_ints(f3, 2, 2, {0, 1, 2, 0})));
}

TEST_CASE("kronecker product interacts with multiplication and transpose") {
  FieldCtx ctx = FieldCtx::gfp(7);
  Rng rng(3003);
  DenseMatrix a = random_matrix(ctx, 2, 3, rng), b = random_matrix(ctx, 3, 2, rng);
  DenseMatrix c = random_matrix(ctx, 3, 2, rng), d = random_matrix(ctx, 2, 3, rng);
  CHECK(approx_equal(mul(kron(a, b), kron(c, d)), kron(mul(a, c), mul(b, d))));
  CHECK(approx_equal(transpose(kron(a, b)), kron(transpose(a), transpose(b))));
  CHECK(rank(kron(a, b)) == rank(a) * rank(b));
}

TEST_CASE("nonsingular sampling and matrix hashing") {
  FieldCtx ctx = FieldCtx::gfp(3);
  Rng rng(4004);
  for (int trial = 0; trial < 10; ++trial) {
    DenseMatrix m = random_nonsingular(ctx, 4, rng);
    CHECK(rank(m) == 4);
  }
  DenseMatrix x = random_matrix(ctx, 3, 3, rng);
  DenseMatrix y = x;
  CHECK(matrix_hash(x) == matrix_hash(y));
  y.set_int(0, 0, y.f(0, 0) == 0 ? 1 : 0);
  CHECK(matrix_hash(x) != matrix_hash(y));
}
