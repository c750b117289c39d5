// Tensors, labels, flattenings, and the pairing between [n]^2 and [n^2].
//
// A Tensor over alphabet [n] carries an ordered list of labels (its axes) and
// entries in lexicographic order with the FIRST label most significant; the
// same msb-first convention applies to the row/column multi-indices of an
// n^d x n^d HyperMatrix, so reinterpretations that only regroup adjacent
// digits (pairing, flat, shifted vs padded) leave the entry array unchanged.
//
// Labels are either plain axis ids (k) or directed edges a->b of the
// two-way infinite path (|a-b| = 1); a plain label k is encoded as the
// self-pair (k, k).
#pragma once

#include <vector>

#include "ptw/matrix.hpp"

namespace ptw {

struct Label {
  i32 u = 0, v = 0;
  static Label plain(i32 k) { return {k, k}; }
  static Label dedge(i32 from, i32 to);
  bool is_dedge() const { return u != v; }
  bool operator==(const Label& o) const { return u == o.u && v == o.v; }
  auto operator<=>(const Label& o) const = default;
};

// 1-based pairing <i,j> = (i-1)n + j; the 0-based code is i0*n + j0, i.e. the
// two-digit msb-first radix-n number.
u64 pair_index(u64 i, u64 j, u64 n);
std::pair<u64, u64> unpair_index(u64 code, u64 n);

struct Tensor {
  u32 n = 1;  // axis alphabet size
  std::vector<Label> labels;
  FieldCtx ctx;
  std::vector<u64> fe;
  std::vector<cplx> ce;

  Tensor() = default;
  Tensor(const FieldCtx& c, u32 alphabet, std::vector<Label> labs);

  std::size_t order() const { return labels.size(); }
  std::size_t size() const;
  u64 fat(std::size_t off) const { return fe[off]; }

  bool operator==(const Tensor& o) const;  // exact for finite, eps for complex
};

std::size_t checked_tensor_size(u32 n, std::size_t order);  // index-space guard

Tensor tensor_add(const Tensor& a, const Tensor& b);
Tensor tensor_sub(const Tensor& a, const Tensor& b);
Tensor tensor_scale_int(const Tensor& a, i64 s);
bool tensor_is_zero(const Tensor& a);

// Outer product; label sets must be disjoint; result labels = a's then b's.
Tensor tensor_product(const Tensor& a, const Tensor& b);

// Permute axes into the given order (a permutation of a.labels).
Tensor reorder_labels(const Tensor& a, const std::vector<Label>& order);

// Mat_{I,J}: rows indexed lex by the I-labels, columns by the J-labels, digit
// significance following the tensor's own label order in both cases; I and J
// must partition the label set (order within the arguments is irrelevant).
DenseMatrix flatten_mat(const Tensor& a, const std::vector<Label>& iset,
                        const std::vector<Label>& jset);

// --- n^d x n^d matrices viewed as order-2d objects ---

struct HyperMatrix {
  u32 n = 1;
  u32 d = 0;
  DenseMatrix m;  // n^d x n^d

  HyperMatrix() = default;
  HyperMatrix(u32 n_, u32 d_, DenseMatrix mat);
  static HyperMatrix identity(const FieldCtx& c, u32 n, u32 d);
  std::size_t side() const { return m.rows; }
};

// Order-(2d+2) tensor over the directed edges of the path with edges
// 1..d+1: Padded(M)(p, i1, j1, ..., i_d, j_d, q) = [p=q=1] * M_{(i),(j)}.
Tensor padded_tensor(const HyperMatrix& m);

// Same entries regrouped into pairs: order-(d+1) tensor over [n^2] with
// plain labels 1..d+1.
Tensor shifted_tensor(const HyperMatrix& m);

// y_e = <x at left-to-right dedge, x at right-to-left dedge> per edge.
// Input labels must be exactly the directed edges of a path graph edge set;
// output has plain labels (the edge ids) over [n^2].
Tensor flat(const Tensor& a);
Tensor unflat(const Tensor& a);  // inverse (alphabet must be a square)

// IMM_{n,d} over [n^2]^d: entry 1 iff b_t = a_{t+1} for all t < d.  Note
// this is the padding-free chain tensor; shifted_tensor(I_{n^{d-1}}) equals
// its restriction to the a_1 = b_d = 1 slice (and is zero elsewhere).
Tensor imm_tensor(u32 n, u32 d, const FieldCtx& c);

}  // namespace ptw
