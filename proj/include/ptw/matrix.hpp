// Dense matrices over a runtime FieldCtx.
//
// Storage is row-major and dual: finite-field entries live in `fe` (u64
// residues), complex entries in `ce`.  Exactly one vector is populated,
// matching ctx.finite().  Rank and factorizations use Gaussian elimination:
// exact arithmetic over finite fields (with a word-packed path for GF(2)),
// partial pivoting with threshold eps * (max initial |entry|) over
// ComplexApprox.
#pragma once

#include <vector>

#include "ptw/field.hpp"

namespace ptw {

struct DenseMatrix {
  std::size_t rows = 0, cols = 0;
  FieldCtx ctx;
  std::vector<u64> fe;
  std::vector<cplx> ce;

  DenseMatrix() = default;
  DenseMatrix(const FieldCtx& c, std::size_t r, std::size_t cl);

  static DenseMatrix identity(const FieldCtx& c, std::size_t n);

  std::size_t size() const { return rows * cols; }
  u64& f(std::size_t i, std::size_t j) { return fe[i * cols + j]; }
  u64 f(std::size_t i, std::size_t j) const { return fe[i * cols + j]; }
  cplx& c(std::size_t i, std::size_t j) { return ce[i * cols + j]; }
  cplx c(std::size_t i, std::size_t j) const { return ce[i * cols + j]; }

  void set_int(std::size_t i, std::size_t j, i64 v);  // reduces mod p / casts
  bool is_zero() const;
};

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix sub(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale_int(const DenseMatrix& a, i64 s);
DenseMatrix mul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);
bool approx_equal(const DenseMatrix& a, const DenseMatrix& b);

std::size_t rank(const DenseMatrix& a);

// M = U * V with U(rows x r), V(r x cols), r = rank(M).
std::pair<DenseMatrix, DenseMatrix> rank_factor(const DenseMatrix& m);

// Symmetric congruence factorization S = L^T L (transpose, not conjugate).
// Requires S symmetric and characteristic != 2.  Over a finite field each
// non-square diagonal pivot is split into a sum of two squares, so L has at
// most 2*rank(S) rows; over ComplexApprox every pivot has a square root and
// L has exactly rank(S) rows.
DenseMatrix gram_factor(const DenseMatrix& s);

DenseMatrix random_matrix(const FieldCtx& c, std::size_t r, std::size_t cl, Rng& rng);
DenseMatrix random_nonsingular(const FieldCtx& c, std::size_t n, Rng& rng);

u64 matrix_hash(const DenseMatrix& m);

}  // namespace ptw
