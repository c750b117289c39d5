// Structured candidate matrices W_T and machine checks of their rank
// behavior under partial transposes and coarse flattenings.
//
// A candidate is parameterized by a d x d exponent matrix T over the prime
// field F_n (n prime, and by default n > 2d with d even).  Given any context
// that supplies an element omega of exact multiplicative order n — the
// complex root e^{2*pi*i/n} or a cyclotomic-modular context — the candidate
// is the n^d x n^d matrix
//
//     W_T[(i_1..i_d), (j_1..j_d)] = omega^{ (i) T (j)^T }.
//
// Why this family is interesting for partial-transpose rank:
//   * T = 0 gives the all-ones matrix (rank 1 everywhere) and T = I_d gives
//     a Kronecker power of discrete-Fourier matrices, both easy.
//   * T = cyclic shift admits a rank-one partial transpose: transposing the
//     odd axes rearranges the exponent into a product of one row-dependent
//     and one column-dependent character, exhibited here as an explicit
//     outer-product certificate (cyclic_rank1_cert) that is re-verified
//     entrywise on every construction.
//   * T = upper triangular makes the shifted tensor of W_T computable by a
//     width-n ordered branching program (the boundary state only needs the
//     running sum of the i-digits), so the middle-cut flattening has small
//     rank and the program-to-certificate pipeline applies
//     (triangular_flattening_check).
//   * T = Cauchy destroys both of those routes: every partial transpose of
//     W_T keeps full rank n^d (wt_kappa_rank_scan), and every coarse
//     row/column regrouping W_T^[lambda] has the maximal rank
//     n^{2 min(|lambda|, d-|lambda|)} permitted by its shape
//     (wt_lambda_flatten_rank).  The scans verify both claims numerically.
//
// Exactness policy: complex builds decide ranks through the context's eps;
// cyclotomic-modular builds are exact, and agreement between the two primes
// of FieldCtx::cycmod_pair (plus the complex build) is asserted by the test
// and acceptance suites rather than assumed.
//
// Index conventions match the rest of the workbench: multi-indices are
// most-significant-first, axis k of a partial-transpose mask is bit k-1.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "ptw/abp.hpp"

namespace ptw {

// d x d matrix of exponents over F_n.  Entries are residues in [0, n).
struct ExponentMatrix {
  u32 n = 0;            // root order / digit alphabet, prime
  u32 d = 0;            // number of axes
  std::vector<u32> t;   // row-major, d * d entries

  u32 at(u32 a, u32 b) const { return t[static_cast<std::size_t>(a) * d + b]; }
  u32& at(u32 a, u32 b) { return t[static_cast<std::size_t>(a) * d + b]; }

  // n prime and entries reduced; unless relax is set, also d even and
  // n > 2d (the regime the full-rank arguments need).
  void validate(bool relax = false) const;

  static ExponentMatrix zeros(u32 n, u32 d);
  static ExponentMatrix identity(u32 n, u32 d);
  // (a, b) entry = 1 iff a+1 = b cyclically (0-based: b = a+1 mod d)
  static ExponentMatrix cyclic(u32 n, u32 d);
  // (a, b) entry = 1 iff a <= b
  static ExponentMatrix triangular(u32 n, u32 d);
};

// Cauchy exponent matrix T[a][b] = (x_a + y_b)^{-1} mod n with the fixed
// parameters x_a = a - 1, y_b = b (1-based a, b), so every sum lies in
// [1, 2d-1] and n > 2d keeps all denominators invertible.  Every square
// submatrix of a Cauchy matrix is nonsingular, which is exactly what the
// full-rank scans exercise.  Throws when n <= 2d or n is not prime.
ExponentMatrix cauchy_t(u32 d, u32 n);

// The candidate matrix itself.  ctx must supply an order-n root of unity:
// complex-approx always does; a cyclotomic-modular context must have been
// built for this n.  Plain prime-field contexts are rejected.
HyperMatrix build_wt(const ExponentMatrix& t, const FieldCtx& ctx, bool relax = false);

// Rank-one partial transpose of the cyclic candidate: kappa is the mask of
// the odd axes {1, 3, ..., d-1}, and u, v are explicit n^d-entry column
// vectors with W^{T_kappa} = u * v^T.  The construction re-verifies the
// outer product entrywise and throws std::logic_error on any mismatch, so a
// returned certificate is always valid.  Requires even d.
struct CyclicCert {
  u32 kappa = 0;
  DenseMatrix u, v;
};
CyclicCert cyclic_rank1_cert(u32 n, u32 d, const FieldCtx& ctx);

// Ranks of all 2^d partial transposes of w, keyed by the kappa mask.
// Deterministic for any thread count (shards merge in mask order).
std::map<u32, std::size_t> wt_kappa_rank_scan(const HyperMatrix& w, u32 threads = 1);

// Rank of the coarse flattening W^[lambda]: rows indexed by (i_lambda,
// j_lambda), columns by the complementary digit pairs, so the matrix is
// n^{2|lambda|} x n^{2(d-|lambda|)}.  lambda is an axis mask (bit k-1 =
// axis k), and lambda = 0 gives a single row of rank <= 1.
std::size_t wt_lambda_flatten_rank(const HyperMatrix& w, u32 lambda);

// The upper-triangular candidate's escape hatch, end to end: builds W for
// triangular T, checks that the middle cut of the unflattened shifted
// tensor (first d+1 positions against the rest) has rank at most n^2,
// exhibits the width-n ordered branching program computing the shifted
// tensor, and — when the program has an odd number of blocks (d even) —
// routes it through abp_to_pt_cert.  When no built-in coarse identity
// certificate exists for the cut side n^{d/2}, the route falls back to the
// trivial single-part certificate so the pipeline still runs; the notes
// record which provider was used.
struct TriangularReport {
  u32 n = 0, d = 0;
  std::size_t cut_rank = 0;  // middle-cut rank of the unflattened tensor
  u64 cut_bound = 0;         // n^2
  bool cut_ok = false;       // cut_rank <= cut_bound
  bool abp_ok = false;       // witness program reproduces the shifted tensor
  bool cert_ran = false;     // pipeline executed (needs even d)
  std::size_t cert_value = 0;
  bool cert_ok = false;      // emitted certificate verified
  std::string notes;
};
TriangularReport triangular_flattening_check(u32 n, u32 d, const FieldCtx& ctx);

}  // namespace ptw
