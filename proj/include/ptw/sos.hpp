// Sum-of-squares certificates for multiquadratic forms.
//
// Every n^d x n^d matrix M induces the d-multiquadratic polynomial
//   Q_M = sum_{i,j in [n]^d} M_{i,j} X^(1)_{i_1} X^(1)_{j_1} ... X^(d)_{i_d} X^(d)_{j_d},
// quadratic in each of d blocks of n variables.  An SoS certificate claims
// Q_M = sum_l g_l^2 with each g_l d-multilinear; because variables commute,
// the claim depends on M only through its symmetrization sum_kappa M^{T kappa}.
//
// The conversions here tie SoS term counts to PT-rank in both directions:
// any PT decomposition yields squares (at most 4x the value after the Gram
// symmetrization step), and any SoS certificate for a fully symmetric M
// yields a PT decomposition of value at most 2^(d-1) times the term count.
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ptw/ptcore.hpp"

namespace ptw {

// Coefficients of a d-multiquadratic polynomial, keyed by the canonical
// monomial: per block the unordered digit pair {i_k, j_k} stored as
// (min, max), packed msb-first in base n^2.  Zero coefficients are absent.
struct QuadCoeffMap {
  u32 n = 0;
  u32 d = 0;
  FieldCtx ctx;
  std::map<u64, u64> fe;   // canonical key -> coefficient (finite field)
  std::map<u64, cplx> ce;  // canonical key -> coefficient (complex)

  bool operator==(const QuadCoeffMap& o) const;
};

// Claims sum_l g_l^2 = Q_M for its target shape.  Each term g_l is stored as
// a 1 x n^d row of coefficients on the multilinear monomials
// X^(1)_{i_1} ... X^(d)_{i_d}, indexed msb-first by (i_1, ..., i_d).
struct SoSCertificate {
  u32 n = 0;
  u32 d = 0;
  FieldCtx ctx;
  std::vector<DenseMatrix> terms;
  std::string metadata;
};

// Coefficient map of Q_M: each canonical monomial receives the sum of M
// entries over the distinct ordered (i, j) pairs spelling that monomial.
QuadCoeffMap qm_coeffs(const HyperMatrix& m);

// Accepts iff the Gram matrix D = sum_l vec(g_l) vec(g_l)^T of the terms has
// the same symmetrization as M, i.e. sum_{kappa subset of [d]}
// (D - M)^{T kappa} = 0 -- equivalent to Q_D = Q_M coefficient by
// coefficient.  Throws on shape/field mismatch and in characteristic 2
// (where the Gram comparison is not faithful).
bool verify_sos(const HyperMatrix& m, const SoSCertificate& cert);

// PT decomposition -> squares.  Forms P_kappa = N_kappa^{T kappa}, sums them
// to D (whose symmetrization matches the target's by re-indexing the
// transposes of each part), symmetrizes D_s = (D + D^T)/2 since the Gram
// step needs a symmetric input, and emits one term per row of a Gram factor
// of D_s.  Term count <= 2 rank(D_s) <= 4 * cert.value, recorded in the
// metadata.  Throws in characteristic 2 or if the input fails verification.
SoSCertificate pt_to_sos(const PtCertificate& cert);

// Squares -> PT decomposition, for fully symmetric targets only: with
// D = sum_l vec(g_l) vec(g_l)^T, the parts N_kappa = 2^-(d-1) D^{T kappa}
// for kappa subset of [d-1] sum to M, and each rank(N_kappa^{T kappa})
// equals rank(D) <= #terms, so the value is at most 2^(d-1) * #terms.
// Throws in characteristic 2, if M is not fully symmetric, or if the
// certificate does not verify against M.
PtCertificate sos_to_pt(const HyperMatrix& m, const SoSCertificate& cert);

// The classical composition identities: n bilinear terms whose squares sum
// to (sum_i x_i^2)(sum_j y_j^2), from the multiplication tables of the unit
// real/complex/quaternion/octonion algebras.  Only n in {1, 2, 4, 8} exists
// (Hurwitz); the coefficients are +-1 and are re-verified in the requested
// field at load time.  Throws in characteristic 2 or for unsupported n.
SoSCertificate base_identity(const FieldCtx& ctx, u32 n);

// n-term certificate for Q_{I_{n^d}} with d a power of two: blocks are
// paired level by level, re-applying base_identity(n) with the previous
// level's terms as the new variables (possible because the base identity
// has exactly n terms).  Throws for n not in {1, 2, 4, 8}, d not a power of
// two, or characteristic 2.
SoSCertificate compose_sos(const FieldCtx& ctx, u32 n, u32 d);

// Supplies an SoS certificate for Q_{I_{m^2}} (two blocks of m variables).
using CoarseSosProvider = std::function<SoSCertificate(const FieldCtx&, u32)>;

// Upper bound for the identity via the coarse pairing: view I_{n^d} (d even)
// as an [n^(d/2)]^2 matrix, certify that coarse form by squares (built-in
// base identity when n^(d/2) is 1, 2, 4 or 8, otherwise the provider),
// convert with sos_to_pt at the coarse grouping, and regroup the parts back
// to [n]^d.  The result verifies with value <= 2 * (coarse term count).
PtCertificate pairing_upper_bound(const HyperMatrix& m,
                                  const CoarseSosProvider& provider = {});

}  // namespace ptw
