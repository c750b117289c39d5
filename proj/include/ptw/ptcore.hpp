// Partial transposes and partial-transpose (PT) rank.
//
// For an n^d x n^d matrix and kappa ⊆ [d], the kappa-partial transpose swaps
// the row digit i_k with the column digit j_k for every k in kappa.  The
// PT-rank of M is the minimum of sum_kappa rank(N_kappa^{T kappa}) over all
// decompositions M = sum_kappa N_kappa; restricting kappa to subsets of
// [d-1] loses nothing because transposing a part turns kappa into its
// complement without changing its rank.
//
// kappa values are bitmasks: bit k-1 set means axis k is transposed.
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptw/tensor.hpp"

namespace ptw {

constexpr u64 kDefaultAssignmentBudget = u64{1} << 28;

HyperMatrix partial_transpose(const HyperMatrix& m, u32 kappa);

bool is_fully_symmetric(const HyperMatrix& m);

// Scans kappa ⊆ [d-1] in ascending-bitmask order; first kappa with
// rank(M^{T kappa}) = 1 wins.
std::optional<u32> pt_basic_witness(const HyperMatrix& m);
bool is_pt_basic(const HyperMatrix& m);

struct PtCertificate {
  HyperMatrix target;
  std::map<u32, DenseMatrix> parts;  // kappa (subset of [d-1]) -> N_kappa
  std::size_t value = 0;             // sum of rank(N_kappa^{T kappa})
  std::string metadata;
};

// Fold kappa into [d-1] by complementation if it contains axis d (valid for
// the same part matrix since that transpose preserves rank).
u32 normalize_kappa(u32 kappa, u32 d);

// Build a certificate from possibly unnormalized parts: kappas are folded
// into [d-1], duplicates merged by addition, zero parts dropped, and the
// value recomputed.
PtCertificate make_pt_certificate(const HyperMatrix& target,
                                  const std::vector<std::pair<u32, DenseMatrix>>& parts,
                                  std::string metadata = "");

// Checks sum-of-parts = target exactly and recomputes the value; throws on
// shape/field mismatch or a bad sum.
std::size_t verify_pt_certificate(const PtCertificate& cert);

// Exhaustive minimum over all decompositions (finite fields only).  All parts
// except the lexicographically last kappa range over every matrix; budget
// counts candidate assignments |F|^((2^(d-1)-1) n^(2d)).  First minimum in
// enumeration order wins.
std::pair<std::size_t, PtCertificate> pt_rank_exact(
    const HyperMatrix& m, u64 budget = kDefaultAssignmentBudget,
    unsigned threads = 1);

// Heuristic upper bounds; always returns a certificate that verifies.
//  - "single-kappa": all of M on the kappa minimizing rank(M^{T kappa}).
//  - "greedy-peel":  repeatedly subtract a PT-basic term peeled from the
//                    best kappa's elimination.
//  - "restart-local": seeded random entry reassignment between parts,
//                    keeping improvements; deterministic per seed.
PtCertificate pt_rank_search(const HyperMatrix& m, const std::string& strategy,
                             u64 seed = 0);

namespace detail {
// The table-free enumeration path, exposed so tests can cross-check the
// specialized fast paths against it.
std::pair<std::size_t, PtCertificate> pt_rank_exact_generic(const HyperMatrix& m,
                                                            u64 budget,
                                                            unsigned threads);
}  // namespace detail

// PM = (B_1 kron ... kron B_d) * M.  Transports a certificate part-by-part
// (N_kappa -> P N_kappa); the result verifies with value <= the input's,
// with equality whenever every B_k is nonsingular.
std::pair<HyperMatrix, std::optional<PtCertificate>> kron_act(
    const HyperMatrix& m, const std::vector<DenseMatrix>& blocks,
    const std::optional<PtCertificate>& cert = std::nullopt);

// Reinterpret an [n]^(p q) matrix as alphabet-n^p, order-q (same entries).
HyperMatrix regroup_view(const HyperMatrix& m, u32 p, u32 q);

// Map a certificate over the coarse [n^p]^q view to one over [n]^(p q):
// each coarse axis t in kappa becomes the run of p fine axes it covers.
// The value is unchanged.
PtCertificate regroup_cert(const PtCertificate& coarse, u32 p, u32 n);

// Outer-product factorization M = U V (columns of U times rows of V).
struct OuterFactorization {
  DenseMatrix u;  // n^d x r
  DenseMatrix v;  // r x n^d
};

// Expand a factorization of M into one of M^{T kappa} with at most
// r * n^(2 min(|kappa|, d-|kappa|)) terms via the indicator construction
// (the complemented side is used when it is cheaper, then transposed back).
OuterFactorization transpose_rank_growth(const HyperMatrix& m, u32 kappa,
                                         const OuterFactorization& fac);

struct CensusMode {
  bool exhaustive = true;
  u64 sample_count = 0;
  u64 seed = 0;
  static CensusMode all() { return {}; }
  static CensusMode sample(u64 count, u64 seed) { return {false, count, seed}; }
};

struct CensusResult {
  std::map<std::size_t, u64> histogram;  // PT-rank value -> matrix count
  u64 population = 0;
};

// Exact PT-rank distribution over all (or sampled) matrices, optionally
// restricted to the fully symmetric ones.
CensusResult ptrank_census(u32 n, u32 d, const FieldCtx& ctx,
                           const CensusMode& mode, bool fully_symmetric_only,
                           u64 budget = kDefaultAssignmentBudget,
                           unsigned threads = 1);

// Number of orbits of entry positions under all partial transposes; the
// fully symmetric population size is |F|^orbits.
std::size_t symmetry_orbit_count(u32 n, u32 d);

// The n^2 x n^2 swap operator S[(i1,i2),(j1,j2)] = [i1=j2][i2=j1]: full rank
// n^2, yet PT-basic (its {1}-partial transpose is the rank-one vec(I) vec(I)^T),
// witnessing the maximal rank growth of a single partial transpose.
HyperMatrix swap_matrix(const FieldCtx& ctx, u32 n);

// Two-part certificate showing the 4x4 identity (n=2, d=2) has PT-rank 2:
// I = P + Q^{T{1}} with rank-one P and Q; valid over every field.
PtCertificate identity4_certificate(const FieldCtx& ctx);

}  // namespace ptw
