// Ordered algebraic branching programs and set-multilinear formulas.
//
// An ordered branching program computes a set-multilinear polynomial
//   f = v1^T M_1 M_2 ... M_d v2
// where layer t is a w_{t-1} x w_t matrix whose entries are linear forms in
// block t's variables only.  Expanding the product gives the coefficient
// tensor of f over plain labels 1..d (abp_eval).
//
// The bridge to partial-transpose rank: when the program computes the
// shifted tensor of an n^D x n^D matrix M (D = d-1, d odd), cutting the
// program at the middle layer c = (d+1)/2 factors the left/right flattening
// of the order-2d unflattened tensor through the layer-c boundary.  After
// pinning the two padded end coordinates to the first symbol, an exact rank
// factorization of that flattening yields pairs (B_l, C_l) of order-(d-1)
// tensors with
//   M = sum_l Bhat_l (x) Chat_l            (Kronecker product)
// where Bhat_l / Chat_l regroup each factor's even coordinates against its
// odd ones (abp_middle_cut).  Each Kronecker term is the image of the coarse
// identity I_N (x) I_N, N = n^{D/2}, under a (generally singular) Kronecker
// action, so a partial-transpose certificate for the coarse identity
// transports to each term and the sum certifies M with value at most
// (#pairs) * (coarse identity value) (abp_to_pt_cert).
//
// Set-multilinear formulas are ASTs of leaves (one variable of one block,
// scaled), sums (children over the same block set), and binary products
// (children over disjoint block sets).  formula_eval expands the coefficient
// tensor; every formula is an upper-bound witness for set-multilinear
// formula size, which main_theorem_check exploits: for a formula over the
// edge blocks of a path graph G it verifies
//   leaves(f) >= n^{log2 ell(G)} * rho(A)      (always asserted)
// where A is the unflattened coefficient tensor, and reports the margin
// against the stronger n^{1 + log2 ell(G)} * rho(A) form without asserting
// it.  When G is a single path it also extracts the matrix M carried by the
// pad slice (zeroing the non-slice variables of the end blocks turns any
// formula for the tensor into one for the shifted tensor of M with no more
// leaves) and verifies leaves(f) >= pt_rank(M) / n^{D - log2 D + 1}.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptw/pathgraph.hpp"
#include "ptw/ptcore.hpp"

namespace ptw {

struct OrderedABP {
  u32 n = 0;  // block alphabet size (n^2 for shifted-tensor programs)
  u32 d = 0;  // degree = number of layers
  FieldCtx ctx;
  std::vector<u32> widths;  // w_0 .. w_d
  // layer t (0-based) packs its w_t x w_{t+1} entries row-major; row
  // i * w_{t+1} + j holds the coefficient vector (length n) of the linear
  // form in block t+1 at position (i, j).
  std::vector<DenseMatrix> layers;
  DenseMatrix v1, v2;  // 1 x w_0 and 1 x w_d boundary rows

  std::size_t size() const;  // sum of the widths
  u32 width() const;         // max width
  // Throws invalid_argument unless the shape chain is consistent.  Entries
  // can only reference their own block by construction of the layout.
  void validate() const;
};

// Expands v1^T M_1 ... M_d v2 into the coefficient tensor over plain labels
// 1..d with alphabet abp.n.
Tensor abp_eval(const OrderedABP& abp);

// The canonical width-n program for the iterated-matrix-multiplication
// tensor over [n^2]^d: layer entries M_t(i, j) = X^(t)_{i n + j}, all-ones
// boundaries, size (d+1) n.
OrderedABP abp_for_imm(u32 n, u32 d, const FieldCtx& ctx);

// Same layers with first-basis-vector boundaries: evaluates to the shifted
// tensor of the n^{d-1} x n^{d-1} identity matrix (the pad-slice restriction
// of the iterated-matrix-multiplication tensor).
OrderedABP abp_for_shifted_identity(u32 n, u32 d, const FieldCtx& ctx);

struct MiddleCut {
  u32 cut = 0;        // middle layer index, 1-based: ceil(d/2)
  std::size_t rank = 0;  // #pairs = exact rank of the pinned flattening
  u64 apriori = 0;       // width^2 * alphabet bound on that rank
  // pairs of order-(d-1) tensors over the root alphabet, plain labels
  // 1..d-1; the pinned left/right flattening equals sum_l vec(b[l]) vec(c[l])^T
  std::vector<Tensor> b, c;
  // coarse N x N regroupings (even coordinates vs odd); for odd d the target
  // satisfies M = sum_l bhat[l] (x) chat[l], re-verified at construction
  std::vector<DenseMatrix> bhat, chat;
  std::string notes;
};

// Cuts the program at layer ceil(d/2) after checking that it evaluates to
// the shifted tensor of m.  Also re-verifies the cut identity itself: the
// evaluation must equal the sum over boundary index pairs of
// prefix (x) middle-layer form (x) suffix.  Throws invalid_argument on an
// evaluation mismatch and logic_error if the reassembly fails.
MiddleCut abp_middle_cut(const OrderedABP& abp, const HyperMatrix& m);

// Supplies a verified partial-transpose certificate for the identity on
// [side]^2 (an order-2 target of alphabet `side`).
using CoarseIdentityProvider = std::function<PtCertificate(const FieldCtx&, u32)>;

// The default provider: the Hurwitz composition squares route away from
// characteristic 2 when side is 1, 2, 4, or 8 (value <= 2 * side), plus the
// exhaustive search over GF(2) when side = 2.  Throws for other sizes.
PtCertificate builtin_coarse_identity(const FieldCtx& ctx, u32 side);

// The full pipeline: middle cut, coarse identity certificate, one Kronecker
// action per pair, summation, and regrouping back to fine axes.  Returns a
// certificate for m that verifies with value <= rank * (provider value);
// the metadata records every link of that chain.  Requires odd abp.d (the
// split of the middle block balances the two halves only then; even degrees
// throw invalid_argument).
PtCertificate abp_to_pt_cert(const OrderedABP& abp, const HyperMatrix& m,
                             const CoarseIdentityProvider& provider = {});

struct SmFormula {
  enum class Kind { leaf, plus, times };
  Kind kind = Kind::leaf;
  // leaf payload: one variable X^(block)_var scaled by a constant
  i32 block = 0;
  u32 var = 0;
  u64 fscalar = 1;
  cplx cscalar = {1.0, 0.0};
  // plus: any arity >= 1 over a common block set; times: exactly two
  // children over disjoint block sets
  std::vector<SmFormula> kids;

  static SmFormula leaf(i32 block, u32 var, u64 scalar = 1);
  static SmFormula cleaf(i32 block, u32 var, cplx scalar);
  static SmFormula plus(std::vector<SmFormula> kids);
  static SmFormula times(SmFormula left, SmFormula right);
};

// Number of leaf nodes.
u64 formula_leaves(const SmFormula& f);

// Sorted block set of the formula (throws on set-multilinearity violations:
// overlapping blocks under a product, differing block sets under a sum).
std::vector<i32> formula_blocks(const SmFormula& f);

// Coefficient tensor over the formula's sorted plain block labels.
Tensor formula_eval(const SmFormula& f, const FieldCtx& ctx, u32 alphabet);

// Random formula over the given sorted block interval: products split the
// block list contiguously, sums have fanin <= max_fanin, depth <= max_depth,
// leaf scalars are uniform field elements (small integers over the complex
// field).  Deterministic per rng state.
SmFormula random_formula(Rng& rng, const std::vector<i32>& blocks, u32 alphabet,
                         const FieldCtx& ctx, u32 max_depth = 4, u32 max_fanin = 3);

struct MainTheoremReport {
  u64 leaves = 0;
  u32 longest = 0;  // ell(G)
  RelValue rho;     // exact path measure of the unflattened tensor
  double bound_log2 = 0;         // log2(n^{log2 ell} * rho); -inf if rho = 0
  double margin_log2 = 0;        // log2(leaves) - bound_log2
  double strong_margin_log2 = 0; // margin against n^{1 + log2 ell} * rho
  bool ok = false;               // weak-form inequality holds
  // pad-slice extraction (single-path graphs with at least two edges):
  bool shifted = false;
  std::size_t pt_value = 0;
  double pt_bound_log2 = 0;  // log2(pt_value / n^{D - log2 D + 1})
  bool pt_ok = true;
  std::string notes;
};

// Checks a formula over the edge blocks of g against the lower bounds it
// must respect as an upper-bound witness.  alphabet must be a perfect
// square n^2; the formula's block set must equal g's edge set.  Throws on
// mismatches and propagates budget errors from the exhaustive measures.
MainTheoremReport main_theorem_check(const SmFormula& f, const FieldCtx& ctx,
                                     u32 alphabet, const PathGraph& g,
                                     u64 budget = kDefaultAssignmentBudget);

}  // namespace ptw
