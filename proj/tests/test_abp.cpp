#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "ptw/abp.hpp"

using namespace ptw;

namespace {

// width-n program for the shifted tensor of diag(lambda): layer 2 carries
// the diagonal weights, layers 1 and 3 route the padded end variables
OrderedABP diag_abp(const FieldCtx& ctx, u32 n, const std::vector<u64>& lambda) {
  OrderedABP abp;
  abp.n = n * n;
  abp.d = 3;
  abp.ctx = ctx;
  abp.widths = {1, n, n, 1};
  DenseMatrix l0(ctx, n, static_cast<std::size_t>(n) * n);
  for (u32 a = 0; a < n; ++a) l0.set_int(a, a, 1);
  DenseMatrix l1(ctx, static_cast<std::size_t>(n) * n, static_cast<std::size_t>(n) * n);
  for (u32 a = 0; a < n; ++a)
    for (u32 b = 0; b < n; ++b)
      l1.set_int(static_cast<std::size_t>(a) * n + b, static_cast<std::size_t>(a) * n + b,
                 static_cast<i64>(lambda[static_cast<std::size_t>(a) * n + b]));
  DenseMatrix l2(ctx, n, static_cast<std::size_t>(n) * n);
  for (u32 b = 0; b < n; ++b) l2.set_int(b, static_cast<std::size_t>(b) * n, 1);
  abp.layers = {l0, l1, l2};
  abp.v1 = DenseMatrix(ctx, 1, 1);
  abp.v1.set_int(0, 0, 1);
  abp.v2 = DenseMatrix(ctx, 1, 1);
  abp.v2.set_int(0, 0, 1);
  return abp;
}

HyperMatrix diag_hyper(const FieldCtx& ctx, u32 n, const std::vector<u64>& lambda) {
  DenseMatrix mm(ctx, static_cast<std::size_t>(n) * n, static_cast<std::size_t>(n) * n);
  for (std::size_t k = 0; k < lambda.size(); ++k)
    mm.set_int(k, k, static_cast<i64>(lambda[k]));
  return HyperMatrix(n, 2, std::move(mm));
}

// eight leaves summing the products of two symbolic 2x2 matrices
SmFormula imm22_formula() {
  std::vector<SmFormula> terms;
  for (u32 k = 0; k < 2; ++k) {
    SmFormula left = SmFormula::plus({SmFormula::leaf(1, 0 * 2 + k), SmFormula::leaf(1, 1 * 2 + k)});
    SmFormula right = SmFormula::plus({SmFormula::leaf(2, k * 2 + 0), SmFormula::leaf(2, k * 2 + 1)});
    terms.push_back(SmFormula::times(std::move(left), std::move(right)));
  }
  return SmFormula::plus(std::move(terms));
}

}  // namespace

TEST_CASE("ordered programs evaluate to their coefficient tensors") {
  FieldCtx gf3 = FieldCtx::gfp(3);

  // one-variable layers multiply to a one-hot coefficient
  OrderedABP unit;
  unit.n = 3;
  unit.d = 2;
  unit.ctx = gf3;
  unit.widths = {1, 1, 1};
  for (int t = 0; t < 2; ++t) {
    DenseMatrix layer(gf3, 1, 3);
    layer.set_int(0, 0, 1);
    unit.layers.push_back(layer);
  }
  unit.v1 = DenseMatrix(gf3, 1, 1);
  unit.v1.set_int(0, 0, 1);
  unit.v2 = unit.v1;
  Tensor one_hot = abp_eval(unit);
  CHECK(one_hot.fe[0] == 1);
  CHECK(std::count(one_hot.fe.begin(), one_hot.fe.end(), u64{0}) == 8);

  // zero boundary annihilates the program
  OrderedABP dead = unit;
  dead.v2 = DenseMatrix(gf3, 1, 1);
  Tensor zero = abp_eval(dead);
  CHECK(std::count(zero.fe.begin(), zero.fe.end(), u64{0}) == 9);

  // inconsistent shape chains are rejected
  OrderedABP broken = unit;
  broken.widths = {1, 2, 1};
  CHECK_THROWS_AS(abp_eval(broken), std::invalid_argument);
  broken = unit;
  broken.layers[1] = DenseMatrix(gf3, 1, 2);
  CHECK_THROWS_AS(abp_eval(broken), std::invalid_argument);
}

TEST_CASE("canonical programs: iterated product and its pad slice") {
  for (const FieldCtx& ctx :
       {FieldCtx::gfp(3), FieldCtx::gfp(2), FieldCtx::complex_approx()}) {
    OrderedABP imm = abp_for_imm(2, 3, ctx);
    CHECK(imm.size() == 8);  // (d+1) * n
    CHECK(imm.width() == 2);
    CHECK(abp_eval(imm) == imm_tensor(2, 3, ctx));

    OrderedABP shifted = abp_for_shifted_identity(2, 3, ctx);
    CHECK(abp_eval(shifted) == shifted_tensor(HyperMatrix::identity(ctx, 2, 2)));
  }

  // alphabet one: every block has a single variable, the tensor is all-ones
  FieldCtx gf5 = FieldCtx::gfp(5);
  Tensor ones = abp_eval(abp_for_imm(1, 2, gf5));
  CHECK(ones.fe == std::vector<u64>{1});
  CHECK(abp_eval(abp_for_imm(2, 2, gf5)) == imm_tensor(2, 2, gf5));
}

TEST_CASE("middle cut extracts Kronecker pairs with certified rank") {
  FieldCtx gf3 = FieldCtx::gfp(3);
  HyperMatrix ident = HyperMatrix::identity(gf3, 2, 2);
  OrderedABP abp = abp_for_shifted_identity(2, 3, gf3);

  MiddleCut cut = abp_middle_cut(abp, ident);
  CHECK(cut.cut == 2);
  CHECK(cut.rank == 1);  // the chain factorizes through one boundary pattern
  CHECK(cut.rank <= abp.width());
  CHECK(cut.apriori == 16);  // width^2 * block alphabet
  REQUIRE(cut.b.size() == 1);
  REQUIRE(cut.bhat.size() == 1);
  CHECK(cut.b[0].fe == std::vector<u64>{1, 0, 0, 1});
  CHECK(cut.c[0].fe == std::vector<u64>{1, 0, 0, 1});
  CHECK(rank(cut.bhat[0]) == 2);
  CHECK(rank(cut.chat[0]) == 2);

  // diagonal targets: the pair count equals the rank of the weight matrix
  FieldCtx gf5 = FieldCtx::gfp(5);
  Rng rng(31);
  for (int rep = 0; rep < 4; ++rep) {
    std::vector<u64> lambda(4);
    for (u64& x : lambda) x = rng.below(5);
    if (std::count(lambda.begin(), lambda.end(), u64{0}) == 4) lambda[0] = 1;
    OrderedABP dabp = diag_abp(gf5, 2, lambda);
    HyperMatrix dm = diag_hyper(gf5, 2, lambda);
    CHECK(abp_eval(dabp) == shifted_tensor(dm));
    MiddleCut dcut = abp_middle_cut(dabp, dm);
    DenseMatrix weights(gf5, 2, 2);
    for (u32 a = 0; a < 2; ++a)
      for (u32 b = 0; b < 2; ++b) weights.set_int(a, b, static_cast<i64>(lambda[a * 2 + b]));
    CHECK(dcut.rank == rank(weights));
    CHECK(dcut.rank <= dcut.apriori);
  }

  // a width-1 program carries a single pair
  std::vector<u64> one_hot_weights = {1, 0, 0, 0};
  OrderedABP w1 = diag_abp(gf5, 2, one_hot_weights);
  MiddleCut wcut = abp_middle_cut(w1, diag_hyper(gf5, 2, one_hot_weights));
  CHECK(wcut.rank == 1);

  // evaluation mismatch and shape mismatch are rejected
  CHECK_THROWS_AS(abp_middle_cut(abp_for_imm(2, 3, gf3), ident), std::invalid_argument);
  CHECK_THROWS_AS(abp_middle_cut(abp, HyperMatrix::identity(gf3, 2, 1)),
                  std::invalid_argument);
}

TEST_CASE("certificate pipeline transports the coarse identity") {
  SUBCASE("odd characteristic identity") {
    FieldCtx gf3 = FieldCtx::gfp(3);
    HyperMatrix ident = HyperMatrix::identity(gf3, 2, 2);
    OrderedABP abp = abp_for_shifted_identity(2, 3, gf3);
    std::size_t vp = verify_pt_certificate(builtin_coarse_identity(gf3, 2));
    PtCertificate cert = abp_to_pt_cert(abp, ident);
    CHECK(verify_pt_certificate(cert) == cert.value);
    CHECK(cert.target.m.fe == ident.m.fe);
    CHECK(cert.value <= 2 * vp);
    CHECK(cert.metadata.find("coarse identity side 2") != std::string::npos);
    auto [exact, oracle] = pt_rank_exact(ident);
    CHECK(cert.value >= exact);
  }

  SUBCASE("characteristic two falls back to the exhaustive coarse certificate") {
    FieldCtx gf2 = FieldCtx::gfp(2);
    HyperMatrix ident = HyperMatrix::identity(gf2, 2, 2);
    OrderedABP abp = abp_for_shifted_identity(2, 3, gf2);
    PtCertificate cert = abp_to_pt_cert(abp, ident);
    CHECK(verify_pt_certificate(cert) == cert.value);
    // one pair, so the pipeline value collapses onto the exact optimum
    CHECK(cert.value == pt_rank_exact(ident).first);
  }

  SUBCASE("diagonal targets over a larger prime") {
    FieldCtx gf7 = FieldCtx::gfp(7);
    std::vector<u64> lambda = {2, 5, 1, 3};
    OrderedABP dabp = diag_abp(gf7, 2, lambda);
    HyperMatrix dm = diag_hyper(gf7, 2, lambda);
    std::size_t vp = verify_pt_certificate(builtin_coarse_identity(gf7, 2));
    PtCertificate cert = abp_to_pt_cert(dabp, dm);
    CHECK(verify_pt_certificate(cert) == cert.value);
    MiddleCut dcut = abp_middle_cut(dabp, dm);
    CHECK(cert.value <= dcut.rank * vp);
  }

  SUBCASE("complex field uses the composition squares") {
    FieldCtx cx = FieldCtx::complex_approx();
    HyperMatrix ident = HyperMatrix::identity(cx, 2, 2);
    OrderedABP abp = abp_for_shifted_identity(2, 3, cx);
    PtCertificate cert = abp_to_pt_cert(abp, ident);
    CHECK(verify_pt_certificate(cert) == cert.value);
    CHECK(cert.value <= 4);  // one pair, coarse value at most 2 * side
  }

  SUBCASE("even block counts are rejected") {
    FieldCtx gf3 = FieldCtx::gfp(3);
    OrderedABP abp = abp_for_shifted_identity(2, 2, gf3);
    CHECK_THROWS_AS(abp_to_pt_cert(abp, HyperMatrix::identity(gf3, 2, 1)),
                    std::invalid_argument);
  }
}

TEST_CASE("built-in coarse identity certificates") {
  FieldCtx gf3 = FieldCtx::gfp(3);
  for (u32 side : {1u, 2u, 4u}) {
    PtCertificate cert = builtin_coarse_identity(gf3, side);
    CHECK(verify_pt_certificate(cert) == cert.value);
    CHECK(cert.value <= 2 * side);
    CHECK(cert.value >= 1);
  }
  CHECK_THROWS_AS(builtin_coarse_identity(gf3, 3), std::invalid_argument);

  FieldCtx gf2 = FieldCtx::gfp(2);
  PtCertificate exhaustive = builtin_coarse_identity(gf2, 2);
  CHECK(verify_pt_certificate(exhaustive) == exhaustive.value);
  CHECK(exhaustive.value == pt_rank_exact(HyperMatrix::identity(gf2, 2, 2)).first);
  CHECK_THROWS_AS(builtin_coarse_identity(gf2, 4), std::invalid_argument);
}

TEST_CASE("formulas evaluate set-multilinearly") {
  FieldCtx gf5 = FieldCtx::gfp(5);

  Tensor hot = formula_eval(SmFormula::leaf(3, 2, 4), gf5, 4);
  CHECK(hot.labels == std::vector<Label>{Label::plain(3)});
  CHECK(hot.fe == std::vector<u64>{0, 0, 4, 0});

  // a tensor plus its negation vanishes
  SmFormula cancel = SmFormula::plus({SmFormula::leaf(1, 1, 2), SmFormula::leaf(1, 1, 3)});
  Tensor z = formula_eval(cancel, gf5, 4);
  CHECK(std::count(z.fe.begin(), z.fe.end(), u64{0}) == 4);

  SmFormula f8 = imm22_formula();
  CHECK(formula_leaves(f8) == 8);
  CHECK(formula_blocks(f8) == std::vector<i32>{1, 2});
  CHECK(formula_eval(f8, gf5, 4) == imm_tensor(2, 2, gf5));
  FieldCtx cx = FieldCtx::complex_approx();
  CHECK(formula_eval(f8, cx, 4) == imm_tensor(2, 2, cx));

  // sums add and products multiply coefficient tensors
  Rng rng(9);
  for (int rep = 0; rep < 5; ++rep) {
    SmFormula a = random_formula(rng, {1}, 4, gf5);
    SmFormula b = random_formula(rng, {1}, 4, gf5);
    SmFormula c = random_formula(rng, {2}, 4, gf5);
    CHECK(formula_eval(SmFormula::plus({a, b}), gf5, 4) ==
          tensor_add(formula_eval(a, gf5, 4), formula_eval(b, gf5, 4)));
    CHECK(formula_eval(SmFormula::times(a, c), gf5, 4) ==
          tensor_product(formula_eval(a, gf5, 4), formula_eval(c, gf5, 4)));
  }

  // violations: overlapping product blocks, mismatched sum blocks, bad index
  SmFormula bad_times = SmFormula::times(SmFormula::leaf(1, 0), SmFormula::leaf(1, 1));
  CHECK_THROWS_AS(formula_eval(bad_times, gf5, 4), std::invalid_argument);
  SmFormula bad_plus = SmFormula::plus({SmFormula::leaf(1, 0), SmFormula::leaf(2, 0)});
  CHECK_THROWS_AS(formula_eval(bad_plus, gf5, 4), std::invalid_argument);
  CHECK_THROWS_AS(formula_eval(SmFormula::leaf(1, 9), gf5, 4), std::invalid_argument);

  // deterministic generation per seed
  Rng r1(77), r2(77);
  SmFormula g1 = random_formula(r1, {1, 2, 3}, 4, gf5);
  SmFormula g2 = random_formula(r2, {1, 2, 3}, 4, gf5);
  CHECK(formula_eval(g1, gf5, 4) == formula_eval(g2, gf5, 4));
  CHECK(formula_leaves(g1) == formula_leaves(g2));
}

TEST_CASE("formula harness never violates the lower bounds") {
  FieldCtx gf2 = FieldCtx::gfp(2);

  SUBCASE("iterated product of two matrices, explicit report") {
    MainTheoremReport rep =
        main_theorem_check(imm22_formula(), gf2, 4, PathGraph::path(1, 2));
    CHECK(rep.leaves == 8);
    CHECK(rep.longest == 2);
    CHECK(rep.ok);
    CHECK(rep.margin_log2 >= 0.0);
    CHECK(rep.shifted);
    CHECK(rep.pt_value == 2);  // pad slice carries the 2x2 identity
    CHECK(rep.pt_bound_log2 == doctest::Approx(-1.0));  // 2 / 2^(1-0+1) = 1/2
    CHECK(rep.pt_ok);
  }

  SUBCASE("zero polynomial is trivially consistent") {
    SmFormula zf =
        SmFormula::times(SmFormula::leaf(1, 0, 0), SmFormula::leaf(2, 0, 1));
    MainTheoremReport rep = main_theorem_check(zf, gf2, 4, PathGraph::path(1, 2));
    CHECK(rep.ok);
    CHECK(rep.rho.num == 0);
    CHECK(rep.pt_value == 0);
    CHECK(rep.pt_ok);
  }

  SUBCASE("random formulas over one and two blocks") {
    Rng rng(2025);
    u64 violations = 0;
    for (int rep_i = 0; rep_i < 25; ++rep_i) {
      SmFormula f = random_formula(rng, {1}, 4, gf2);
      MainTheoremReport rep = main_theorem_check(f, gf2, 4, PathGraph::path(1, 1));
      if (!rep.ok || !rep.pt_ok) ++violations;
    }
    for (int rep_i = 0; rep_i < 25; ++rep_i) {
      SmFormula f = random_formula(rng, {1, 2}, 4, gf2);
      MainTheoremReport rep = main_theorem_check(f, gf2, 4, PathGraph::path(1, 2));
      if (!rep.ok || !rep.pt_ok) ++violations;
    }
    CHECK(violations == 0);
  }

  SUBCASE("shape guards") {
    CHECK_THROWS_AS(main_theorem_check(SmFormula::leaf(1, 0), gf2, 4, PathGraph::path(1, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(main_theorem_check(SmFormula::leaf(1, 0), gf2, 3, PathGraph::path(1, 1)),
                    std::invalid_argument);
  }
}
