#include "doctest.h"
#include "ptw/ptcore.hpp"

using namespace ptw;

namespace {

HyperMatrix random_hyper(const FieldCtx& ctx, u32 n, u32 d, Rng& rng) {
  std::size_t side = checked_tensor_size(n, d);
  return HyperMatrix(n, d, random_matrix(ctx, side, side, rng));
}

}  // namespace

TEST_CASE("partial transpose basics: identity cases and block action") {
  FieldCtx ctx = FieldCtx::gfp(5);
  Rng rng(21);
  HyperMatrix m = random_hyper(ctx, 3, 2, rng);
  CHECK(approx_equal(partial_transpose(m, 0).m, m.m));
  CHECK(approx_equal(partial_transpose(m, 0b11).m, transpose(m.m)));
  // with the first digit most significant, T{1} transposes the grid of
  // blocks and T{2} transposes each block in place
  HyperMatrix t1 = partial_transpose(m, 0b01);
  HyperMatrix t2 = partial_transpose(m, 0b10);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) {
          CHECK(t1.m.f(a * 3 + r, b * 3 + c) == m.m.f(b * 3 + r, a * 3 + c));
          CHECK(t2.m.f(a * 3 + r, b * 3 + c) == m.m.f(a * 3 + c, b * 3 + r));
        }
}

TEST_CASE("partial transposes form an elementary abelian involution family") {
  FieldCtx ctx = FieldCtx::gfp(3);
  Rng rng(22);
  HyperMatrix m = random_hyper(ctx, 2, 3, rng);
  for (u32 kappa = 0; kappa < 8; ++kappa) {
    CHECK(approx_equal(partial_transpose(partial_transpose(m, kappa), kappa).m, m.m));
    for (u32 k2 = 0; k2 < 8; ++k2) {
      HyperMatrix lhs = partial_transpose(partial_transpose(m, kappa), k2);
      HyperMatrix rhs = partial_transpose(m, kappa ^ k2);
      CHECK(approx_equal(lhs.m, rhs.m));
    }
    // transpose duality
    CHECK(approx_equal(transpose(partial_transpose(m, kappa).m),
                       partial_transpose(m, 0b111 ^ kappa).m));
  }
}

TEST_CASE("full symmetry predicate") {
  FieldCtx f3 = FieldCtx::gfp(3);
  CHECK(is_fully_symmetric(HyperMatrix::identity(f3, 2, 2)));
  CHECK_FALSE(is_fully_symmetric(swap_matrix(f3, 3)));
  // symmetrizing any matrix over a char != 2 field yields a fully
  // symmetric one
  Rng rng(23);
  HyperMatrix s = random_hyper(f3, 2, 2, rng);
  DenseMatrix acc(f3, 4, 4);
  for (u32 kappa = 0; kappa < 4; ++kappa)
    acc = add(acc, partial_transpose(s, kappa).m);
  CHECK(is_fully_symmetric(HyperMatrix(2, 2, acc)));
}

TEST_CASE("PT-basic detection and the maximal rank-growth example") {
  FieldCtx f3 = FieldCtx::gfp(3);
  HyperMatrix sw = swap_matrix(f3, 3);
  CHECK(rank(sw.m) == 9);
  auto witness = pt_basic_witness(sw);
  REQUIRE(witness.has_value());
  CHECK(*witness == 1u);  // kappa = {1}
  CHECK(is_pt_basic(sw));
  CHECK_FALSE(is_pt_basic(HyperMatrix::identity(f3, 2, 2)));
  CHECK_FALSE(is_pt_basic(HyperMatrix(2, 2, DenseMatrix(f3, 4, 4))));
}

TEST_CASE("certificate verification and normalization") {
  FieldCtx f3 = FieldCtx::gfp(3);
  PtCertificate cert = identity4_certificate(f3);
  CHECK(cert.value == 2);
  CHECK(verify_pt_certificate(cert) == 2);

  // single-part certificate has value rank(M)
  HyperMatrix id = HyperMatrix::identity(f3, 2, 2);
  PtCertificate single = make_pt_certificate(id, {{0u, id.m}});
  CHECK(verify_pt_certificate(single) == 4);

  // corrupt a part: the sum no longer matches
  PtCertificate bad = cert;
  bad.parts.begin()->second.set_int(0, 1, 1);
  CHECK_THROWS(verify_pt_certificate(bad));

  // a kappa containing the last axis folds to its complement
  CHECK(normalize_kappa(0b10, 2) == 0b01);
  CHECK(normalize_kappa(0b11, 2) == 0b00);
  PtCertificate folded = make_pt_certificate(id, {{0b11u, id.m}});
  CHECK(folded.parts.size() == 1);
  CHECK(folded.parts.count(0u) == 1);
}

TEST_CASE("exhaustive PT-rank oracle on four-by-four GF(2)") {
  FieldCtx f2 = FieldCtx::gfp(2);
  HyperMatrix id = HyperMatrix::identity(f2, 2, 2);
  auto [value, cert] = pt_rank_exact(id);
  CHECK(value == 2);
  CHECK(verify_pt_certificate(cert) == 2);

  CHECK(pt_rank_exact(HyperMatrix(2, 2, DenseMatrix(f2, 4, 4))).first == 0);

  DenseMatrix r1(f2, 4, 4);
  r1.set_int(1, 2, 1);
  CHECK(pt_rank_exact(HyperMatrix(2, 2, r1)).first == 1);

  // the fast table path must agree with the generic odometer, witness included
  Rng rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    HyperMatrix m = random_hyper(f2, 2, 2, rng);
    auto fast = pt_rank_exact(m);
    auto slow = detail::pt_rank_exact_generic(m, u64{1} << 20, 1);
    CHECK(fast.first == slow.first);
    REQUIRE(fast.second.parts.size() == slow.second.parts.size());
    auto it = fast.second.parts.begin();
    auto jt = slow.second.parts.begin();
    for (; it != fast.second.parts.end(); ++it, ++jt) {
      CHECK(it->first == jt->first);
      CHECK(approx_equal(it->second, jt->second));
    }
  }
}

TEST_CASE("oracle invariants on small random instances") {
  FieldCtx f2 = FieldCtx::gfp(2);
  Rng rng(32);
  for (int trial = 0; trial < 8; ++trial) {
    HyperMatrix m = random_hyper(f2, 2, 2, rng);
    auto [value, cert] = pt_rank_exact(m);
    CHECK(value <= rank(m.m));
    CHECK((value == 0) == m.m.is_zero());
    CHECK((value == 1) == is_pt_basic(m));
    CHECK(verify_pt_certificate(cert) == value);
  }
}

TEST_CASE("oracle handles d=1 and tiny odd fields") {
  FieldCtx f7 = FieldCtx::gfp(7);
  Rng rng(33);
  HyperMatrix m = random_hyper(f7, 3, 1, rng);
  auto [value, cert] = pt_rank_exact(m);
  CHECK(value == rank(m.m));  // d=1 admits only the trivial decomposition
  CHECK(verify_pt_certificate(cert) == value);
  // budget rejection: GF(7), n=2, d=2 needs 7^16 assignments
  FieldCtx f5 = FieldCtx::gfp(5);
  HyperMatrix big(2, 2, DenseMatrix::identity(f5, 4));
  CHECK_THROWS(pt_rank_exact(big));
  CHECK_THROWS(pt_rank_exact(HyperMatrix(2, 1, DenseMatrix::identity(FieldCtx::complex_approx(), 2))));
}

TEST_CASE("search strategies return verified upper bounds") {
  FieldCtx f2 = FieldCtx::gfp(2);
  FieldCtx f3 = FieldCtx::gfp(3);
  HyperMatrix id2 = HyperMatrix::identity(f2, 2, 2);

  PtCertificate sk = pt_rank_search(swap_matrix(f3, 3), "single-kappa");
  CHECK(sk.value == 1);
  CHECK(verify_pt_certificate(sk) == 1);

  PtCertificate gp = pt_rank_search(id2, "greedy-peel");
  CHECK(gp.value <= 4);
  CHECK(verify_pt_certificate(gp) == gp.value);

  PtCertificate rl0 = pt_rank_search(id2, "restart-local", 5);
  PtCertificate rl1 = pt_rank_search(id2, "restart-local", 5);
  CHECK(rl0.value == rl1.value);  // deterministic per seed
  CHECK(verify_pt_certificate(rl0) == rl0.value);
  // never worse than the single-kappa baseline by construction
  CHECK(rl0.value <= pt_rank_search(id2, "single-kappa").value);

  CHECK_THROWS(pt_rank_search(id2, "no-such-strategy"));

  // upper bounds dominate the oracle
  Rng rng(34);
  for (int trial = 0; trial < 4; ++trial) {
    HyperMatrix m = random_hyper(f2, 2, 2, rng);
    std::size_t exact = pt_rank_exact(m).first;
    for (const char* strat : {"single-kappa", "greedy-peel", "restart-local"})
      CHECK(pt_rank_search(m, strat, 7).value >= exact);
  }
}

TEST_CASE("kronecker action transports certificates monotonically") {
  FieldCtx f3 = FieldCtx::gfp(3);
  Rng rng(35);
  HyperMatrix m = random_hyper(f3, 2, 2, rng);
  PtCertificate cert = pt_rank_search(m, "single-kappa");

  // identity blocks leave everything unchanged
  std::vector<DenseMatrix> ids(2, DenseMatrix::identity(f3, 2));
  auto [pm_id, cert_id] = kron_act(m, ids, cert);
  CHECK(approx_equal(pm_id.m, m.m));
  REQUIRE(cert_id.has_value());
  CHECK(cert_id->value == cert.value);

  // nonsingular blocks preserve the exact PT-rank
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<DenseMatrix> blocks{random_nonsingular(f3, 2, rng),
                                    random_nonsingular(f3, 2, rng)};
    auto [pm, tcert] = kron_act(m, blocks, cert);
    CHECK(pt_rank_exact(pm).first == pt_rank_exact(m).first);
    REQUIRE(tcert.has_value());
    CHECK(verify_pt_certificate(*tcert) == tcert->value);
    CHECK(tcert->value <= cert.value);
  }

  // a singular block can only shrink the transported value
  DenseMatrix sing(f3, 2, 2);
  sing.set_int(0, 0, 1);
  auto [pm_s, cert_s] = kron_act(m, {sing, DenseMatrix::identity(f3, 2)}, cert);
  REQUIRE(cert_s.has_value());
  CHECK(cert_s->value <= cert.value);
  CHECK(verify_pt_certificate(*cert_s) == cert_s->value);
}

TEST_CASE("regrouping reinterprets matrices and maps certificates") {
  FieldCtx f2 = FieldCtx::gfp(2);
  Rng rng(36);
  // p=1 is the identity reinterpretation
  HyperMatrix m = random_hyper(f2, 2, 2, rng);
  HyperMatrix same = regroup_view(m, 1, 2);
  CHECK(same.n == 2);
  CHECK(same.d == 2);
  CHECK(approx_equal(same.m, m.m));

  // viewing [2]^2 as [4]^1 allows only kappa = empty, so the coarse oracle is
  // plain rank and the fine oracle can only improve on it
  for (int trial = 0; trial < 6; ++trial) {
    HyperMatrix f = random_hyper(f2, 2, 2, rng);
    HyperMatrix coarse = regroup_view(f, 2, 1);
    auto coarse_best = pt_rank_exact(coarse);
    CHECK(coarse_best.first == rank(f.m));
    CHECK(pt_rank_exact(f).first <= coarse_best.first);
  }

  // coarse certificate for I_16 over [4]^2 maps to a valid [2]^4 certificate
  HyperMatrix i16 = HyperMatrix::identity(f2, 4, 2);
  PtCertificate coarse_cert = pt_rank_search(i16, "single-kappa");
  PtCertificate fine = regroup_cert(coarse_cert, 2, 2);
  CHECK(fine.target.n == 2);
  CHECK(fine.target.d == 4);
  CHECK(verify_pt_certificate(fine) == coarse_cert.value);
}

TEST_CASE("transpose rank growth expansion is verified and tight on the swap example") {
  FieldCtx f3 = FieldCtx::gfp(3);
  // rank-one source: B = vec(I3) vec(I3)^T, whose {1}-transpose is the swap
  HyperMatrix sw = swap_matrix(f3, 3);
  HyperMatrix b = partial_transpose(sw, 1u);
  CHECK(rank(b.m) == 1);
  auto [u, v] = rank_factor(b.m);
  OuterFactorization fac{u, v};
  OuterFactorization grown = transpose_rank_growth(b, 1u, fac);
  CHECK(grown.u.cols == 9);  // n^{2 min(|kappa|, d-|kappa|)} terms, all needed
  CHECK(approx_equal(mul(grown.u, grown.v), sw.m));

  // kappa = empty returns the factorization unchanged
  OuterFactorization same = transpose_rank_growth(b, 0u, fac);
  CHECK(approx_equal(mul(same.u, same.v), b.m));

  // random matrices, both complement directions
  FieldCtx f5 = FieldCtx::gfp(5);
  Rng rng(37);
  for (u32 kappa : {1u, 2u, 3u}) {
    HyperMatrix m = HyperMatrix(2, 2, random_matrix(f5, 4, 4, rng));
    auto [mu, mv] = rank_factor(m.m);
    OuterFactorization out = transpose_rank_growth(m, kappa, {mu, mv});
    CHECK(approx_equal(mul(out.u, out.v), partial_transpose(m, kappa).m));
    u32 s = kappa == 3 ? 2 : 1;
    u32 mind = std::min(s, 2 - s);
    u64 cap = rank(m.m);
    for (u32 k = 0; k < 2 * mind; ++k) cap *= 2;
    CHECK(out.u.cols <= cap);
  }

  // rejects a factorization that does not reproduce the matrix
  OuterFactorization wrong{DenseMatrix(f3, 9, 1), DenseMatrix(f3, 1, 9)};
  CHECK_THROWS(transpose_rank_growth(b, 1u, wrong));
}

TEST_CASE("census over all four-by-four GF(2) matrices") {
  FieldCtx f2 = FieldCtx::gfp(2);
  CensusResult all = ptrank_census(2, 2, f2, CensusMode::all(), false);
  CHECK(all.population == 65536);
  u64 total = 0;
  for (const auto& [value, count] : all.histogram) total += count;
  CHECK(total == all.population);
  CHECK(all.histogram.at(0) == 1);  // only the zero matrix
  u64 at_least_two = 0;
  for (const auto& [value, count] : all.histogram)
    if (value >= 2) at_least_two += count;
  CHECK(at_least_two * 2 > all.population);  // strict majority
}

TEST_CASE("census restricted to fully symmetric matrices") {
  FieldCtx f2 = FieldCtx::gfp(2);
  CHECK(symmetry_orbit_count(2, 2) == 9);
  CensusResult sym = ptrank_census(2, 2, f2, CensusMode::all(), true);
  CHECK(sym.population == 512);  // 2^orbits
  u64 total = 0;
  for (const auto& [value, count] : sym.histogram) total += count;
  CHECK(total == 512);
  CHECK(sym.histogram.at(0) == 1);
}

TEST_CASE("sampled census is deterministic per seed") {
  FieldCtx f2 = FieldCtx::gfp(2);
  CensusResult a = ptrank_census(2, 2, f2, CensusMode::sample(25, 99), false);
  CensusResult b = ptrank_census(2, 2, f2, CensusMode::sample(25, 99), false);
  CHECK(a.population == 25);
  CHECK(a.histogram == b.histogram);
  CensusResult sym = ptrank_census(2, 2, f2, CensusMode::sample(10, 5), true);
  CHECK(sym.population == 10);
}

TEST_CASE("census on a tiny odd field uses the generic enumerator") {
  FieldCtx f3 = FieldCtx::gfp(3);
  // n=1, d=2: 1x1 matrices; PT-rank is 0 or 1
  CensusResult r = ptrank_census(1, 2, f3, CensusMode::all(), false);
  CHECK(r.population == 3);
  CHECK(r.histogram.at(0) == 1);
  CHECK(r.histogram.at(1) == 2);
}
