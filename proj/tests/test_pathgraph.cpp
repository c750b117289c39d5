#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "ptw/pathgraph.hpp"

using namespace ptw;

namespace {

Tensor random_graph_tensor(const FieldCtx& ctx, u32 n, const PathGraph& g, Rng& rng) {
  Tensor t(ctx, n, directed_edges(g));
  for (u64& x : t.fe) x = rng.below(ctx.mod());
  return t;
}

// identity pairing on a single edge: entry 1 iff both digits agree
Tensor edge_identity(const FieldCtx& ctx, u32 n, const PathGraph& g) {
  Tensor t(ctx, n, directed_edges(g));
  for (u32 x = 0; x < n; ++x) t.fe[static_cast<std::size_t>(x) * n + x] = 1;
  return t;
}

std::vector<Label> in_graph(const std::vector<Label>& labs, const PathGraph& g) {
  std::vector<Label> out;
  for (const Label& l : labs)
    if (g.has_edge(std::max(l.u, l.v))) out.push_back(l);
  std::sort(out.begin(), out.end());
  return out;
}

// Independent flat-coordinate evaluation for a length-d path starting at
// v0: the tensor is re-read with plain coordinates 1..2d (coordinate 2t-1 =
// forward directed edge of edge t, coordinate 2t = backward), and the index
// sets follow the endpoint/interior rule directly: coordinate 1 joins I iff
// the left endpoint bit is 1, coordinate 2t joins I iff interior bit t is 0
// (else coordinate 2t+1 does), coordinate 2d joins I iff the right endpoint
// bit is 0.
RelValue relrk_by_coordinates(const Tensor& a, u32 d, u32 left_bit, u32 mid_bits,
                              u32 right_bit) {
  std::vector<Label> plain;
  for (u32 k = 1; k <= 2 * d; ++k) plain.push_back(Label::plain(static_cast<i32>(k)));
  Tensor flat_view(a.ctx, a.n, plain);
  flat_view.fe = a.fe;
  flat_view.ce = a.ce;
  std::vector<Label> iset, jset;
  (left_bit ? iset : jset).push_back(Label::plain(1));
  for (u32 t = 1; t + 1 <= d; ++t) {
    if (t == d) break;
    u32 bit = (mid_bits >> (t - 1)) & 1;
    (bit ? jset : iset).push_back(Label::plain(static_cast<i32>(2 * t)));
    (bit ? iset : jset).push_back(Label::plain(static_cast<i32>(2 * t + 1)));
  }
  (right_bit ? jset : iset).push_back(Label::plain(static_cast<i32>(2 * d)));
  return RelValue{rank(flatten_mat(flat_view, iset, jset)), a.n, d};
}

}  // namespace

TEST_CASE("graph analysis identifies endpoints, interiors, and components") {
  PathGraph single({5});
  GraphInfo si = graph_analyze(single);
  CHECK(si.v1 == std::vector<i32>{4, 5});
  CHECK(si.v2.empty());
  CHECK(si.d1 == std::vector<Label>{Label::dedge(4, 5), Label::dedge(5, 4)});
  CHECK(si.d2.empty());
  CHECK(si.components.size() == 1);
  CHECK(si.ell == 1);

  PathGraph p3 = PathGraph::path(1, 3);
  GraphInfo pi = graph_analyze(p3);
  CHECK(pi.v1 == std::vector<i32>{0, 3});
  CHECK(pi.v2 == std::vector<i32>{1, 2});
  CHECK(pi.d1.size() == pi.v1.size());
  CHECK(pi.d2.size() == 2 * pi.v2.size());
  CHECK(pi.ell == 3);
  CHECK(directed_edges(p3).size() == 6);

  PathGraph two({4, 1});  // order-insensitive construction
  GraphInfo ti = graph_analyze(two);
  CHECK(ti.components.size() == 2);
  CHECK(ti.ell == 1);
  CHECK(ti.v1 == std::vector<i32>{0, 1, 3, 4});

  GraphInfo mixed = graph_analyze(PathGraph({1, 2, 4}));
  CHECK(mixed.components == std::vector<std::vector<i32>>{{1, 2}, {4}});
  CHECK(mixed.ell == 2);
  CHECK(mixed.v1 == std::vector<i32>{0, 2, 3, 4});
  CHECK(mixed.v2 == std::vector<i32>{1});

  CHECK_THROWS_AS(PathGraph({}), std::invalid_argument);
}

TEST_CASE("orientations enumerate choice bits in canonical order") {
  std::vector<Orientation> none = orientations({});
  CHECK(none.size() == 1);
  CHECK(none[0].i_set().empty());

  std::vector<Orientation> all = orientations({2, 0, 7});
  CHECK(all.size() == 8);
  for (u32 b = 0; b < 8; ++b) {
    CHECK(all[b].bits == b);
    CHECK(all[b].base == std::vector<i32>{0, 2, 7});
    std::vector<Label> i = all[b].i_set(), j = all[b].j_set();
    REQUIRE(i.size() == 3);
    REQUIRE(j.size() == 3);
    for (std::size_t t = 0; t < 3; ++t) {
      i32 v = all[b].base[t];
      // the two sides split v's incident directed edges
      CHECK(i[t].u == v);
      CHECK(j[t].u == v);
      CHECK(i[t].v + j[t].v == 2 * v);
      CHECK(i[t].v != j[t].v);
    }
  }
  // bit 0 sends the left-incident directed edge to I
  CHECK(all[0].i_set()[0] == Label::dedge(0, -1));
  CHECK(all[1].i_set()[0] == Label::dedge(0, 1));

  Orientation a({0, 2}, 0b01), b({1}, 0b1);
  Orientation u = orientation_union(a, b);
  CHECK(u.base == std::vector<i32>{0, 1, 2});
  CHECK(u.bits == 0b011);  // v0 from a's bit 0, v1 from b, v2 from a's bit 1
  CHECK_THROWS_AS(orientation_union(a, Orientation({2}, 0)), std::invalid_argument);
  CHECK_THROWS_AS(Orientation({0, 1}, 0b100), std::invalid_argument);

  CHECK(orientations({0, 1}).size() * orientations({5}).size() ==
        orientations({0, 1, 5}).size());
}

TEST_CASE("extremal orientations route in-graph directed edges as required") {
  for (const PathGraph& g :
       {PathGraph({1}), PathGraph::path(1, 3), PathGraph({1, 2, 4})}) {
    GraphInfo info = graph_analyze(g);
    auto [plus, minus] = gamma_pm(g);
    // defining equations: I of gamma+ and J of gamma- are exactly D1
    CHECK(in_graph(plus.i_set(), g) == info.d1);
    CHECK(in_graph(minus.j_set(), g) == info.d1);
    CHECK(in_graph(minus.i_set(), g).empty());
    CHECK(in_graph(plus.j_set(), g).empty());
  }

  // one shared degree-1 vertex: the two incident edges are swapped
  auto [dp, dm] = delta_pm(PathGraph({1}), PathGraph({2}));
  CHECK(dp.base == std::vector<i32>{1});
  CHECK(dp.i_set() == std::vector<Label>{Label::dedge(1, 2)});
  CHECK(dm.i_set() == std::vector<Label>{Label::dedge(1, 0)});

  // restricted to the H side, delta+ routes every shared endpoint to I
  {
    PathGraph g({1, 2}), h({3, 4});
    auto [p, m] = delta_pm(g, h);
    CHECK(p.base == std::vector<i32>{2});
    CHECK(in_graph(p.i_set(), h) == std::vector<Label>{Label::dedge(2, 3)});
    CHECK(in_graph(p.j_set(), h).empty());
    CHECK(in_graph(m.j_set(), h) == std::vector<Label>{Label::dedge(2, 3)});
    CHECK(in_graph(m.i_set(), g) == std::vector<Label>{Label::dedge(2, 1)});
  }

  auto [ep, em] = delta_pm(PathGraph({1}), PathGraph({3}));
  CHECK(ep.base.empty());
  CHECK(em.base.empty());

  CHECK_THROWS_AS(delta_pm(PathGraph({1, 2}), PathGraph({2, 3})), std::invalid_argument);
}

TEST_CASE("relative rank of the identity pairing on a single edge") {
  for (const FieldCtx& ctx :
       {FieldCtx::gfp(2), FieldCtx::gfp(3), FieldCtx::complex_approx()}) {
    PathGraph g({1});
    u32 n = 2;
    Tensor a(ctx, n, directed_edges(g));
    if (ctx.finite()) {
      a = edge_identity(ctx, n, g);
    } else {
      for (u32 x = 0; x < n; ++x) a.ce[static_cast<std::size_t>(x) * n + x] = 1.0;
    }
    Orientation alpha;  // no interior vertices
    std::vector<std::size_t> expect = {2, 1, 1, 2};  // per endpoint-bit pattern
    for (const Orientation& gamma : orientations({0, 1})) {
      RelValue v = relrk(a, g, alpha, gamma);
      CHECK(v.num == expect[gamma.bits]);
      CHECK(v.e == 1);
      CHECK(v.n == n);
    }

    Tensor z(ctx, n, directed_edges(g));
    for (const Orientation& gamma : orientations({0, 1}))
      CHECK(relrk(z, g, alpha, gamma).num == 0);
  }

  // label and orientation-base mismatches are rejected
  PathGraph g({1}), other({2});
  Tensor a = edge_identity(FieldCtx::gfp(3), 2, g);
  CHECK_THROWS_AS(relrk(a, other, Orientation{}, orientations({1, 2})[0]),
                  std::invalid_argument);
  CHECK_THROWS_AS(relrk(a, g, Orientation({7}, 0), orientations({0, 1})[0]),
                  std::invalid_argument);
  CHECK_THROWS_AS(relrk(a, g, Orientation{}, Orientation({0}, 0)), std::invalid_argument);
}

TEST_CASE("graph flattenings match the endpoint and interior coordinate rule") {
  Rng rng(2026);
  for (const FieldCtx& ctx : {FieldCtx::gfp(3), FieldCtx::gfp(7)}) {
    for (u32 d = 1; d <= 3; ++d) {
      PathGraph g = PathGraph::path(1, d);
      GraphInfo info = graph_analyze(g);
      for (int rep = 0; rep < 3; ++rep) {
        Tensor a = random_graph_tensor(ctx, 2, g, rng);
        for (u32 left = 0; left < 2; ++left)
          for (u32 right = 0; right < 2; ++right)
            for (u32 mid = 0; mid < (1u << (d - 1)); ++mid) {
              RelValue via_graph = relrk(a, g, Orientation(info.v2, mid),
                                         Orientation(info.v1, left | (right << 1)));
              RelValue via_coords = relrk_by_coordinates(a, d, left, mid, right);
              CHECK(rel_eq(via_graph, via_coords));
            }
      }
    }
  }
}

TEST_CASE("exact rational values compare by cross-multiplication") {
  CHECK(rel_eq(RelValue{2, 2, 2}, RelValue{1, 2, 1}));
  CHECK(!rel_eq(RelValue{3, 2, 2}, RelValue{1, 2, 1}));
  CHECK(rel_le(RelValue{1, 2, 1}, RelValue{3, 2, 2}));
  CHECK(!rel_le(RelValue{3, 2, 2}, RelValue{1, 2, 1}));
  CHECK(rel_le(RelValue{0, 2, 3}, RelValue{0, 5, 1}));
  CHECK(rel_eq(RelValue{0, 2, 3}, RelValue{0, 5, 1}));

  RelValue p = rel_mul(RelValue{2, 2, 1}, RelValue{3, 2, 2});
  CHECK(p.num == 6);
  CHECK(p.e == 3);
  RelValue s = rel_add(RelValue{1, 2, 1}, RelValue{1, 2, 2});
  CHECK(rel_eq(s, RelValue{3, 2, 2}));
  CHECK(rel_str(RelValue{3, 2, 2}) == "3/2^2");

  CHECK_THROWS_AS(rel_eq(RelValue{1, 2, 1}, RelValue{1, 3, 1}), std::invalid_argument);
  CHECK_THROWS_AS(checked_pow(3, 64), std::overflow_error);
}

TEST_CASE("decompositions certify upper bounds on the path measure") {
  Rng rng(7);
  FieldCtx gf2 = FieldCtx::gfp(2), gf3 = FieldCtx::gfp(3);
  PathGraph g = PathGraph::path(1, 2);
  GraphInfo info = graph_analyze(g);
  std::vector<Orientation> alphas = orientations(info.v2);

  // the trivial decomposition reproduces the single-part maximum
  Tensor a = random_graph_tensor(gf3, 2, g, rng);
  std::vector<Tensor> trivial = {a, Tensor(gf3, 2, a.labels)};
  RelValue bound = rho_from_decomposition(a, g, trivial);
  u64 expect = 0;
  for (const Orientation& gamma : orientations(info.v1))
    expect = std::max(expect, relrk(a, g, alphas[0], gamma).num);
  CHECK(bound.num == expect);
  CHECK(bound.e == 2);

  // per-orientation chooser, returning the same decomposition each time
  RelValue bound_fn = rho_from_decomposition(
      a, g, [&](const Orientation&) { return trivial; });
  CHECK(rel_eq(bound, bound_fn));

  // zero tensor decomposes into zero parts with value zero
  Tensor z(gf3, 2, a.labels);
  CHECK(rho_from_decomposition(z, g, {z, z}).num == 0);

  // malformed decompositions are rejected
  CHECK_THROWS_AS(rho_from_decomposition(a, g, {a}), std::invalid_argument);
  CHECK_THROWS_AS(rho_from_decomposition(a, g, {a, a}), std::invalid_argument);

  // any decomposition stays above the exhaustive value
  for (int rep = 0; rep < 3; ++rep) {
    Tensor b = random_graph_tensor(gf2, 2, g, rng);
    Tensor x0 = random_graph_tensor(gf2, 2, g, rng);
    RelValue ub = rho_from_decomposition(b, g, {x0, tensor_sub(b, x0)});
    RelValue ex = rho_exact(b, g);
    CHECK(rel_le(ex, ub));
  }
}

TEST_CASE("exhaustive path measure on single edges and short paths") {
  FieldCtx gf2 = FieldCtx::gfp(2), gf3 = FieldCtx::gfp(3);
  PathGraph g({1});

  RelValue ident = rho_exact(edge_identity(gf2, 2, g), g);
  CHECK(rel_eq(ident, RelValue{2, 2, 1}));  // max(1, 1/2, 1/2, 1) = 1

  CHECK(rho_exact(Tensor(gf2, 2, directed_edges(g)), g).num == 0);

  // no interior vertices: the measure is the explicit orientation maximum
  Rng rng(11);
  GraphInfo info = graph_analyze(g);
  for (int rep = 0; rep < 5; ++rep) {
    Tensor a = random_graph_tensor(gf3, 2, g, rng);
    u64 expect = 0;
    for (const Orientation& gamma : orientations(info.v1))
      expect = std::max(expect, relrk(a, g, Orientation{}, gamma).num);
    CHECK(rho_exact(a, g).num == expect);
  }

  // a big word-sized modulus passes through the generic rank path
  FieldCtx gfbig = FieldCtx::gfp(1048583);
  Tensor big = edge_identity(gfbig, 2, g);
  CHECK(rel_eq(rho_exact(big, g), RelValue{2, 2, 1}));

  // determinism across repeated runs
  Tensor b = random_graph_tensor(gf2, 2, PathGraph::path(1, 2), rng);
  RelValue r1 = rho_exact(b, PathGraph::path(1, 2));
  RelValue r2 = rho_exact(b, PathGraph::path(1, 2));
  CHECK(rel_eq(r1, r2));

  // guards: enumeration budget, infinite fields
  Tensor wide = random_graph_tensor(gf2, 2, PathGraph::path(1, 3), rng);
  CHECK_THROWS_AS(rho_exact(wide, PathGraph::path(1, 3)), std::runtime_error);
  Tensor cz(FieldCtx::complex_approx(), 2, directed_edges(g));
  CHECK_THROWS_AS(rho_exact(cz, g), std::invalid_argument);
}

TEST_CASE("padding identity ties the rank minimum to the path measure") {
  FieldCtx gf2 = FieldCtx::gfp(2);
  FieldCtx gf3 = FieldCtx::gfp(3);

  SUBCASE("order one, all sixteen binary matrices, fully unrestricted") {
    PathGraph g = PathGraph::path(1, 2);
    for (u32 code = 0; code < 16; ++code) {
      DenseMatrix m(gf2, 2, 2);
      for (u32 e = 0; e < 4; ++e) m.fe[e] = (code >> e) & 1;
      HyperMatrix hm(2, 1, m);
      std::size_t r = rank(m);

      // unrestricted exhaustive measure over the padded tensor
      RelValue full = rho_exact(padded_tensor(hm), g);
      CHECK(full.num == r);
      CHECK(full.e == 2);

      // slice-restricted check agrees and certifies equality
      RhoPtReport rep = rho_pt_identity_check(hm);
      CHECK(rep.equal);
      CHECK(rep.pt_value == r);
      CHECK(rel_eq(rep.rho, full));

      // the embedded rank decomposition reproduces the same value
      auto [value, cert] = pt_rank_exact(hm);
      RelValue via_cert =
          rho_from_decomposition(padded_tensor(hm), g, decomposition_from_pt_certificate(cert));
      CHECK(via_cert.num == value);
      CHECK(rel_eq(via_cert, full));
    }
  }

  SUBCASE("zero matrix of order two") {
    HyperMatrix zero(2, 2, DenseMatrix(gf2, 4, 4));
    RhoPtReport rep = rho_pt_identity_check(zero);
    CHECK(rep.equal);
    CHECK(rep.pt_value == 0);
    CHECK(rep.rho.num == 0);
    CHECK(rep.rho.e == 3);
  }

  SUBCASE("order two, random binary matrices") {
    Rng rng(123);
    for (int rep_i = 0; rep_i < 20; ++rep_i) {
      HyperMatrix hm(2, 2, random_matrix(gf2, 4, 4, rng));
      RhoPtReport rep = rho_pt_identity_check(hm);
      CHECK(rep.equal);
      CHECK(rep.rho.e == 3);
      CHECK(rep.notes.find("WARNING") == std::string::npos);

      auto [value, cert] = pt_rank_exact(hm);
      CHECK(rep.pt_value == value);
      RelValue via_cert = rho_from_decomposition(
          padded_tensor(hm), PathGraph::path(1, 3), decomposition_from_pt_certificate(cert));
      CHECK(via_cert.num == value);
    }
  }

  SUBCASE("odd characteristic, order one") {
    Rng rng(5);
    for (int rep_i = 0; rep_i < 4; ++rep_i) {
      HyperMatrix hm(2, 1, random_matrix(gf3, 2, 2, rng));
      RhoPtReport rep = rho_pt_identity_check(hm);
      CHECK(rep.equal);
      CHECK(rep.pt_value == rank(hm.m));
    }
  }
}

TEST_CASE("lemma suite passes its assertions on random tiny instances") {
  std::vector<LemmaReport> reports = lemma_suite(42, 200);
  REQUIRE(reports.size() == 9);

  std::vector<std::string> names;
  for (const LemmaReport& r : reports) names.push_back(r.lemma);
  CHECK(std::find(names.begin(), names.end(), "relrk-multiplicative-paths") != names.end());
  CHECK(std::find(names.begin(), names.end(), "deficit-endpoint-imbalance") != names.end());

  for (const LemmaReport& r : reports) {
    INFO(r.lemma, ": ", r.witness);
    CHECK(r.failures == 0);
    CHECK(r.trials > 0);
    if (r.lemma == "relrk-multiplicative-paths") CHECK(r.trials == 200);
    if (r.lemma == "deficit-endpoint-imbalance") {
      // observational: the pinned single-edge instance exceeds the literal
      // exponent, while the half-exponent form never trips
      CHECK(r.witness.find("exceeded on 0 of") == std::string::npos);
      CHECK(r.witness.find("half-exponent (= dimension) form exceeded on 0") !=
            std::string::npos);
    }
  }
}
