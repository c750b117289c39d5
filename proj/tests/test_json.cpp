#include <cstdio>
#include <vector>

#include "doctest.h"
#include "ptw/json_io.hpp"

using namespace ptw;

namespace {

bool same_matrix(const DenseMatrix& a, const DenseMatrix& b) {
  return a.rows == b.rows && a.cols == b.cols && a.ctx == b.ctx && a.fe == b.fe &&
         a.ce == b.ce;  // bit-exact, including complex entries
}

FieldCtx random_ctx(Rng& rng) {
  switch (rng.below(3)) {
    case 0:
      return FieldCtx::gfp(std::vector<u64>{2, 3, 5, 7, 11}[rng.below(5)]);
    case 1:
      return FieldCtx::complex_approx(1e-9);
    default:
      return rng.below(2) ? FieldCtx::cycmod_pair(3).first : FieldCtx::cycmod_pair(5).second;
  }
}

}  // namespace

TEST_CASE("field descriptors round-trip") {
  for (const FieldCtx& ctx :
       {FieldCtx::gfp(2), FieldCtx::gfp(1048583), FieldCtx::complex_approx(1e-7),
        FieldCtx::cycmod_pair(5).first}) {
    FieldCtx back = field_from_json(field_to_json(ctx));
    CHECK(back == ctx);
    CHECK(field_to_json(back) == field_to_json(ctx));
  }
  CHECK_THROWS_AS(field_from_json(json{{"kind", "ring"}}), std::invalid_argument);
  CHECK_THROWS_AS(field_from_json(json{{"kind", "gfp"}}), std::invalid_argument);
  CHECK_THROWS_AS(field_from_json(json{{"kind", "gfp"}, {"p", 4}}), std::invalid_argument);
}

TEST_CASE("matrices, hypermatrices, and tensors round-trip bit-exactly") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    FieldCtx ctx = random_ctx(rng);
    DenseMatrix m = random_matrix(ctx, 1 + rng.below(5), 1 + rng.below(5), rng);
    json j = matrix_to_json(m);
    DenseMatrix back = matrix_from_json(j);
    CHECK(same_matrix(m, back));
    CHECK(json::parse(j.dump()) == j);
  }
  for (int rep = 0; rep < 15; ++rep) {
    FieldCtx ctx = random_ctx(rng);
    u32 n = 2 + static_cast<u32>(rng.below(2));
    u32 d = 1 + static_cast<u32>(rng.below(2));
    std::size_t side = 1;
    for (u32 k = 0; k < d; ++k) side *= n;
    HyperMatrix h(n, d, random_matrix(ctx, side, side, rng));
    HyperMatrix back = hyper_from_json(hyper_to_json(h));
    CHECK(back.n == h.n);
    CHECK(back.d == h.d);
    CHECK(same_matrix(back.m, h.m));
  }
  for (int rep = 0; rep < 20; ++rep) {
    FieldCtx ctx = random_ctx(rng);
    std::vector<Label> labels;
    u32 order = static_cast<u32>(rng.below(4));
    for (u32 k = 1; k <= order; ++k) {
      i32 base = static_cast<i32>(3 * k);  // spaced out so dedges never collide
      labels.push_back(rng.below(2) ? Label::plain(base) : Label::dedge(base, base + 1));
    }
    Tensor t(ctx, 2 + static_cast<u32>(rng.below(2)), labels);
    if (ctx.finite())
      for (u64& v : t.fe) v = rng.below(ctx.mod());
    else
      for (cplx& z : t.ce)
        z = cplx{static_cast<double>(rng.below(7)) / 3.0, -static_cast<double>(rng.below(5))};
    Tensor back = tensor_from_json(tensor_to_json(t));
    CHECK(back == t);
    CHECK(back.labels == t.labels);
    CHECK(back.fe == t.fe);
    CHECK(back.ce == t.ce);
  }

  // shape violations are rejected
  FieldCtx gf3 = FieldCtx::gfp(3);
  json bad = matrix_to_json(random_matrix(gf3, 2, 2, rng));
  bad["entries"] = json::array({0, 1, 2});
  CHECK_THROWS_AS(matrix_from_json(bad), std::invalid_argument);
  bad["entries"] = json::array({0, 1, 2, 5});
  CHECK_THROWS_AS(matrix_from_json(bad), std::invalid_argument);
}

TEST_CASE("certificates round-trip") {
  Rng rng(23);
  FieldCtx gf3 = FieldCtx::gfp(3);
  for (int rep = 0; rep < 10; ++rep) {
    HyperMatrix target(2, 2, random_matrix(gf3, 4, 4, rng));
    DenseMatrix part0 = random_matrix(gf3, 4, 4, rng);
    DenseMatrix part1 = sub(target.m, part0);
    PtCertificate cert = make_pt_certificate(
        target, {{0u, part0}, {1u, part1}}, "round-trip fixture");
    PtCertificate back = pt_cert_from_json(pt_cert_to_json(cert));
    CHECK(back.value == cert.value);
    CHECK(back.metadata == cert.metadata);
    CHECK(back.parts.size() == cert.parts.size());
    for (const auto& [kappa, mat] : cert.parts) CHECK(same_matrix(back.parts.at(kappa), mat));
    CHECK(verify_pt_certificate(back) == cert.value);
  }
  for (int rep = 0; rep < 10; ++rep) {
    SoSCertificate cert;
    cert.n = 2;
    cert.d = 2;
    cert.ctx = FieldCtx::gfp(7);
    u64 nterms = 1 + rng.below(3);
    for (u64 k = 0; k < nterms; ++k)
      cert.terms.push_back(random_matrix(cert.ctx, 1, 16, rng));
    cert.metadata = "terms " + std::to_string(cert.terms.size());
    SoSCertificate back = sos_cert_from_json(sos_cert_to_json(cert));
    CHECK(back.n == cert.n);
    CHECK(back.d == cert.d);
    CHECK(back.metadata == cert.metadata);
    REQUIRE(back.terms.size() == cert.terms.size());
    for (std::size_t k = 0; k < cert.terms.size(); ++k)
      CHECK(same_matrix(back.terms[k], cert.terms[k]));
  }

  json dup = pt_cert_to_json(make_pt_certificate(
      HyperMatrix::identity(gf3, 2, 1), {{0u, DenseMatrix::identity(gf3, 2)}}, ""));
  dup["parts"].push_back(dup["parts"][0]);
  CHECK_THROWS_AS(pt_cert_from_json(dup), std::invalid_argument);
}

TEST_CASE("graphs, programs, formulas, and candidate parameters round-trip") {
  Rng rng(37);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<i32> edges;
    for (i32 e = 1; e <= 6; ++e)
      if (rng.below(2)) edges.push_back(e);
    if (edges.empty()) edges.push_back(1);
    PathGraph g(edges);
    PathGraph back = graph_from_json(graph_to_json(g));
    CHECK(back.edges == g.edges);
  }
  for (int rep = 0; rep < 10; ++rep) {
    FieldCtx ctx = rep % 2 ? FieldCtx::gfp(5) : FieldCtx::complex_approx();
    OrderedABP abp;
    abp.ctx = ctx;
    abp.n = 2 + static_cast<u32>(rng.below(2));
    abp.d = 2 + static_cast<u32>(rng.below(2));
    abp.widths.assign(abp.d + 1, 0);
    for (u32& w : abp.widths) w = 1 + static_cast<u32>(rng.below(3));
    for (u32 t = 0; t < abp.d; ++t)
      abp.layers.push_back(random_matrix(
          ctx, static_cast<std::size_t>(abp.widths[t]) * abp.widths[t + 1], abp.n, rng));
    abp.v1 = random_matrix(ctx, 1, abp.widths.front(), rng);
    abp.v2 = random_matrix(ctx, 1, abp.widths.back(), rng);
    OrderedABP back = abp_from_json(abp_to_json(abp));
    CHECK(abp_to_json(back) == abp_to_json(abp));
    CHECK(abp_eval(back) == abp_eval(abp));
  }
  for (int rep = 0; rep < 10; ++rep) {
    FieldCtx ctx = rep % 2 ? FieldCtx::gfp(3) : FieldCtx::complex_approx();
    SmFormula f = random_formula(rng, {1, 2}, 4, ctx);
    json j = formula_to_json(f);
    SmFormula back = formula_from_json(j);
    CHECK(formula_to_json(back) == j);
    CHECK(formula_eval(back, ctx, 4) == formula_eval(f, ctx, 4));
  }
  for (int rep = 0; rep < 10; ++rep) {
    ExponentMatrix t = ExponentMatrix::zeros(5, 2);
    for (u32& e : t.t) e = static_cast<u32>(rng.below(5));
    ExponentMatrix back = exponent_from_json(exponent_to_json(t));
    CHECK(back.n == t.n);
    CHECK(back.d == t.d);
    CHECK(back.t == t.t);
  }

  CHECK_THROWS_AS(graph_from_json(json{{"edges", json::array()}}), std::invalid_argument);
  json badf = formula_to_json(SmFormula::leaf(1, 0));
  badf["kind"] = "minus";
  CHECK_THROWS_AS(formula_from_json(badf), std::invalid_argument);
}

TEST_CASE("file helpers persist documents") {
  json doc = {{"hello", 1}, {"nested", {{"x", 2.5}}}};
  std::string path = "json_io_roundtrip_fixture.json";
  save_json(path, doc);
  CHECK(load_json(path) == doc);
  CHECK_THROWS_AS(load_json("does_not_exist_anywhere.json"), std::runtime_error);
  std::remove(path.c_str());
}
