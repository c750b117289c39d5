#include "ptw/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace ptw {

namespace {

json cplx_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("complex entry must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

const json& need(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument(std::string("missing JSON key: ") + key);
  return *it;
}

}  // namespace

json field_to_json(const FieldCtx& ctx) {
  switch (ctx.kind) {
    case FieldKind::GFp:
      return {{"kind", "gfp"}, {"p", ctx.p}};
    case FieldKind::ComplexApprox:
      return {{"kind", "complex"}, {"eps", ctx.eps}};
    case FieldKind::CycMod:
      return {{"kind", "cycmod"}, {"q", ctx.q}, {"n", ctx.n}, {"omega", ctx.omega}};
  }
  throw std::logic_error("unhandled field kind");
}

FieldCtx field_from_json(const json& j) {
  std::string kind = need(j, "kind").get<std::string>();
  if (kind == "gfp") return FieldCtx::gfp(need(j, "p").get<u64>());
  if (kind == "complex") return FieldCtx::complex_approx(need(j, "eps").get<double>());
  if (kind == "cycmod")
    return FieldCtx::cycmod(need(j, "q").get<u64>(), need(j, "n").get<u32>(),
                            need(j, "omega").get<u64>());
  throw std::invalid_argument("unknown field kind: " + kind);
}

json matrix_to_json(const DenseMatrix& m) {
  json entries = json::array();
  if (m.ctx.finite())
    for (u64 v : m.fe) entries.push_back(v);
  else
    for (const cplx& z : m.ce) entries.push_back(cplx_to_json(z));
  return {{"field", field_to_json(m.ctx)},
          {"rows", m.rows},
          {"cols", m.cols},
          {"entries", std::move(entries)}};
}

DenseMatrix matrix_from_json(const json& j) {
  FieldCtx ctx = field_from_json(need(j, "field"));
  std::size_t rows = need(j, "rows").get<std::size_t>();
  std::size_t cols = need(j, "cols").get<std::size_t>();
  const json& entries = need(j, "entries");
  if (!entries.is_array() || entries.size() != rows * cols)
    throw std::invalid_argument("matrix entry count does not match its shape");
  DenseMatrix m(ctx, rows, cols);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (ctx.finite()) {
      u64 v = entries[k].get<u64>();
      if (v >= ctx.mod()) throw std::invalid_argument("matrix entry is not reduced");
      m.fe[k] = v;
    } else {
      m.ce[k] = cplx_from_json(entries[k]);
    }
  }
  return m;
}

json hyper_to_json(const HyperMatrix& m) {
  return {{"n", m.n}, {"d", m.d}, {"matrix", matrix_to_json(m.m)}};
}

HyperMatrix hyper_from_json(const json& j) {
  return HyperMatrix(need(j, "n").get<u32>(), need(j, "d").get<u32>(),
                     matrix_from_json(need(j, "matrix")));
}

json tensor_to_json(const Tensor& t) {
  json labels = json::array();
  for (const Label& l : t.labels) labels.push_back(json::array({l.u, l.v}));
  json entries = json::array();
  if (t.ctx.finite())
    for (u64 v : t.fe) entries.push_back(v);
  else
    for (const cplx& z : t.ce) entries.push_back(cplx_to_json(z));
  return {{"field", field_to_json(t.ctx)},
          {"n", t.n},
          {"labels", std::move(labels)},
          {"entries", std::move(entries)}};
}

Tensor tensor_from_json(const json& j) {
  FieldCtx ctx = field_from_json(need(j, "field"));
  u32 n = need(j, "n").get<u32>();
  std::vector<Label> labels;
  for (const json& lj : need(j, "labels")) {
    if (!lj.is_array() || lj.size() != 2)
      throw std::invalid_argument("tensor label must be a [u, v] pair");
    i32 u = lj[0].get<i32>(), v = lj[1].get<i32>();
    labels.push_back(u == v ? Label::plain(u) : Label::dedge(u, v));
  }
  Tensor t(ctx, n, labels);
  const json& entries = need(j, "entries");
  if (!entries.is_array() || entries.size() != t.size())
    throw std::invalid_argument("tensor entry count does not match its shape");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (ctx.finite()) {
      u64 v = entries[k].get<u64>();
      if (v >= ctx.mod()) throw std::invalid_argument("tensor entry is not reduced");
      t.fe[k] = v;
    } else {
      t.ce[k] = cplx_from_json(entries[k]);
    }
  }
  return t;
}

json pt_cert_to_json(const PtCertificate& cert) {
  json parts = json::array();
  for (const auto& [kappa, mat] : cert.parts)
    parts.push_back({{"kappa", kappa}, {"matrix", matrix_to_json(mat)}});
  return {{"target", hyper_to_json(cert.target)},
          {"parts", std::move(parts)},
          {"value", cert.value},
          {"metadata", cert.metadata}};
}

PtCertificate pt_cert_from_json(const json& j) {
  PtCertificate cert;
  cert.target = hyper_from_json(need(j, "target"));
  for (const json& pj : need(j, "parts")) {
    u32 kappa = need(pj, "kappa").get<u32>();
    if (!cert.parts.emplace(kappa, matrix_from_json(need(pj, "matrix"))).second)
      throw std::invalid_argument("certificate lists the same kappa twice");
  }
  cert.value = need(j, "value").get<std::size_t>();
  cert.metadata = need(j, "metadata").get<std::string>();
  return cert;
}

json sos_cert_to_json(const SoSCertificate& cert) {
  json terms = json::array();
  for (const DenseMatrix& g : cert.terms) terms.push_back(matrix_to_json(g));
  return {{"n", cert.n},
          {"d", cert.d},
          {"field", field_to_json(cert.ctx)},
          {"terms", std::move(terms)},
          {"metadata", cert.metadata}};
}

SoSCertificate sos_cert_from_json(const json& j) {
  SoSCertificate cert;
  cert.n = need(j, "n").get<u32>();
  cert.d = need(j, "d").get<u32>();
  cert.ctx = field_from_json(need(j, "field"));
  for (const json& tj : need(j, "terms")) cert.terms.push_back(matrix_from_json(tj));
  cert.metadata = need(j, "metadata").get<std::string>();
  return cert;
}

json graph_to_json(const PathGraph& g) { return {{"edges", g.edges}}; }

PathGraph graph_from_json(const json& j) {
  return PathGraph(need(j, "edges").get<std::vector<i32>>());
}

json abp_to_json(const OrderedABP& abp) {
  json layers = json::array();
  for (const DenseMatrix& l : abp.layers) layers.push_back(matrix_to_json(l));
  return {{"field", field_to_json(abp.ctx)},
          {"n", abp.n},
          {"d", abp.d},
          {"widths", abp.widths},
          {"layers", std::move(layers)},
          {"v1", matrix_to_json(abp.v1)},
          {"v2", matrix_to_json(abp.v2)}};
}

OrderedABP abp_from_json(const json& j) {
  OrderedABP abp;
  abp.ctx = field_from_json(need(j, "field"));
  abp.n = need(j, "n").get<u32>();
  abp.d = need(j, "d").get<u32>();
  abp.widths = need(j, "widths").get<std::vector<u32>>();
  for (const json& lj : need(j, "layers")) abp.layers.push_back(matrix_from_json(lj));
  abp.v1 = matrix_from_json(need(j, "v1"));
  abp.v2 = matrix_from_json(need(j, "v2"));
  abp.validate();
  return abp;
}

json formula_to_json(const SmFormula& f) {
  switch (f.kind) {
    case SmFormula::Kind::leaf:
      return {{"kind", "leaf"},
              {"block", f.block},
              {"var", f.var},
              {"fscalar", f.fscalar},
              {"cscalar", cplx_to_json(f.cscalar)}};
    case SmFormula::Kind::plus:
    case SmFormula::Kind::times: {
      json kids = json::array();
      for (const SmFormula& k : f.kids) kids.push_back(formula_to_json(k));
      return {{"kind", f.kind == SmFormula::Kind::plus ? "plus" : "times"},
              {"kids", std::move(kids)}};
    }
  }
  throw std::logic_error("unhandled formula node kind");
}

SmFormula formula_from_json(const json& j) {
  std::string kind = need(j, "kind").get<std::string>();
  if (kind == "leaf") {
    SmFormula f = SmFormula::leaf(need(j, "block").get<i32>(), need(j, "var").get<u32>(),
                                  need(j, "fscalar").get<u64>());
    f.cscalar = cplx_from_json(need(j, "cscalar"));
    return f;
  }
  std::vector<SmFormula> kids;
  for (const json& kj : need(j, "kids")) kids.push_back(formula_from_json(kj));
  if (kind == "plus") return SmFormula::plus(std::move(kids));
  if (kind == "times") {
    if (kids.size() != 2)
      throw std::invalid_argument("product node must have exactly two children");
    return SmFormula::times(std::move(kids[0]), std::move(kids[1]));
  }
  throw std::invalid_argument("unknown formula node kind: " + kind);
}

json exponent_to_json(const ExponentMatrix& t) {
  json rows = json::array();
  for (u32 a = 0; a < t.d; ++a) {
    json row = json::array();
    for (u32 b = 0; b < t.d; ++b) row.push_back(t.at(a, b));
    rows.push_back(std::move(row));
  }
  return {{"family", "wt"}, {"n", t.n}, {"d", t.d}, {"T", std::move(rows)}};
}

ExponentMatrix exponent_from_json(const json& j) {
  if (need(j, "family").get<std::string>() != "wt")
    throw std::invalid_argument("unknown candidate family");
  ExponentMatrix t = ExponentMatrix::zeros(need(j, "n").get<u32>(), need(j, "d").get<u32>());
  const json& rows = need(j, "T");
  if (!rows.is_array() || rows.size() != t.d)
    throw std::invalid_argument("exponent matrix row count does not match d");
  for (u32 a = 0; a < t.d; ++a) {
    const json& row = rows[a];
    if (!row.is_array() || row.size() != t.d)
      throw std::invalid_argument("exponent matrix row length does not match d");
    for (u32 b = 0; b < t.d; ++b) t.at(a, b) = row[b].get<u32>();
  }
  t.validate(true);  // strict family policy is applied by the operations
  return t;
}

json rel_to_json(const RelValue& v) {
  return {{"num", v.num}, {"n", v.n}, {"e", v.e}, {"display", rel_str(v)}};
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace ptw
