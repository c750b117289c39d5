#include "ptw/pathgraph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ptw {

PathGraph::PathGraph(std::vector<i32> edge_ids) : edges(std::move(edge_ids)) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (edges.empty()) throw std::invalid_argument("PathGraph: at least one edge required");
}

PathGraph PathGraph::path(i32 first_edge, u32 length) {
  std::vector<i32> ids(length);
  std::iota(ids.begin(), ids.end(), first_edge);
  return PathGraph(std::move(ids));
}

bool PathGraph::has_edge(i32 id) const {
  return std::binary_search(edges.begin(), edges.end(), id);
}

GraphInfo graph_analyze(const PathGraph& g) {
  GraphInfo info;
  // vertex v is covered by edges v and v+1; edges are sorted, so walking the
  // candidate vertices in order keeps every derived list sorted
  std::vector<i32> verts;
  for (i32 e : g.edges) {
    verts.push_back(e - 1);
    verts.push_back(e);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  for (i32 v : verts) {
    bool left = g.has_edge(v), right = g.has_edge(v + 1);
    if (left && right) {
      info.v2.push_back(v);
      info.d2.push_back(Label::dedge(v, v - 1));
      info.d2.push_back(Label::dedge(v, v + 1));
    } else if (left) {
      info.v1.push_back(v);
      info.d1.push_back(Label::dedge(v, v - 1));
    } else {
      info.v1.push_back(v);
      info.d1.push_back(Label::dedge(v, v + 1));
    }
  }
  std::sort(info.d1.begin(), info.d1.end());
  std::sort(info.d2.begin(), info.d2.end());
  std::vector<i32> run;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    if (!run.empty() && g.edges[k] != run.back() + 1) {
      info.components.push_back(run);
      run.clear();
    }
    run.push_back(g.edges[k]);
  }
  info.components.push_back(run);
  for (const auto& comp : info.components)
    info.ell = std::max<u32>(info.ell, static_cast<u32>(comp.size()));
  return info;
}

std::vector<Label> directed_edges(const PathGraph& g) {
  std::vector<Label> labs;
  for (i32 e : g.edges) {
    labs.push_back(Label::dedge(e - 1, e));
    labs.push_back(Label::dedge(e, e - 1));
  }
  std::sort(labs.begin(), labs.end());
  return labs;
}

Orientation::Orientation(std::vector<i32> s, u32 choice_bits)
    : base(std::move(s)), bits(choice_bits) {
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  if (base.size() >= 32) throw std::invalid_argument("Orientation: base too large");
  if ((bits >> base.size()) != 0)
    throw std::invalid_argument("Orientation: bits exceed the base size");
}

std::vector<Label> Orientation::i_set() const {
  std::vector<Label> out;
  for (std::size_t t = 0; t < base.size(); ++t) {
    i32 v = base[t];
    out.push_back((bits >> t) & 1 ? Label::dedge(v, v + 1) : Label::dedge(v, v - 1));
  }
  return out;
}

std::vector<Label> Orientation::j_set() const {
  std::vector<Label> out;
  for (std::size_t t = 0; t < base.size(); ++t) {
    i32 v = base[t];
    out.push_back((bits >> t) & 1 ? Label::dedge(v, v - 1) : Label::dedge(v, v + 1));
  }
  return out;
}

std::vector<Orientation> orientations(std::vector<i32> s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.size() > 20) throw std::invalid_argument("orientations: base too large to enumerate");
  std::vector<Orientation> out;
  out.reserve(std::size_t{1} << s.size());
  for (u32 b = 0; b < (1u << s.size()); ++b) out.emplace_back(s, b);
  return out;
}

Orientation orientation_union(const Orientation& a, const Orientation& b) {
  std::vector<i32> merged = a.base;
  merged.insert(merged.end(), b.base.begin(), b.base.end());
  std::sort(merged.begin(), merged.end());
  if (std::adjacent_find(merged.begin(), merged.end()) != merged.end())
    throw std::invalid_argument("orientation_union: bases intersect");
  u32 bits = 0;
  for (std::size_t t = 0; t < merged.size(); ++t) {
    i32 v = merged[t];
    auto ia = std::lower_bound(a.base.begin(), a.base.end(), v);
    u32 bit;
    if (ia != a.base.end() && *ia == v) {
      bit = (a.bits >> (ia - a.base.begin())) & 1;
    } else {
      auto ib = std::lower_bound(b.base.begin(), b.base.end(), v);
      bit = (b.bits >> (ib - b.base.begin())) & 1;
    }
    bits |= bit << t;
  }
  return Orientation(std::move(merged), bits);
}

std::pair<Orientation, Orientation> gamma_pm(const PathGraph& g) {
  GraphInfo info = graph_analyze(g);
  u32 plus = 0;
  for (std::size_t t = 0; t < info.v1.size(); ++t)
    if (!g.has_edge(info.v1[t]))  // the in-graph edge sits on the right
      plus |= 1u << t;
  u32 mask = (1u << info.v1.size()) - 1;
  return {Orientation(info.v1, plus), Orientation(info.v1, plus ^ mask)};
}

std::pair<Orientation, Orientation> delta_pm(const PathGraph& g, const PathGraph& h) {
  std::vector<i32> common_edges;
  std::set_intersection(g.edges.begin(), g.edges.end(), h.edges.begin(), h.edges.end(),
                        std::back_inserter(common_edges));
  if (!common_edges.empty())
    throw std::invalid_argument("delta_pm: graphs must be edge-disjoint");
  GraphInfo ig = graph_analyze(g), ih = graph_analyze(h);
  std::vector<i32> shared;
  std::set_intersection(ig.v1.begin(), ig.v1.end(), ih.v1.begin(), ih.v1.end(),
                        std::back_inserter(shared));
  u32 plus = 0;
  for (std::size_t t = 0; t < shared.size(); ++t)
    if (h.has_edge(shared[t] + 1))  // the H-incident edge sits on the right
      plus |= 1u << t;
  u32 mask = shared.empty() ? 0 : (1u << shared.size()) - 1;
  return {Orientation(shared, plus), Orientation(shared, plus ^ mask)};
}

PathGraph graph_union(const PathGraph& g, const PathGraph& h) {
  std::vector<i32> ids = g.edges;
  ids.insert(ids.end(), h.edges.begin(), h.edges.end());
  return PathGraph(std::move(ids));
}

u64 checked_pow(u64 base, u32 exp) {
  u64 r = 1;
  while (exp--) {
    if (base != 0 && r > ~u64{0} / base)
      throw std::overflow_error("checked_pow: result exceeds 64 bits");
    r *= base;
  }
  return r;
}

namespace {

u64 checked_mul(u64 a, u64 b) {
  if (a != 0 && b > ~u64{0} / a) throw std::overflow_error("relative-value product overflows");
  return a * b;
}

u32 common_alphabet(const RelValue& a, const RelValue& b) {
  if (a.n != 1 && b.n != 1 && a.n != b.n)
    throw std::invalid_argument("relative values over different alphabets");
  return a.n != 1 ? a.n : b.n;
}

}  // namespace

bool rel_eq(const RelValue& a, const RelValue& b) {
  if (a.num == 0 || b.num == 0) return a.num == b.num;
  u32 n = common_alphabet(a, b);
  return checked_mul(a.num, checked_pow(n, b.e)) == checked_mul(b.num, checked_pow(n, a.e));
}

bool rel_le(const RelValue& a, const RelValue& b) {
  if (a.num == 0) return true;
  if (b.num == 0) return false;
  u32 n = common_alphabet(a, b);
  return checked_mul(a.num, checked_pow(n, b.e)) <= checked_mul(b.num, checked_pow(n, a.e));
}

RelValue rel_mul(const RelValue& a, const RelValue& b) {
  u32 n = common_alphabet(a, b);
  return RelValue{checked_mul(a.num, b.num), n, a.e + b.e};
}

RelValue rel_add(const RelValue& a, const RelValue& b) {
  u32 n = common_alphabet(a, b);
  u32 e = std::max(a.e, b.e);
  return RelValue{checked_mul(a.num, checked_pow(n, e - a.e)) +
                      checked_mul(b.num, checked_pow(n, e - b.e)),
                  n, e};
}

std::string rel_str(const RelValue& a) {
  return std::to_string(a.num) + "/" + std::to_string(a.n) + "^" + std::to_string(a.e);
}

namespace {

void require_graph_labels(const Tensor& a, const PathGraph& g) {
  std::vector<Label> sorted = a.labels;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != directed_edges(g))
    throw std::invalid_argument("tensor labels must be the directed edges of the graph");
}

// Row side I = I_alpha u (I_gamma n D(G)), column side J likewise.  Alpha
// orients the degree-2 vertices (both incident directed edges belong to
// D(G)); gamma orients the degree-1 vertices, where only the in-graph choice
// survives the intersection.
std::pair<std::vector<Label>, std::vector<Label>> index_sets(const PathGraph& g,
                                                             const GraphInfo& info,
                                                             const Orientation& alpha,
                                                             const Orientation& gamma) {
  if (alpha.base != info.v2)
    throw std::invalid_argument("alpha must orient exactly the degree-2 vertices");
  if (gamma.base != info.v1)
    throw std::invalid_argument("gamma must orient exactly the degree-1 vertices");
  std::vector<Label> iset = alpha.i_set(), jset = alpha.j_set();
  for (const Label& l : gamma.i_set())
    if (g.has_edge(std::max(l.u, l.v))) iset.push_back(l);
  for (const Label& l : gamma.j_set())
    if (g.has_edge(std::max(l.u, l.v))) jset.push_back(l);
  return {std::move(iset), std::move(jset)};
}

constexpr u64 kProbeModulus = 1048583;  // prime, above any desk-scale tensor size

// Positions of each tensor offset inside the (alpha, gamma) flattening,
// restricted and re-numbered to the rows/columns the free slots can touch
// (all other rows/columns stay identically zero during enumeration).  Built
// through flatten_mat on a probe tensor so the index convention is taken
// from the flattening code itself rather than re-derived here.
struct FlatMap {
  std::vector<u32> row, col;  // one entry per free slot
  std::size_t rows = 0, cols = 0;
};

FlatMap build_flat_map(const Tensor& shape, const PathGraph& g, const GraphInfo& info,
                       const Orientation& alpha, const Orientation& gamma,
                       const std::vector<std::size_t>& free_offsets) {
  if (shape.size() >= kProbeModulus)
    throw std::invalid_argument("rho enumeration: tensor too large to index");
  Tensor probe(FieldCtx::gfp(kProbeModulus), shape.n, shape.labels);
  for (std::size_t off = 0; off < probe.fe.size(); ++off) probe.fe[off] = off + 1;
  auto [iset, jset] = index_sets(g, info, alpha, gamma);
  DenseMatrix mat = flatten_mat(probe, iset, jset);
  std::vector<u32> row_of(shape.size()), col_of(shape.size());
  for (std::size_t r = 0; r < mat.rows; ++r)
    for (std::size_t c = 0; c < mat.cols; ++c) {
      std::size_t off = static_cast<std::size_t>(mat.f(r, c)) - 1;
      row_of[off] = static_cast<u32>(r);
      col_of[off] = static_cast<u32>(c);
    }
  std::vector<u32> rs, cs;
  rs.reserve(free_offsets.size());
  cs.reserve(free_offsets.size());
  for (std::size_t off : free_offsets) {
    rs.push_back(row_of[off]);
    cs.push_back(col_of[off]);
  }
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  FlatMap fm;
  fm.rows = rs.size();
  fm.cols = cs.size();
  for (std::size_t off : free_offsets) {
    fm.row.push_back(
        static_cast<u32>(std::lower_bound(rs.begin(), rs.end(), row_of[off]) - rs.begin()));
    fm.col.push_back(
        static_cast<u32>(std::lower_bound(cs.begin(), cs.end(), col_of[off]) - cs.begin()));
  }
  return fm;
}

std::size_t rank_bits(std::vector<u64>& rows) {
  std::size_t r = 0;
  for (u32 c = 0; c < 64 && r < rows.size(); ++c) {
    u64 m = u64{1} << c;
    std::size_t p = r;
    while (p < rows.size() && !(rows[p] & m)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    for (std::size_t k = r + 1; k < rows.size(); ++k)
      if (rows[k] & m) rows[k] ^= rows[r];
    ++r;
  }
  return r;
}

std::size_t rank_dense_mod(std::vector<u64>& m, std::size_t rows, std::size_t cols, u64 q) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p * cols + c] == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t k = c; k < cols; ++k) std::swap(m[p * cols + k], m[r * cols + k]);
    u64 inv = inv_mod(m[r * cols + c], q);
    for (std::size_t t = r + 1; t < rows; ++t) {
      u64 f = m[t * cols + c];
      if (!f) continue;
      u64 mult = (q - f * inv % q) % q;
      for (std::size_t k = c; k < cols; ++k)
        m[t * cols + k] = (m[t * cols + k] + mult * m[r * cols + k]) % q;
    }
    ++r;
  }
  return r;
}

struct RankScratch {
  std::vector<u64> buf;
};

std::size_t rank_from_map(const std::vector<u64>& part, const FlatMap& fm, u64 q,
                          RankScratch& s) {
  if (q == 2 && fm.cols <= 64) {
    s.buf.assign(fm.rows, 0);
    for (std::size_t k = 0; k < part.size(); ++k)
      if (part[k]) s.buf[fm.row[k]] |= u64{1} << fm.col[k];
    return rank_bits(s.buf);
  }
  s.buf.assign(fm.rows * fm.cols, 0);
  for (std::size_t k = 0; k < part.size(); ++k)
    s.buf[static_cast<std::size_t>(fm.row[k]) * fm.cols + fm.col[k]] = part[k];
  return rank_dense_mod(s.buf, fm.rows, fm.cols, q);
}

u64 sub_q(u64 a, u64 b, u64 q) { return a >= b ? a - b : a + q - b; }

// Smallest rank sum over all decompositions of `a` into the given parts for
// one fixed gamma: every part except the last ranges over all tensors
// supported on the free slots (entries advance little-endian within a part,
// parts in the given order); the last part is the forced remainder.
u64 rho_min_for_gamma(const Tensor& a, const PathGraph& g, const GraphInfo& info,
                      const std::vector<Orientation>& alphas, const Orientation& gamma,
                      const std::vector<std::size_t>& free_offsets, u64 budget,
                      unsigned threads) {
  const FieldCtx& ctx = a.ctx;
  if (!ctx.finite()) throw std::invalid_argument("rho enumeration needs a finite field");
  u64 q = ctx.mod();
  if (q >> 31) throw std::invalid_argument("rho enumeration needs a word-sized modulus");
  std::vector<char> free_mark(a.size(), 0);
  for (std::size_t off : free_offsets) free_mark[off] = 1;
  for (std::size_t off = 0; off < a.size(); ++off)
    if (!free_mark[off] && a.fe[off] != 0)
      throw std::invalid_argument("rho enumeration: target supported outside the free slots");

  const std::size_t nparts = alphas.size();
  const std::size_t nfree = free_offsets.size();
  const u64 free_digits = static_cast<u64>(nparts - 1) * nfree;
  u64 count = 1;
  for (u64 t = 0; t < free_digits; ++t) {
    if (count > budget / q + 1) throw std::runtime_error("rho enumeration budget exceeded");
    count *= q;
  }
  if (count > budget) throw std::runtime_error("rho enumeration budget exceeded");

  std::vector<FlatMap> maps;
  maps.reserve(nparts);
  for (const Orientation& al : alphas)
    maps.push_back(build_flat_map(a, g, info, al, gamma, free_offsets));
  std::vector<u64> target(nfree);
  for (std::size_t k = 0; k < nfree; ++k) target[k] = a.fe[free_offsets[k]];

  unsigned nshards = threads ? threads : 1;
  if (static_cast<u64>(nshards) > count) nshards = static_cast<unsigned>(count);
  std::vector<u64> results(nshards, ~u64{0});

  auto body = [&](unsigned shard, u64 lo, u64 hi) {
    std::vector<u32> dig(free_digits, 0);
    u64 rest = lo;
    for (u64 t = 0; t < free_digits && rest; ++t) {
      dig[t] = static_cast<u32>(rest % q);
      rest /= q;
    }
    std::vector<std::vector<u64>> parts(nparts, std::vector<u64>(nfree, 0));
    parts[nparts - 1] = target;
    for (u64 t = 0; t < free_digits; ++t)
      if (dig[t]) {
        std::size_t p = t / nfree, e = t % nfree;
        parts[p][e] = dig[t];
        parts[nparts - 1][e] = sub_q(parts[nparts - 1][e], dig[t], q);
      }
    RankScratch scratch;
    std::vector<std::size_t> rk(nparts);
    for (std::size_t p = 0; p < nparts; ++p)
      rk[p] = rank_from_map(parts[p], maps[p], q, scratch);
    u64& best = results[shard];
    for (u64 x = lo;; ++x) {
      u64 total = 0;
      for (std::size_t p = 0; p < nparts; ++p) total += rk[p];
      if (total < best) best = total;
      if (x + 1 == hi) break;
      // advance the odometer, tracking which parts changed
      u64 t = 0;
      bool low_dirty = false;
      for (;;) {
        std::size_t p = t / nfree, e = t % nfree;
        u64 old = dig[t];
        u64 nv = (old + 1 == q) ? 0 : old + 1;
        dig[t] = static_cast<u32>(nv);
        parts[p][e] = nv;
        parts[nparts - 1][e] = sub_q(parts[nparts - 1][e], sub_q(nv, old, q), q);
        if (p == 0)
          low_dirty = true;
        else
          rk[p] = rank_from_map(parts[p], maps[p], q, scratch);
        if (nv != 0) break;
        ++t;
      }
      if (low_dirty) rk[0] = rank_from_map(parts[0], maps[0], q, scratch);
      rk[nparts - 1] = rank_from_map(parts[nparts - 1], maps[nparts - 1], q, scratch);
    }
  };
  parallel_shards(count, nshards, body);

  u64 best = results[0];
  for (std::size_t s = 1; s < results.size(); ++s) best = std::min(best, results[s]);
  return best;
}

}  // namespace

RelValue relrk(const Tensor& a, const PathGraph& g, const Orientation& alpha,
               const Orientation& gamma) {
  require_graph_labels(a, g);
  GraphInfo info = graph_analyze(g);
  auto [iset, jset] = index_sets(g, info, alpha, gamma);
  std::size_t r = rank(flatten_mat(a, iset, jset));
  return RelValue{r, a.n, static_cast<u32>(g.edges.size())};
}

namespace {

void require_decomposition(const Tensor& a, const std::vector<Orientation>& alphas,
                           const std::vector<Tensor>& parts) {
  if (parts.size() != alphas.size())
    throw std::invalid_argument("decomposition needs one part per interior orientation");
  Tensor sum(a.ctx, a.n, a.labels);
  for (const Tensor& p : parts) sum = tensor_add(sum, p);  // also checks shapes
  if (!(sum == a))
    throw std::invalid_argument("decomposition does not sum to the target tensor");
}

RelValue decomposition_value(const Tensor& a, const PathGraph& g,
                             const std::vector<Orientation>& alphas,
                             const std::vector<Tensor>& parts, const Orientation& gamma) {
  u64 total = 0;
  for (std::size_t k = 0; k < parts.size(); ++k)
    total += relrk(parts[k], g, alphas[k], gamma).num;
  return RelValue{total, a.n, static_cast<u32>(g.edges.size())};
}

}  // namespace

RelValue rho_from_decomposition(const Tensor& a, const PathGraph& g,
                                const std::vector<Tensor>& parts) {
  require_graph_labels(a, g);
  GraphInfo info = graph_analyze(g);
  std::vector<Orientation> alphas = orientations(info.v2);
  require_decomposition(a, alphas, parts);
  RelValue best{0, a.n, static_cast<u32>(g.edges.size())};
  for (const Orientation& gamma : orientations(info.v1)) {
    RelValue v = decomposition_value(a, g, alphas, parts, gamma);
    if (!rel_le(v, best)) best = v;
  }
  return best;
}

RelValue rho_from_decomposition(
    const Tensor& a, const PathGraph& g,
    const std::function<std::vector<Tensor>(const Orientation& gamma)>& parts_for) {
  require_graph_labels(a, g);
  GraphInfo info = graph_analyze(g);
  std::vector<Orientation> alphas = orientations(info.v2);
  RelValue best{0, a.n, static_cast<u32>(g.edges.size())};
  for (const Orientation& gamma : orientations(info.v1)) {
    std::vector<Tensor> parts = parts_for(gamma);
    require_decomposition(a, alphas, parts);
    RelValue v = decomposition_value(a, g, alphas, parts, gamma);
    if (!rel_le(v, best)) best = v;
  }
  return best;
}

RelValue rho_exact(const Tensor& a, const PathGraph& g, u64 budget, unsigned threads) {
  require_graph_labels(a, g);
  GraphInfo info = graph_analyze(g);
  std::vector<Orientation> alphas = orientations(info.v2);
  std::vector<std::size_t> all(a.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  u64 best = 0;
  for (const Orientation& gamma : orientations(info.v1))
    best = std::max(best, rho_min_for_gamma(a, g, info, alphas, gamma, all, budget, threads));
  return RelValue{best, a.n, static_cast<u32>(g.edges.size())};
}

std::vector<Tensor> decomposition_from_pt_certificate(const PtCertificate& cert) {
  u32 n = cert.target.n, d = cert.target.d;
  if (d == 0)
    throw std::invalid_argument("decomposition_from_pt_certificate: order-0 target");
  PathGraph g = PathGraph::path(1, d + 1);
  std::vector<Label> labs = directed_edges(g);
  std::size_t nparts = std::size_t{1} << d;  // one slot per interior orientation
  std::vector<Tensor> parts(nparts, Tensor(cert.target.m.ctx, n, labs));
  for (const auto& [kappa, nk] : cert.parts) {
    if (kappa >= nparts)
      throw std::invalid_argument("decomposition_from_pt_certificate: stray axis subset");
    parts[kappa] = tensor_add(parts[kappa], padded_tensor(HyperMatrix(n, d, nk)));
  }
  return parts;
}

RhoPtReport rho_pt_identity_check(const HyperMatrix& m, u64 budget, unsigned threads) {
  if (m.d == 0) throw std::invalid_argument("rho_pt_identity_check: order-0 matrix");
  auto [value, cert] = pt_rank_exact(m, budget, threads);
  (void)cert;

  Tensor p = padded_tensor(m);
  PathGraph g = PathGraph::path(1, m.d + 1);
  GraphInfo info = graph_analyze(g);
  // complement-folded parts: the bit of the last interior vertex stays 0
  std::vector<Orientation> alphas;
  for (u32 k = 0; k < (1u << (m.d - 1)); ++k) alphas.emplace_back(info.v2, k);
  // free slots: both pad digits (most significant and least significant) are 0
  std::vector<std::size_t> slice;
  const std::size_t size = p.size();
  const std::size_t msb_place = size / p.n;
  for (std::size_t off = 0; off < msb_place; ++off)
    if (off % p.n == 0) slice.push_back(off);

  u64 best = 0, first_min = 0;
  bool first = true, uniform = true;
  for (const Orientation& gamma : orientations(info.v1)) {
    u64 mn = rho_min_for_gamma(p, g, info, alphas, gamma, slice, budget, threads);
    if (first) {
      first_min = mn;
      first = false;
    }
    uniform = uniform && (mn == first_min);
    best = std::max(best, mn);
  }

  RhoPtReport rep;
  rep.pt_value = value;
  rep.rho = RelValue{best, m.n, m.d + 1};
  rep.equal = (value == best);
  rep.notes = "pads pinned to the first symbol; parts folded to " +
              std::to_string(alphas.size()) + " of " +
              std::to_string(std::size_t{1} << m.d) + "; free slots " +
              std::to_string(slice.size()) + " of " + std::to_string(size);
  if (!uniform) rep.notes += "; WARNING: per-orientation minima disagreed";
  return rep;
}

namespace {

Tensor random_graph_tensor(Rng& rng, const FieldCtx& ctx, u32 n, const PathGraph& g) {
  Tensor t(ctx, n, directed_edges(g));
  if (ctx.finite()) {
    u64 q = ctx.mod();
    for (u64& v : t.fe) v = rng.below(q);
  } else {
    for (cplx& v : t.ce)
      v = cplx(static_cast<double>(static_cast<i64>(rng.below(7)) - 3),
               static_cast<double>(static_cast<i64>(rng.below(7)) - 3));
  }
  return t;
}

std::string graph_str(const PathGraph& g) {
  std::string s = "{";
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(g.edges[k]);
  }
  return s + "}";
}

std::vector<i32> sorted_minus(const std::vector<i32>& a, const std::vector<i32>& b) {
  std::vector<i32> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<i32> sorted_meet(const std::vector<i32>& a, const std::vector<i32>& b) {
  std::vector<i32> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::vector<LemmaReport> lemma_suite(u64 seed, u64 trials) {
  Rng root(seed);
  std::vector<LemmaReport> out;
  const FieldCtx gf2 = FieldCtx::gfp(2);
  const FieldCtx gf3 = FieldCtx::gfp(3);
  const FieldCtx cx = FieldCtx::complex_approx();
  const u32 n = 2;
  const u64 rho_trials = std::min<u64>(trials, 6);

  {  // rank of a sum never exceeds the sum of ranks, per flattening
    Rng rng = root.fork();
    LemmaReport rep{"relrk-subadditive", trials, 0, ""};
    const std::vector<PathGraph> gs = {PathGraph({1}), PathGraph({1, 2})};
    const std::vector<FieldCtx> fs = {gf2, gf3, cx};
    for (u64 t = 0; t < trials; ++t) {
      const PathGraph& g = gs[t % gs.size()];
      const FieldCtx& f = fs[rng.below(fs.size())];
      GraphInfo info = graph_analyze(g);
      Tensor a = random_graph_tensor(rng, f, n, g);
      Tensor b = random_graph_tensor(rng, f, n, g);
      Tensor s = tensor_add(a, b);
      bool ok = true;
      for (const Orientation& alpha : orientations(info.v2)) {
        for (const Orientation& gamma : orientations(info.v1)) {
          RelValue rs = relrk(s, g, alpha, gamma);
          RelValue ra = relrk(a, g, alpha, gamma);
          RelValue rb = relrk(b, g, alpha, gamma);
          if (rs.num > ra.num + rb.num) {
            ok = false;
            if (rep.witness.empty())
              rep.witness = "trial " + std::to_string(t) + " on " + graph_str(g) + " (" +
                            f.describe() + "): " + rel_str(rs) + " > " + rel_str(ra) +
                            " + " + rel_str(rb);
          }
        }
      }
      if (!ok) ++rep.failures;
    }
    out.push_back(std::move(rep));
  }

  {  // glued single edges: relrk of the product factors exactly
    Rng rng = root.fork();
    LemmaReport rep{"relrk-multiplicative-paths", trials, 0, ""};
    PathGraph g({1}), h({2});
    PathGraph u = graph_union(g, h);
    for (u64 t = 0; t < trials; ++t) {
      Tensor a = random_graph_tensor(rng, gf3, n, g);
      Tensor b = random_graph_tensor(rng, gf3, n, h);
      Tensor prod = tensor_product(a, b);
      bool ok = true;
      for (const Orientation& delta : orientations({1})) {
        for (const Orientation& xi : orientations({0})) {
          for (const Orientation& zeta : orientations({2})) {
            RelValue lhs = relrk(prod, u, delta, orientation_union(xi, zeta));
            RelValue rhs = rel_mul(relrk(a, g, Orientation{}, orientation_union(xi, delta)),
                                   relrk(b, h, Orientation{}, orientation_union(zeta, delta)));
            if (!rel_eq(lhs, rhs)) {
              ok = false;
              if (rep.witness.empty())
                rep.witness = "trial " + std::to_string(t) + ": " + rel_str(lhs) +
                              " != " + rel_str(rhs);
            }
          }
        }
      }
      if (!ok) ++rep.failures;
    }
    out.push_back(std::move(rep));
  }

  {  // shared-endpoint and disjoint pairs, all orientation splits
    Rng rng = root.fork();
    LemmaReport rep{"relrk-multiplicative-general", trials, 0, ""};
    const std::vector<std::pair<PathGraph, PathGraph>> pairs = {
        {PathGraph({1}), PathGraph({3})},
        {PathGraph({1, 2}), PathGraph({3})},
        {PathGraph({1, 2}), PathGraph({4})}};
    const std::vector<FieldCtx> fs = {gf2, gf3, cx};
    for (u64 t = 0; t < trials; ++t) {
      const auto& [g, h] = pairs[t % pairs.size()];
      const FieldCtx& f = fs[rng.below(fs.size())];
      GraphInfo ig = graph_analyze(g), ih = graph_analyze(h);
      std::vector<i32> shared = sorted_meet(ig.v1, ih.v1);
      std::vector<i32> xi_base = sorted_minus(ig.v1, shared);
      std::vector<i32> zeta_base = sorted_minus(ih.v1, shared);
      PathGraph u = graph_union(g, h);
      Tensor a = random_graph_tensor(rng, f, n, g);
      Tensor b = random_graph_tensor(rng, f, n, h);
      Tensor prod = tensor_product(a, b);
      bool ok = true;
      for (const Orientation& alpha : orientations(ig.v2))
        for (const Orientation& beta : orientations(ih.v2))
          for (const Orientation& delta : orientations(shared))
            for (const Orientation& xi : orientations(xi_base))
              for (const Orientation& zeta : orientations(zeta_base)) {
                Orientation au = orientation_union(orientation_union(alpha, beta), delta);
                Orientation gu = orientation_union(xi, zeta);
                RelValue lhs = relrk(prod, u, au, gu);
                RelValue rhs = rel_mul(relrk(a, g, alpha, orientation_union(xi, delta)),
                                       relrk(b, h, beta, orientation_union(zeta, delta)));
                if (!rel_eq(lhs, rhs)) {
                  ok = false;
                  if (rep.witness.empty())
                    rep.witness = "trial " + std::to_string(t) + " on " + graph_str(g) +
                                  " x " + graph_str(h) + " (" + f.describe() +
                                  "): " + rel_str(lhs) + " != " + rel_str(rhs);
                }
              }
      if (!ok) ++rep.failures;
    }
    out.push_back(std::move(rep));
  }

  {  // exhaustive rho is subadditive
    Rng rng = root.fork();
    LemmaReport rep{"rho-subadditive", rho_trials, 0, ""};
    const std::vector<PathGraph> gs = {PathGraph({1}), PathGraph({1, 2})};
    for (u64 t = 0; t < rho_trials; ++t) {
      const PathGraph& g = gs[t % gs.size()];
      Tensor a = random_graph_tensor(rng, gf2, n, g);
      Tensor b = random_graph_tensor(rng, gf2, n, g);
      RelValue rs = rho_exact(tensor_add(a, b), g);
      RelValue ra = rho_exact(a, g);
      RelValue rb = rho_exact(b, g);
      if (!rel_le(rs, rel_add(ra, rb))) {
        ++rep.failures;
        if (rep.witness.empty())
          rep.witness = "trial " + std::to_string(t) + " on " + graph_str(g) + ": " +
                        rel_str(rs) + " > " + rel_str(ra) + " + " + rel_str(rb);
      }
    }
    out.push_back(std::move(rep));
  }

  {  // rho shrinks by 1/n across a shared endpoint
    Rng rng = root.fork();
    LemmaReport rep{"rho-tensor-paths", rho_trials, 0, ""};
    PathGraph g({1}), h({2});
    PathGraph u = graph_union(g, h);
    for (u64 t = 0; t < rho_trials; ++t) {
      Tensor a = random_graph_tensor(rng, gf2, n, g);
      Tensor b = random_graph_tensor(rng, gf2, n, h);
      RelValue ra = rho_exact(a, g), rb = rho_exact(b, h);
      RelValue mn = rel_le(ra, rb) ? ra : rb;
      RelValue lhs = rho_exact(tensor_product(a, b), u);
      if (!rel_le(lhs, rel_mul(mn, RelValue{1, n, 1}))) {
        ++rep.failures;
        if (rep.witness.empty())
          rep.witness = "trial " + std::to_string(t) + ": " + rel_str(lhs) + " > " +
                        rel_str(mn) + " / " + std::to_string(n);
      }
    }
    out.push_back(std::move(rep));
  }

  {  // no shared endpoint: rho of the product still below both factors
    Rng rng = root.fork();
    LemmaReport rep{"rho-tensor-general", rho_trials, 0, ""};
    PathGraph g({1}), h({3});
    PathGraph u = graph_union(g, h);
    for (u64 t = 0; t < rho_trials; ++t) {
      Tensor a = random_graph_tensor(rng, gf2, n, g);
      Tensor b = random_graph_tensor(rng, gf2, n, h);
      RelValue ra = rho_exact(a, g), rb = rho_exact(b, h);
      RelValue mn = rel_le(ra, rb) ? ra : rb;
      RelValue lhs = rho_exact(tensor_product(a, b), u);
      if (!rel_le(lhs, mn)) {
        ++rep.failures;
        if (rep.witness.empty())
          rep.witness = "trial " + std::to_string(t) + ": " + rel_str(lhs) + " > " +
                        rel_str(mn);
      }
    }
    out.push_back(std::move(rep));
  }

  {  // endpoint bits disagreeing force one factor of deficit on paths
    Rng rng = root.fork();
    LemmaReport rep{"deficit-paths", trials, 0, ""};
    const std::vector<PathGraph> gs = {PathGraph::path(1, 1), PathGraph::path(1, 2)};
    const std::vector<FieldCtx> fs = {gf2, gf3};
    for (u64 t = 0; t < trials; ++t) {
      const PathGraph& g = gs[t % gs.size()];
      const FieldCtx& f = fs[rng.below(fs.size())];
      GraphInfo info = graph_analyze(g);
      Tensor a = random_graph_tensor(rng, f, n, g);
      u32 e = static_cast<u32>(g.edges.size());
      bool ok = true;
      for (const Orientation& alpha : orientations(info.v2)) {
        for (const Orientation& gamma : orientations(info.v1)) {
          u32 diff = (gamma.bits == 1 || gamma.bits == 2) ? 1 : 0;
          if (relrk(a, g, alpha, gamma).num > checked_pow(n, e - diff)) {
            ok = false;
            if (rep.witness.empty())
              rep.witness = "trial " + std::to_string(t) + " on " + graph_str(g) +
                            ", endpoint bits " + std::to_string(gamma.bits);
          }
        }
      }
      if (!ok) ++rep.failures;
    }
    out.push_back(std::move(rep));
  }

  {  // rank can never exceed the smaller flattening dimension
    Rng rng = root.fork();
    LemmaReport rep{"dimension-bound", trials, 0, ""};
    const std::vector<PathGraph> gs = {PathGraph({1}), PathGraph({1, 2}),
                                       PathGraph({1, 2, 4})};
    const std::vector<FieldCtx> fs = {gf2, gf3, cx};
    for (u64 t = 0; t < trials; ++t) {
      const PathGraph& g = gs[t % gs.size()];
      const FieldCtx& f = fs[rng.below(fs.size())];
      GraphInfo info = graph_analyze(g);
      Tensor a = random_graph_tensor(rng, f, n, g);
      bool ok = true;
      for (const Orientation& alpha : orientations(info.v2)) {
        for (const Orientation& gamma : orientations(info.v1)) {
          auto [iset, jset] = index_sets(g, info, alpha, gamma);
          u64 cap = checked_pow(n, static_cast<u32>(std::min(iset.size(), jset.size())));
          if (relrk(a, g, alpha, gamma).num > cap) {
            ok = false;
            if (rep.witness.empty())
              rep.witness = "trial " + std::to_string(t) + " on " + graph_str(g);
          }
        }
      }
      if (!ok) ++rep.failures;
    }
    out.push_back(std::move(rep));
  }

  {  // observational: bounds driven by the endpoint imbalance |#I - #J| on D1
    Rng rng = root.fork();
    LemmaReport rep{"deficit-endpoint-imbalance", 0, 0, ""};
    u64 flattenings = 0, literal_exceeded = 0, half_exceeded = 0;
    const std::vector<PathGraph> gs = {PathGraph({1}), PathGraph({1, 2}),
                                       PathGraph({1, 2, 4})};
    const std::vector<FieldCtx> fs = {gf2, gf3};
    for (u64 t = 0; t < trials + 1; ++t) {
      const PathGraph& g = gs[t == 0 ? 0 : t % gs.size()];
      GraphInfo info = graph_analyze(g);
      Tensor a(gf3, n, directed_edges(g));
      if (t == 0) {
        // pinned instance: the identity pairing on a single edge already
        // exceeds the literal-exponent form when both choices land in I
        for (u32 x = 0; x < n; ++x) a.fe[x * n + x] = 1;
      } else {
        a = random_graph_tensor(rng, fs[rng.below(fs.size())], n, g);
      }
      u32 e = static_cast<u32>(g.edges.size());
      for (const Orientation& alpha : orientations(info.v2)) {
        for (const Orientation& gamma : orientations(info.v1)) {
          auto [iset, jset] = index_sets(g, info, alpha, gamma);
          u64 gi = iset.size() - info.v2.size(), gj = jset.size() - info.v2.size();
          u32 imb = static_cast<u32>(gi > gj ? gi - gj : gj - gi);
          u64 r = relrk(a, g, alpha, gamma).num;
          ++flattenings;
          if (checked_mul(r, checked_pow(n, imb)) > checked_pow(n, e)) ++literal_exceeded;
          if (checked_mul(checked_mul(r, r), checked_pow(n, imb)) > checked_pow(n, 2 * e))
            ++half_exceeded;
        }
      }
      ++rep.trials;
    }
    rep.witness = "literal-exponent form exceeded on " + std::to_string(literal_exceeded) +
                  " of " + std::to_string(flattenings) +
                  " flattenings; half-exponent (= dimension) form exceeded on " +
                  std::to_string(half_exceeded);
    out.push_back(std::move(rep));
  }

  return out;
}

}  // namespace ptw
