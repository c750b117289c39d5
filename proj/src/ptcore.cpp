#include "ptw/ptcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptw {

namespace {

// msb-first digit helpers for indices in [0, n^d)
struct Digits {
  u64 n = 1;
  u32 d = 0;
  std::vector<u64> pw;  // pw[k] = n^(d-k), 1-based axis k
  Digits(u64 n_, u32 d_) : n(n_), d(d_), pw(d_ + 1, 1) {
    for (u32 k = d; k >= 1; --k) pw[k] = (k == d) ? 1 : pw[k + 1] * n;
  }
  u64 digit(u64 idx, u32 k) const { return (idx / pw[k]) % n; }
  // replace the kappa-digits of idx by the corresponding digits of other
  u64 with_digits(u64 idx, u32 kappa, u64 other) const {
    for (u32 k = 1; k <= d; ++k)
      if ((kappa >> (k - 1)) & 1u)
        idx += (digit(other, k) - digit(idx, k)) * pw[k];
    return idx;
  }
};

void check_kappa_range(u32 kappa, u32 d) {
  if (d >= 32 || (kappa >> d) != 0)
    throw std::invalid_argument("kappa contains an axis outside [d]");
}

std::size_t rank_pt(const HyperMatrix& m, u32 kappa) {
  return rank(partial_transpose(m, kappa).m);
}

}  // namespace

HyperMatrix partial_transpose(const HyperMatrix& m, u32 kappa) {
  check_kappa_range(kappa, m.d);
  Digits dg(m.n, m.d);
  std::size_t side = m.side();
  DenseMatrix r(m.m.ctx, side, side);
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j) {
      u64 si = dg.with_digits(i, kappa, j);
      u64 sj = dg.with_digits(j, kappa, i);
      if (m.m.ctx.finite())
        r.f(i, j) = m.m.f(si, sj);
      else
        r.c(i, j) = m.m.c(si, sj);
    }
  return HyperMatrix(m.n, m.d, std::move(r));
}

bool is_fully_symmetric(const HyperMatrix& m) {
  for (u32 k = 1; k <= m.d; ++k) {
    HyperMatrix t = partial_transpose(m, 1u << (k - 1));
    if (!approx_equal(t.m, m.m)) return false;
  }
  return true;
}

std::optional<u32> pt_basic_witness(const HyperMatrix& m) {
  u32 limit = (m.d >= 1) ? (1u << (m.d - 1)) : 1u;
  for (u32 kappa = 0; kappa < limit; ++kappa)
    if (rank_pt(m, kappa) == 1) return kappa;
  return std::nullopt;
}

bool is_pt_basic(const HyperMatrix& m) { return pt_basic_witness(m).has_value(); }

u32 normalize_kappa(u32 kappa, u32 d) {
  check_kappa_range(kappa, d);
  u32 full = (d >= 32) ? ~0u : ((1u << d) - 1u);
  if (d >= 1 && ((kappa >> (d - 1)) & 1u)) kappa = full & ~kappa;
  return kappa;
}

PtCertificate make_pt_certificate(const HyperMatrix& target,
                                  const std::vector<std::pair<u32, DenseMatrix>>& parts,
                                  std::string metadata) {
  PtCertificate cert;
  cert.target = target;
  cert.metadata = std::move(metadata);
  for (const auto& [kraw, mat] : parts) {
    u32 kappa = normalize_kappa(kraw, target.d);
    auto it = cert.parts.find(kappa);
    if (it == cert.parts.end())
      cert.parts.emplace(kappa, mat);
    else
      it->second = add(it->second, mat);
  }
  for (auto it = cert.parts.begin(); it != cert.parts.end();)
    it = it->second.is_zero() ? cert.parts.erase(it) : std::next(it);
  cert.value = 0;
  for (const auto& [kappa, mat] : cert.parts)
    cert.value += rank_pt(HyperMatrix(target.n, target.d, mat), kappa);
  return cert;
}

std::size_t verify_pt_certificate(const PtCertificate& cert) {
  const HyperMatrix& t = cert.target;
  u32 limit = (t.d >= 1) ? (1u << (t.d - 1)) : 1u;
  DenseMatrix sum(t.m.ctx, t.side(), t.side());
  std::size_t value = 0;
  for (const auto& [kappa, mat] : cert.parts) {
    if (kappa >= limit)
      throw std::invalid_argument("certificate part kappa not a subset of [d-1]");
    if (mat.rows != t.side() || mat.cols != t.side() || !(mat.ctx == t.m.ctx))
      throw std::invalid_argument("certificate part shape/field mismatch");
    sum = add(sum, mat);
    value += rank_pt(HyperMatrix(t.n, t.d, mat), kappa);
  }
  if (!approx_equal(sum, t.m))
    throw std::runtime_error("invalid certificate: parts do not sum to the target");
  return value;
}

// ---------------------------------------------------------------------------
// GF(2), n=2, d=2 fast path: 4x4 matrices as 16-bit masks, bit r*4+c.

namespace {

struct Gf2Tables {
  std::vector<u8> rank16;     // rank of the 4x4 GF(2) matrix x
  std::vector<u16> pt1;       // mask of x^{T{1}}
  std::vector<u8> rank16pt1;  // rank16[pt1[x]]
};

unsigned rank4_gf2(u16 x) {
  unsigned basis[4] = {0, 0, 0, 0};
  unsigned rank = 0;
  for (unsigned r = 0; r < 4; ++r) {
    unsigned v = (x >> (4 * r)) & 0xFu;
    for (unsigned b = 4; b-- > 0 && v;) {
      if (!((v >> b) & 1u)) continue;
      if (basis[b] == 0) {
        basis[b] = v;
        ++rank;
        v = 0;
      } else {
        v ^= basis[b];
      }
    }
  }
  return rank;
}

const Gf2Tables& gf2_tables() {
  static const Gf2Tables tables = [] {
    Gf2Tables t;
    t.rank16.resize(1u << 16);
    t.pt1.resize(1u << 16);
    t.rank16pt1.resize(1u << 16);
    unsigned perm[16];  // transformed bit e reads original bit perm[e]
    for (unsigned r = 0; r < 4; ++r)
      for (unsigned c = 0; c < 4; ++c) {
        unsigned i1 = r >> 1, i2 = r & 1, j1 = c >> 1, j2 = c & 1;
        perm[r * 4 + c] = (j1 * 2 + i2) * 4 + (i1 * 2 + j2);
      }
    for (u32 x = 0; x < (1u << 16); ++x) {
      t.rank16[x] = static_cast<u8>(rank4_gf2(static_cast<u16>(x)));
      u16 y = 0;
      for (unsigned e = 0; e < 16; ++e)
        if ((x >> perm[e]) & 1u) y |= static_cast<u16>(1u << e);
      t.pt1[x] = y;
    }
    for (u32 x = 0; x < (1u << 16); ++x) t.rank16pt1[x] = t.rank16[t.pt1[x]];
    return t;
  }();
  return tables;
}

u16 hm_to_u16(const HyperMatrix& m) {
  u16 x = 0;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      if (m.m.f(r, c)) x |= static_cast<u16>(1u << (r * 4 + c));
  return x;
}

// min over N_empty = a of rank(a) + rank((m ^ a)^{T1}); first minimum wins.
std::pair<std::size_t, u16> ptrank_gf2_pair(u16 m) {
  const Gf2Tables& t = gf2_tables();
  std::size_t best = 16;
  u16 besta = 0;
  for (u32 a = 0; a < (1u << 16); ++a) {
    std::size_t ra = t.rank16[a];
    if (ra >= best) continue;
    std::size_t v = ra + t.rank16pt1[m ^ static_cast<u16>(a)];
    if (v < best) {
      best = v;
      besta = static_cast<u16>(a);
      if (best == 0) break;
    }
  }
  return {best, besta};
}

// ---------------------------------------------------------------------------
// GF(3), n=2, d=2 fast path: 16 base-3 digits, row-major, little-endian
// odometer over N_empty.

unsigned rank4_mod3(const u8* v) {
  u8 a[4][4];
  for (unsigned r = 0; r < 4; ++r)
    for (unsigned c = 0; c < 4; ++c) a[r][c] = v[r * 4 + c];
  unsigned rank = 0;
  for (unsigned col = 0; col < 4 && rank < 4; ++col) {
    unsigned piv = rank;
    while (piv < 4 && a[piv][col] == 0) ++piv;
    if (piv == 4) continue;
    if (piv != rank)
      for (unsigned c = col; c < 4; ++c) std::swap(a[piv][c], a[rank][c]);
    unsigned pv = a[rank][col];  // inverse mod 3 equals the value itself
    for (unsigned r = rank + 1; r < 4; ++r) {
      unsigned f = (a[r][col] * pv) % 3;
      if (f == 0) continue;
      for (unsigned c = col; c < 4; ++c)
        a[r][c] = static_cast<u8>((a[r][c] + 3 - (f * a[rank][c]) % 3) % 3);
    }
    ++rank;
  }
  return rank;
}

unsigned rank4_mod3_perm(const u8* v, const unsigned* perm) {
  u8 w[16];
  for (unsigned e = 0; e < 16; ++e) w[e] = v[perm[e]];
  return rank4_mod3(w);
}

std::pair<std::size_t, std::vector<u8>> ptrank_gf3_pair(const u8* md) {
  unsigned perm[16];
  for (unsigned r = 0; r < 4; ++r)
    for (unsigned c = 0; c < 4; ++c) {
      unsigned i1 = r >> 1, i2 = r & 1, j1 = c >> 1, j2 = c & 1;
      perm[r * 4 + c] = (j1 * 2 + i2) * 4 + (i1 * 2 + j2);
    }
  u8 a[16] = {0};
  u8 der[16];
  for (unsigned e = 0; e < 16; ++e) der[e] = md[e];
  std::size_t best = 16;
  std::vector<u8> besta(16, 0);
  u64 count = 1;
  for (int k = 0; k < 16; ++k) count *= 3;
  for (u64 x = 0;; ++x) {
    std::size_t ra = rank4_mod3(a);
    if (ra < best) {
      std::size_t v = ra + rank4_mod3_perm(der, perm);
      if (v < best) {
        best = v;
        besta.assign(a, a + 16);
        if (best == 0) break;
      }
    }
    if (x + 1 == count) break;
    unsigned e = 0;
    while (a[e] == 2) {
      a[e] = 0;
      der[e] = md[e];
      ++e;
    }
    ++a[e];
    der[e] = static_cast<u8>((der[e] + 2) % 3);
  }
  return {best, besta};
}

}  // namespace

// ---------------------------------------------------------------------------
// Exhaustive oracle.

namespace detail {

// Generic odometer over all free parts (every kappa subset of [d-1] except
// the largest, whose part is determined by the sum constraint).
std::pair<std::size_t, PtCertificate> pt_rank_exact_generic(const HyperMatrix& m,
                                                            u64 budget,
                                                            unsigned threads) {
  const FieldCtx& ctx = m.m.ctx;
  u64 q = ctx.mod();
  u32 d = m.d;
  std::size_t side = m.side();
  std::size_t entries = side * side;
  u32 nparts = 1u << (d - 1);
  u64 free_digits = static_cast<u64>(nparts - 1) * entries;

  // candidate count q^free_digits, guarded against overflow
  u64 count = 1;
  for (u64 t = 0; t < free_digits; ++t) {
    if (count > budget / q + 1) throw std::runtime_error("pt_rank_exact budget exceeded");
    count *= q;
  }
  if (count > budget) throw std::runtime_error("pt_rank_exact budget exceeded");

  struct ShardResult {
    std::size_t value = ~std::size_t{0};
    std::vector<u32> digits;
  };
  unsigned nshards = threads ? threads : 1;
  if (static_cast<u64>(nshards) > count) nshards = static_cast<unsigned>(count);
  std::vector<ShardResult> results(nshards);

  auto body = [&](unsigned shard, u64 lo, u64 hi) {
    std::vector<u32> dig(free_digits, 0);
    u64 rest = lo;
    for (u64 t = 0; t < free_digits && rest; ++t) {
      dig[t] = static_cast<u32>(rest % q);
      rest /= q;
    }
    std::vector<DenseMatrix> parts(nparts, DenseMatrix(ctx, side, side));
    parts[nparts - 1] = m.m;
    for (u64 t = 0; t < free_digits; ++t)
      if (dig[t]) {
        u32 p = static_cast<u32>(t / entries);
        std::size_t e = static_cast<std::size_t>(t % entries);
        parts[p].fe[e] = dig[t];
        parts[nparts - 1].fe[e] = fsub(ctx, parts[nparts - 1].fe[e], dig[t]);
      }
    std::vector<std::size_t> rk(nparts);
    for (u32 p = 0; p < nparts; ++p)
      rk[p] = rank_pt(HyperMatrix(m.n, m.d, parts[p]), p);
    ShardResult& out = results[shard];
    for (u64 x = lo;; ++x) {
      std::size_t value = 0;
      for (u32 p = 0; p < nparts; ++p) value += rk[p];
      if (value < out.value) {
        out.value = value;
        out.digits = dig;
      }
      if (x + 1 == hi) break;
      // advance the odometer, tracking which parts changed
      u64 t = 0;
      bool low_dirty = false;
      for (;;) {
        u32 p = static_cast<u32>(t / entries);
        std::size_t e = static_cast<std::size_t>(t % entries);
        u64 old = dig[t];
        u64 nv = (old + 1 == q) ? 0 : old + 1;
        dig[t] = static_cast<u32>(nv);
        parts[p].fe[e] = nv;
        parts[nparts - 1].fe[e] =
            fsub(ctx, parts[nparts - 1].fe[e], fsub(ctx, nv, old));
        if (p == 0)
          low_dirty = true;
        else
          rk[p] = rank_pt(HyperMatrix(m.n, m.d, parts[p]), p);
        if (nv != 0) break;
        ++t;
      }
      if (low_dirty) rk[0] = rank_pt(HyperMatrix(m.n, m.d, parts[0]), 0);
      rk[nparts - 1] = rank_pt(HyperMatrix(m.n, m.d, parts[nparts - 1]), nparts - 1);
    }
  };
  parallel_shards(count, nshards, body);

  std::size_t best_shard = 0;
  for (std::size_t s = 1; s < results.size(); ++s)
    if (results[s].value < results[best_shard].value) best_shard = s;
  const ShardResult& win = results[best_shard];

  std::vector<std::pair<u32, DenseMatrix>> parts;
  DenseMatrix last = m.m;
  for (u32 p = 0; p + 1 < nparts; ++p) {
    DenseMatrix np(ctx, side, side);
    for (std::size_t e = 0; e < entries; ++e)
      np.fe[e] = win.digits[static_cast<std::size_t>(p) * entries + e];
    last = sub(last, np);
    parts.emplace_back(p, std::move(np));
  }
  parts.emplace_back(nparts - 1, std::move(last));
  PtCertificate cert = make_pt_certificate(m, parts, "exhaustive enumeration");
  return {win.value, cert};
}

}  // namespace detail

std::pair<std::size_t, PtCertificate> pt_rank_exact(const HyperMatrix& m, u64 budget,
                                                    unsigned threads) {
  if (!m.m.ctx.finite())
    throw std::invalid_argument("pt_rank_exact requires a finite field");
  if (m.d == 0) throw std::invalid_argument("pt_rank_exact requires d >= 1");
  u64 q = m.m.ctx.mod();
  if (m.n == 2 && m.d == 2 && q == 2 && budget >= (u64{1} << 16)) {
    auto [value, a] = ptrank_gf2_pair(hm_to_u16(m));
    DenseMatrix n0(m.m.ctx, 4, 4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) n0.f(r, c) = (a >> (r * 4 + c)) & 1u;
    PtCertificate cert = make_pt_certificate(
        m, {{0u, n0}, {1u, sub(m.m, n0)}}, "exhaustive enumeration");
    return {value, cert};
  }
  if (m.n == 2 && m.d == 2 && q == 3 && budget >= 43046721) {
    u8 md[16];
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) md[r * 4 + c] = static_cast<u8>(m.m.f(r, c));
    auto [value, a] = ptrank_gf3_pair(md);
    DenseMatrix n0(m.m.ctx, 4, 4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) n0.f(r, c) = a[r * 4 + c];
    PtCertificate cert = make_pt_certificate(
        m, {{0u, n0}, {1u, sub(m.m, n0)}}, "exhaustive enumeration");
    return {value, cert};
  }
  return detail::pt_rank_exact_generic(m, budget, threads);
}

// ---------------------------------------------------------------------------
// Heuristic search.

namespace {

PtCertificate search_single_kappa(const HyperMatrix& m) {
  u32 limit = (m.d >= 1) ? (1u << (m.d - 1)) : 1u;
  u32 best_kappa = 0;
  std::size_t best = ~std::size_t{0};
  for (u32 kappa = 0; kappa < limit; ++kappa) {
    std::size_t r = rank_pt(m, kappa);
    if (r < best) {
      best = r;
      best_kappa = kappa;
    }
  }
  return make_pt_certificate(m, {{best_kappa, m.m}}, "single-kappa");
}

PtCertificate search_greedy_peel(const HyperMatrix& m) {
  const FieldCtx& ctx = m.m.ctx;
  u32 limit = (m.d >= 1) ? (1u << (m.d - 1)) : 1u;
  std::vector<std::pair<u32, DenseMatrix>> parts;
  DenseMatrix residual = m.m;
  while (!residual.is_zero()) {
    u32 best_kappa = 0;
    std::size_t best = ~std::size_t{0};
    for (u32 kappa = 0; kappa < limit; ++kappa) {
      std::size_t r = rank_pt(HyperMatrix(m.n, m.d, residual), kappa);
      if (r < best) {
        best = r;
        best_kappa = kappa;
      }
    }
    DenseMatrix t = partial_transpose(HyperMatrix(m.n, m.d, residual), best_kappa).m;
    // pick a pivot of the transformed picture
    std::size_t pr = 0, pc = 0;
    if (ctx.finite()) {
      bool found = false;
      for (std::size_t r = 0; r < t.rows && !found; ++r)
        for (std::size_t c = 0; c < t.cols && !found; ++c)
          if (t.f(r, c)) {
            pr = r;
            pc = c;
            found = true;
          }
    } else {
      double mx = -1.0;
      for (std::size_t r = 0; r < t.rows; ++r)
        for (std::size_t c = 0; c < t.cols; ++c)
          if (std::abs(t.c(r, c)) > mx) {
            mx = std::abs(t.c(r, c));
            pr = r;
            pc = c;
          }
    }
    // rank-one Wedderburn term w = t[:,pc] t[pr,:] / t[pr,pc]
    DenseMatrix w(ctx, t.rows, t.cols);
    if (ctx.finite()) {
      u64 inv = finv(ctx, t.f(pr, pc));
      for (std::size_t r = 0; r < t.rows; ++r) {
        u64 col = t.f(r, pc);
        for (std::size_t c = 0; c < t.cols; ++c)
          w.f(r, c) = fmul(ctx, fmul(ctx, col, t.f(pr, c)), inv);
      }
    } else {
      cplx inv = 1.0 / t.c(pr, pc);
      for (std::size_t r = 0; r < t.rows; ++r)
        for (std::size_t c = 0; c < t.cols; ++c)
          w.c(r, c) = t.c(r, pc) * t.c(pr, c) * inv;
    }
    DenseMatrix n = partial_transpose(HyperMatrix(m.n, m.d, w), best_kappa).m;
    parts.emplace_back(best_kappa, n);
    residual = sub(residual, n);
  }
  return make_pt_certificate(m, parts, "greedy-peel");
}

PtCertificate search_restart_local(const HyperMatrix& m, u64 seed) {
  const FieldCtx& ctx = m.m.ctx;
  if (!ctx.finite()) return search_single_kappa(m);  // local moves need exact zeros
  u64 q = ctx.mod();
  u32 limit = (m.d >= 1) ? (1u << (m.d - 1)) : 1u;
  std::size_t side = m.side();
  std::size_t entries = side * side;

  PtCertificate best = search_single_kappa(m);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);

  const unsigned restarts = 4;
  const unsigned moves = 4000;
  for (unsigned rs = 0; rs < restarts; ++rs) {
    std::vector<DenseMatrix> parts(limit, DenseMatrix(ctx, side, side));
    parts[rng.below(limit)] = m.m;
    auto total_value = [&] {
      std::size_t v = 0;
      for (u32 k = 0; k < limit; ++k)
        if (!parts[k].is_zero()) v += rank_pt(HyperMatrix(m.n, m.d, parts[k]), k);
      return v;
    };
    std::size_t cur = total_value();
    for (unsigned mv = 0; mv < moves; ++mv) {
      if (limit < 2) break;
      std::size_t e = static_cast<std::size_t>(rng.below(entries));
      u32 a = static_cast<u32>(rng.below(limit));
      u32 b = static_cast<u32>(rng.below(limit - 1));
      if (b >= a) ++b;
      u64 c = 1 + rng.below(q - 1);
      parts[a].fe[e] = fadd(ctx, parts[a].fe[e], c);
      parts[b].fe[e] = fsub(ctx, parts[b].fe[e], c);
      std::size_t nv = total_value();
      // anneal: always keep improvements/plateaus, sometimes keep uphill
      double temp = 1.0 - static_cast<double>(mv) / moves;
      bool keep = nv <= cur;
      if (!keep && temp > 0.05) {
        double p = std::exp(-static_cast<double>(nv - cur) / temp);
        keep = (static_cast<double>(rng.next() >> 11) * 0x1.0p-53) < p;
      }
      if (keep) {
        cur = nv;
        if (nv < best.value) {
          std::vector<std::pair<u32, DenseMatrix>> plist;
          for (u32 k = 0; k < limit; ++k)
            if (!parts[k].is_zero()) plist.emplace_back(k, parts[k]);
          PtCertificate cand = make_pt_certificate(m, plist, "restart-local");
          if (cand.value < best.value) best = cand;
        }
      } else {
        parts[a].fe[e] = fsub(ctx, parts[a].fe[e], c);
        parts[b].fe[e] = fadd(ctx, parts[b].fe[e], c);
      }
    }
  }
  best.metadata = "restart-local";
  return best;
}

}  // namespace

PtCertificate pt_rank_search(const HyperMatrix& m, const std::string& strategy, u64 seed) {
  if (strategy == "single-kappa") return search_single_kappa(m);
  if (strategy == "greedy-peel") return search_greedy_peel(m);
  if (strategy == "restart-local") return search_restart_local(m, seed);
  throw std::invalid_argument("unknown search strategy: " + strategy);
}

// ---------------------------------------------------------------------------
// Kronecker action, regrouping, rank growth.

std::pair<HyperMatrix, std::optional<PtCertificate>> kron_act(
    const HyperMatrix& m, const std::vector<DenseMatrix>& blocks,
    const std::optional<PtCertificate>& cert) {
  if (blocks.size() != m.d)
    throw std::invalid_argument("kron_act needs exactly d block matrices");
  for (const DenseMatrix& b : blocks)
    if (b.rows != m.n || b.cols != m.n || !(b.ctx == m.m.ctx))
      throw std::invalid_argument("kron_act block shape/field mismatch");
  DenseMatrix p = blocks[0];
  for (std::size_t k = 1; k < blocks.size(); ++k) p = kron(p, blocks[k]);
  HyperMatrix pm(m.n, m.d, mul(p, m.m));
  if (!cert) return {pm, std::nullopt};
  std::vector<std::pair<u32, DenseMatrix>> parts;
  for (const auto& [kappa, mat] : cert->parts) parts.emplace_back(kappa, mul(p, mat));
  return {pm, make_pt_certificate(pm, parts, "kron-act(" + cert->metadata + ")")};
}

HyperMatrix regroup_view(const HyperMatrix& m, u32 p, u32 q) {
  if (p == 0 || q == 0 || p * q != m.d)
    throw std::invalid_argument("regroup_view requires p*q = d");
  u64 np = 1;
  for (u32 k = 0; k < p; ++k) np *= m.n;
  return HyperMatrix(static_cast<u32>(np), q, m.m);
}

PtCertificate regroup_cert(const PtCertificate& coarse, u32 p, u32 n) {
  u64 np = 1;
  for (u32 k = 0; k < p; ++k) np *= n;
  if (coarse.target.n != np)
    throw std::invalid_argument("regroup_cert: coarse alphabet is not n^p");
  u32 q = coarse.target.d;
  HyperMatrix fine_target(n, p * q, coarse.target.m);
  std::vector<std::pair<u32, DenseMatrix>> parts;
  for (const auto& [kc, mat] : coarse.parts) {
    u32 kf = 0;
    for (u32 t = 0; t < q; ++t)
      if ((kc >> t) & 1u)
        for (u32 r = 0; r < p; ++r) kf |= 1u << (t * p + r);
    parts.emplace_back(kf, mat);
  }
  return make_pt_certificate(fine_target, parts, "regrouped(" + coarse.metadata + ")");
}

OuterFactorization transpose_rank_growth(const HyperMatrix& m, u32 kappa,
                                         const OuterFactorization& fac) {
  check_kappa_range(kappa, m.d);
  const FieldCtx& ctx = m.m.ctx;
  std::size_t side = m.side();
  if (fac.u.rows != side || fac.v.cols != side || fac.u.cols != fac.v.rows ||
      !(fac.u.ctx == ctx) || !(fac.v.ctx == ctx))
    throw std::invalid_argument("transpose_rank_growth: factor shape mismatch");
  if (!approx_equal(mul(fac.u, fac.v), m.m))
    throw std::invalid_argument("factorization does not reproduce the matrix");

  u32 d = m.d;
  u32 full = (1u << d) - 1u;
  u32 s = static_cast<u32>(__builtin_popcount(kappa));
  bool complemented = s > d - s;
  u32 khat = complemented ? (full & ~kappa) : kappa;
  u32 shat = complemented ? d - s : s;

  if (khat == 0) {
    // T khat is the identity; the complemented route then just transposes
    if (!complemented) return fac;
    return {transpose(fac.v), transpose(fac.u)};
  }

  Digits dg(m.n, d);
  u64 nhat = 1;
  for (u32 k = 0; k < shat; ++k) nhat *= m.n;
  std::size_t r = fac.u.cols;

  // indices in [0, side) whose khat-digits take each value in [0, nhat)
  // value <-> digits: enumerate by scattering a counter over khat's axes
  std::vector<u64> masks(nhat, 0);  // masks[v] = index with khat digits = v, rest 0
  {
    std::vector<u32> axes;
    for (u32 k = 1; k <= d; ++k)
      if ((khat >> (k - 1)) & 1u) axes.push_back(k);
    for (u64 v = 0; v < nhat; ++v) {
      u64 idx = 0, rest = v;
      for (u32 t = static_cast<u32>(axes.size()); t-- > 0;) {
        idx += (rest % m.n) * dg.pw[axes[t]];
        rest /= m.n;
      }
      masks[v] = idx;
    }
  }

  std::vector<std::pair<std::vector<u64>, std::vector<u64>>> fterms;   // finite
  std::vector<std::pair<std::vector<cplx>, std::vector<cplx>>> cterms;  // complex
  for (std::size_t t = 0; t < r; ++t) {
    for (u64 a = 0; a < nhat; ++a) {
      for (u64 b = 0; b < nhat; ++b) {
        // x[i] = U(i with khat := b, t) on {i : i_khat = a}; y[j] = V(t, j with
        // khat := a) on {j : j_khat = b}
        if (ctx.finite()) {
          std::vector<u64> x(side, 0), y(side, 0);
          bool xz = true, yz = true;
          for (std::size_t i = 0; i < side; ++i) {
            if (dg.with_digits(i, khat, masks[a]) != static_cast<u64>(i)) continue;
            u64 val = fac.u.f(dg.with_digits(i, khat, masks[b]), t);
            if (val) xz = false;
            x[i] = val;
          }
          for (std::size_t j = 0; j < side; ++j) {
            if (dg.with_digits(j, khat, masks[b]) != static_cast<u64>(j)) continue;
            u64 val = fac.v.f(t, dg.with_digits(j, khat, masks[a]));
            if (val) yz = false;
            y[j] = val;
          }
          if (!xz && !yz) fterms.emplace_back(std::move(x), std::move(y));
        } else {
          std::vector<cplx> x(side, cplx{0, 0}), y(side, cplx{0, 0});
          bool xz = true, yz = true;
          for (std::size_t i = 0; i < side; ++i) {
            if (dg.with_digits(i, khat, masks[a]) != static_cast<u64>(i)) continue;
            cplx val = fac.u.c(dg.with_digits(i, khat, masks[b]), t);
            if (std::abs(val) > 0) xz = false;
            x[i] = val;
          }
          for (std::size_t j = 0; j < side; ++j) {
            if (dg.with_digits(j, khat, masks[b]) != static_cast<u64>(j)) continue;
            cplx val = fac.v.c(t, dg.with_digits(j, khat, masks[a]));
            if (std::abs(val) > 0) yz = false;
            y[j] = val;
          }
          if (!xz && !yz) cterms.emplace_back(std::move(x), std::move(y));
        }
      }
    }
  }

  std::size_t terms = ctx.finite() ? fterms.size() : cterms.size();
  OuterFactorization out{DenseMatrix(ctx, side, terms), DenseMatrix(ctx, terms, side)};
  for (std::size_t t = 0; t < terms; ++t)
    for (std::size_t i = 0; i < side; ++i) {
      if (ctx.finite()) {
        out.u.f(i, t) = fterms[t].first[i];
        out.v.f(t, i) = fterms[t].second[i];
      } else {
        out.u.c(i, t) = cterms[t].first[i];
        out.v.c(t, i) = cterms[t].second[i];
      }
    }
  if (complemented) return {transpose(out.v), transpose(out.u)};
  return out;
}

// ---------------------------------------------------------------------------
// Census.

std::size_t symmetry_orbit_count(u32 n, u32 d) {
  std::size_t side = checked_tensor_size(n, d);
  std::size_t entries = side * side;
  std::vector<std::size_t> parent(entries);
  for (std::size_t e = 0; e < entries; ++e) parent[e] = e;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  Digits dg(n, d);
  for (u32 k = 1; k <= d; ++k) {
    u32 kappa = 1u << (k - 1);
    for (std::size_t i = 0; i < side; ++i)
      for (std::size_t j = 0; j < side; ++j) {
        std::size_t e = i * side + j;
        std::size_t e2 = dg.with_digits(i, kappa, j) * side + dg.with_digits(j, kappa, i);
        std::size_t a = find(e), b = find(e2);
        if (a != b) parent[a] = b;
      }
  }
  std::size_t orbits = 0;
  for (std::size_t e = 0; e < entries; ++e)
    if (find(e) == e) ++orbits;
  return orbits;
}

namespace {

// orbit representatives and the full orbit lists
std::vector<std::vector<std::size_t>> symmetry_orbits(u32 n, u32 d) {
  std::size_t side = checked_tensor_size(n, d);
  std::size_t entries = side * side;
  std::vector<std::size_t> parent(entries);
  for (std::size_t e = 0; e < entries; ++e) parent[e] = e;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  Digits dg(n, d);
  for (u32 k = 1; k <= d; ++k) {
    u32 kappa = 1u << (k - 1);
    for (std::size_t i = 0; i < side; ++i)
      for (std::size_t j = 0; j < side; ++j) {
        std::size_t e = i * side + j;
        std::size_t e2 = dg.with_digits(i, kappa, j) * side + dg.with_digits(j, kappa, i);
        std::size_t a = find(e), b = find(e2);
        if (a != b) parent[a] = b;
      }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t e = 0; e < entries; ++e) groups[find(e)].push_back(e);
  std::vector<std::vector<std::size_t>> orbits;
  for (auto& [root, members] : groups) orbits.push_back(std::move(members));
  return orbits;
}

std::size_t census_value(const HyperMatrix& m, u64 budget) {
  return pt_rank_exact(m, budget).first;
}

}  // namespace

HyperMatrix swap_matrix(const FieldCtx& ctx, u32 n) {
  std::size_t side = static_cast<std::size_t>(n) * n;
  DenseMatrix m(ctx, side, side);
  for (u64 i1 = 0; i1 < n; ++i1)
    for (u64 i2 = 0; i2 < n; ++i2) m.set_int(i1 * n + i2, i2 * n + i1, 1);
  return HyperMatrix(n, 2, std::move(m));
}

PtCertificate identity4_certificate(const FieldCtx& ctx) {
  DenseMatrix p(ctx, 4, 4), q(ctx, 4, 4);
  p.set_int(0, 0, 1);
  p.set_int(0, 3, -1);
  p.set_int(3, 0, -1);
  p.set_int(3, 3, 1);
  for (std::size_t r : {1, 2})
    for (std::size_t c : {1, 2}) q.set_int(r, c, 1);
  HyperMatrix id = HyperMatrix::identity(ctx, 2, 2);
  HyperMatrix qt = partial_transpose(HyperMatrix(2, 2, q), 1u);
  return make_pt_certificate(id, {{0u, p}, {1u, qt.m}}, "two-part identity split");
}

CensusResult ptrank_census(u32 n, u32 d, const FieldCtx& ctx, const CensusMode& mode,
                           bool fully_symmetric_only, u64 budget, unsigned threads) {
  if (!ctx.finite()) throw std::invalid_argument("census requires a finite field");
  u64 q = ctx.mod();
  std::size_t side = checked_tensor_size(n, d);
  std::size_t entries = side * side;
  CensusResult out;

  auto matrix_from_entries = [&](const std::vector<u64>& vals) {
    DenseMatrix mm(ctx, side, side);
    mm.fe = vals;
    return HyperMatrix(n, d, mm);
  };

  if (!mode.exhaustive) {
    Rng rng(mode.seed);
    std::vector<std::vector<std::size_t>> orbits;
    if (fully_symmetric_only) orbits = symmetry_orbits(n, d);
    for (u64 s = 0; s < mode.sample_count; ++s) {
      std::vector<u64> vals(entries, 0);
      if (fully_symmetric_only) {
        for (const auto& orbit : orbits) {
          u64 v = rng.below(q);
          for (std::size_t e : orbit) vals[e] = v;
        }
      } else {
        for (std::size_t e = 0; e < entries; ++e) vals[e] = rng.below(q);
      }
      ++out.histogram[census_value(matrix_from_entries(vals), budget)];
    }
    out.population = mode.sample_count;
    return out;
  }

  // exhaustive
  if (fully_symmetric_only) {
    std::vector<std::vector<std::size_t>> orbits = symmetry_orbits(n, d);
    u64 population = 1;
    for (std::size_t k = 0; k < orbits.size(); ++k) {
      if (population > (u64{1} << 20) / q)
        throw std::runtime_error("census population exceeds the exhaustive guard");
      population *= q;
    }
    std::vector<u64> dig(orbits.size(), 0);
    std::vector<u64> vals(entries, 0);
    for (u64 x = 0;; ++x) {
      ++out.histogram[census_value(matrix_from_entries(vals), budget)];
      if (x + 1 == population) break;
      std::size_t t = 0;
      while (dig[t] + 1 == q) {
        dig[t] = 0;
        for (std::size_t e : orbits[t]) vals[e] = 0;
        ++t;
      }
      ++dig[t];
      for (std::size_t e : orbits[t]) vals[e] = dig[t];
    }
    out.population = population;
    return out;
  }

  // full population; fast table sweep for GF(2), n=2, d=2
  if (q == 2 && n == 2 && d == 2) {
    const Gf2Tables& tb = gf2_tables();
    for (u32 m16 = 0; m16 < (1u << 16); ++m16) {
      std::size_t best = 16;
      for (u32 a = 0; a < (1u << 16); ++a) {
        std::size_t ra = tb.rank16[a];
        if (ra >= best) continue;
        std::size_t v = ra + tb.rank16pt1[m16 ^ a];
        if (v < best) {
          best = v;
          if (best == 0) break;
        }
      }
      ++out.histogram[best];
    }
    out.population = u64{1} << 16;
    return out;
  }

  u64 population = 1;
  for (std::size_t e = 0; e < entries; ++e) {
    if (population > (u64{1} << 20) / q)
      throw std::runtime_error("census population exceeds the exhaustive guard");
    population *= q;
  }
  std::vector<u64> vals(entries, 0);
  for (u64 x = 0;; ++x) {
    ++out.histogram[census_value(matrix_from_entries(vals), budget)];
    if (x + 1 == population) break;
    std::size_t t = 0;
    while (vals[t] + 1 == q) vals[t++] = 0;
    ++vals[t];
  }
  out.population = population;
  (void)threads;
  return out;
}

}  // namespace ptw
