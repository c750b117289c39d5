#include "ptw/sos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptw {

namespace {

// The squares of these n bilinear forms sum to (sum x_i^2)(sum y_j^2); they
// are the coefficient tables of multiplication in the unit composition
// algebras (real, complex, quaternion, octonion), entries {i, j, sign} with
// term_l = sum sign * x_i * y_j.  Integer identities, so they hold in every
// field; verify_sos re-checks them at load time in the active field.
constexpr int kHurwitz1[1][1][3] = {
    {{0, 0, 1}},
};
constexpr int kHurwitz2[2][2][3] = {
    {{0, 0, 1}, {1, 1, -1}},
    {{0, 1, 1}, {1, 0, 1}},
};
constexpr int kHurwitz4[4][4][3] = {
    {{0, 0, 1}, {1, 1, -1}, {2, 2, -1}, {3, 3, -1}},
    {{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, -1}},
    {{0, 2, 1}, {1, 3, -1}, {2, 0, 1}, {3, 1, 1}},
    {{0, 3, 1}, {1, 2, 1}, {2, 1, -1}, {3, 0, 1}},
};
constexpr int kHurwitz8[8][8][3] = {
    {{0, 0, 1}, {1, 1, -1}, {2, 2, -1}, {3, 3, -1},
     {4, 4, -1}, {5, 5, -1}, {6, 6, -1}, {7, 7, -1}},
    {{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, -1},
     {4, 5, 1}, {5, 4, -1}, {6, 7, -1}, {7, 6, 1}},
    {{0, 2, 1}, {1, 3, -1}, {2, 0, 1}, {3, 1, 1},
     {4, 6, 1}, {5, 7, 1}, {6, 4, -1}, {7, 5, -1}},
    {{0, 3, 1}, {1, 2, 1}, {2, 1, -1}, {3, 0, 1},
     {4, 7, 1}, {5, 6, -1}, {6, 5, 1}, {7, 4, -1}},
    {{0, 4, 1}, {1, 5, -1}, {2, 6, -1}, {3, 7, -1},
     {4, 0, 1}, {5, 1, 1}, {6, 2, 1}, {7, 3, 1}},
    {{0, 5, 1}, {1, 4, 1}, {2, 7, -1}, {3, 6, 1},
     {4, 1, -1}, {5, 0, 1}, {6, 3, -1}, {7, 2, 1}},
    {{0, 6, 1}, {1, 7, 1}, {2, 4, 1}, {3, 5, -1},
     {4, 2, -1}, {5, 3, 1}, {6, 0, 1}, {7, 1, -1}},
    {{0, 7, 1}, {1, 6, -1}, {2, 5, 1}, {3, 4, 1},
     {4, 3, -1}, {5, 2, -1}, {6, 1, 1}, {7, 0, 1}},
};

void require_odd_characteristic(const FieldCtx& ctx, const char* who) {
  if (ctx.char_two())
    throw std::invalid_argument(std::string(who) +
                                ": characteristic 2 not supported");
}

void check_term_shapes(const SoSCertificate& cert) {
  std::size_t side = checked_tensor_size(cert.n, cert.d);
  for (const DenseMatrix& t : cert.terms)
    if (t.rows != 1 || t.cols != side || !(t.ctx == cert.ctx))
      throw std::invalid_argument("sos certificate: malformed term");
}

// Gram matrix sum_l vec(g_l) vec(g_l)^T of the certificate's terms.
DenseMatrix term_gram(const SoSCertificate& cert) {
  std::size_t side = checked_tensor_size(cert.n, cert.d);
  DenseMatrix d(cert.ctx, side, side);
  if (cert.ctx.finite()) {
    for (const DenseMatrix& t : cert.terms)
      for (std::size_t i = 0; i < side; ++i) {
        if (!t.fe[i]) continue;
        for (std::size_t j = 0; j < side; ++j)
          d.f(i, j) = fadd(cert.ctx, d.f(i, j), fmul(cert.ctx, t.fe[i], t.fe[j]));
      }
  } else {
    for (const DenseMatrix& t : cert.terms)
      for (std::size_t i = 0; i < side; ++i)
        for (std::size_t j = 0; j < side; ++j) d.c(i, j) += t.ce[i] * t.ce[j];
  }
  return d;
}

// sum over all kappa subsets of [d] of M^{T kappa}.
DenseMatrix symmetrization(const HyperMatrix& m) {
  DenseMatrix acc(m.m.ctx, m.side(), m.side());
  for (u32 kappa = 0; kappa < (u32{1} << m.d); ++kappa)
    acc = add(acc, partial_transpose(m, kappa).m);
  return acc;
}

// Multiply every entry by the inverse of 2^e (characteristic != 2).
DenseMatrix halve_pow(const DenseMatrix& m, u32 e) {
  DenseMatrix out = m;
  if (m.ctx.finite()) {
    u64 inv = finv(m.ctx, pow_mod(2, e, m.ctx.mod()));
    for (u64& v : out.fe) v = fmul(m.ctx, v, inv);
  } else {
    double s = std::ldexp(1.0, -static_cast<int>(e));
    for (cplx& v : out.ce) v *= s;
  }
  return out;
}

SoSCertificate terms_from_rows(const FieldCtx& ctx, u32 n, u32 d,
                               const DenseMatrix& l, std::string metadata) {
  SoSCertificate cert{n, d, ctx, {}, std::move(metadata)};
  for (std::size_t r = 0; r < l.rows; ++r) {
    DenseMatrix t(ctx, 1, l.cols);
    for (std::size_t c = 0; c < l.cols; ++c) {
      if (ctx.finite())
        t.f(0, c) = l.f(r, c);
      else
        t.c(0, c) = l.c(r, c);
    }
    cert.terms.push_back(std::move(t));
  }
  return cert;
}

const int (*hurwitz_table(u32 n))[3] {
  switch (n) {
    case 1: return &kHurwitz1[0][0];
    case 2: return &kHurwitz2[0][0];
    case 4: return &kHurwitz4[0][0];
    case 8: return &kHurwitz8[0][0];
    default:
      throw std::invalid_argument(
          "base_identity: composition identities exist only for n in {1,2,4,8}");
  }
}

}  // namespace

bool QuadCoeffMap::operator==(const QuadCoeffMap& o) const {
  if (n != o.n || d != o.d || !(ctx == o.ctx)) return false;
  if (ctx.finite()) return fe == o.fe;
  double scale = 0;
  for (const auto& [k, v] : ce) scale = std::max(scale, std::abs(v));
  for (const auto& [k, v] : o.ce) scale = std::max(scale, std::abs(v));
  auto it = ce.begin();
  auto jt = o.ce.begin();
  const double tol = ctx.eps * std::max(scale, 1e-300);
  while (it != ce.end() || jt != o.ce.end()) {
    if (jt == o.ce.end() || (it != ce.end() && it->first < jt->first)) {
      if (std::abs(it->second) > tol) return false;
      ++it;
    } else if (it == ce.end() || jt->first < it->first) {
      if (std::abs(jt->second) > tol) return false;
      ++jt;
    } else {
      if (std::abs(it->second - jt->second) > tol) return false;
      ++it, ++jt;
    }
  }
  return true;
}

QuadCoeffMap qm_coeffs(const HyperMatrix& m) {
  const std::size_t side = m.side();
  const FieldCtx& ctx = m.m.ctx;
  QuadCoeffMap q{m.n, m.d, ctx, {}, {}};
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j) {
      if (ctx.finite() ? m.m.f(i, j) == 0 : std::abs(m.m.c(i, j)) == 0) continue;
      u64 key = 0;
      std::size_t ii = i, jj = j;
      // Digits are msb-first, so peel from the least significant end and
      // shift into the key from the top.
      u64 place = 1;
      u64 packed = 0;
      for (u32 k = 0; k < m.d; ++k) {
        u64 a = ii % m.n, b = jj % m.n;
        ii /= m.n, jj /= m.n;
        if (a > b) std::swap(a, b);
        packed += (a * m.n + b) * place;
        place *= u64{m.n} * m.n;
      }
      key = packed;
      if (ctx.finite()) {
        u64& slot = q.fe[key];
        slot = fadd(ctx, slot, m.m.f(i, j));
      } else {
        q.ce[key] += m.m.c(i, j);
      }
    }
  if (ctx.finite()) {
    std::erase_if(q.fe, [](const auto& kv) { return kv.second == 0; });
  } else {
    double scale = 0;
    for (const auto& [k, v] : q.ce) scale = std::max(scale, std::abs(v));
    const double tol = ctx.eps * std::max(scale, 1e-300);
    std::erase_if(q.ce, [&](const auto& kv) { return std::abs(kv.second) <= tol; });
  }
  return q;
}

bool verify_sos(const HyperMatrix& m, const SoSCertificate& cert) {
  if (cert.n != m.n || cert.d != m.d || !(cert.ctx == m.m.ctx))
    throw std::invalid_argument("verify_sos: certificate/target shape mismatch");
  require_odd_characteristic(m.m.ctx, "verify_sos");
  check_term_shapes(cert);
  DenseMatrix gram = term_gram(cert);
  return approx_equal(symmetrization(HyperMatrix(m.n, m.d, std::move(gram))),
                      symmetrization(m));
}

SoSCertificate pt_to_sos(const PtCertificate& cert) {
  const FieldCtx& ctx = cert.target.m.ctx;
  require_odd_characteristic(ctx, "pt_to_sos");
  std::size_t value = verify_pt_certificate(cert);
  const std::size_t side = cert.target.side();
  // D = sum_kappa N_kappa^{T kappa}: each part contributes its transposed
  // form, so the symmetrization of D re-indexes into that of the target.
  DenseMatrix d(ctx, side, side);
  for (const auto& [kappa, part] : cert.parts)
    d = add(d, partial_transpose(HyperMatrix(cert.target.n, cert.target.d, part),
                                 kappa)
                   .m);
  DenseMatrix ds = halve_pow(add(d, transpose(d)), 1);
  DenseMatrix l = gram_factor(ds);
  SoSCertificate out = terms_from_rows(
      ctx, cert.target.n, cert.target.d, l,
      "pt-to-sos: " + std::to_string(l.rows) + " terms from value " +
          std::to_string(value) + " (symmetrized gram, terms <= 4*value)");
  if (!verify_sos(cert.target, out))
    throw std::logic_error("pt_to_sos: converted certificate failed to verify");
  return out;
}

PtCertificate sos_to_pt(const HyperMatrix& m, const SoSCertificate& cert) {
  const FieldCtx& ctx = m.m.ctx;
  require_odd_characteristic(ctx, "sos_to_pt");
  if (!is_fully_symmetric(m))
    throw std::invalid_argument("sos_to_pt: target must be fully symmetric");
  if (!verify_sos(m, cert))
    throw std::invalid_argument("sos_to_pt: certificate does not verify");
  DenseMatrix gram = halve_pow(term_gram(cert), m.d == 0 ? 0 : m.d - 1);
  HyperMatrix hgram(m.n, m.d, std::move(gram));
  std::vector<std::pair<u32, DenseMatrix>> parts;
  for (u32 kappa = 0; kappa < (m.d ? (u32{1} << (m.d - 1)) : 1); ++kappa)
    parts.emplace_back(kappa, partial_transpose(hgram, kappa).m);
  PtCertificate out = make_pt_certificate(
      m, parts,
      "sos-to-pt: 2^(d-1) transposed gram parts from " +
          std::to_string(cert.terms.size()) + " squares");
  verify_pt_certificate(out);
  return out;
}

SoSCertificate base_identity(const FieldCtx& ctx, u32 n) {
  require_odd_characteristic(ctx, "base_identity");
  const int(*table)[3] = hurwitz_table(n);
  SoSCertificate cert{n, 2, ctx, {},
                      "hurwitz composition identity, n = " + std::to_string(n)};
  for (u32 l = 0; l < n; ++l) {
    DenseMatrix t(ctx, 1, std::size_t{n} * n);
    for (u32 e = 0; e < n; ++e) {
      const int* ent = table[l * n + e];
      std::size_t idx = std::size_t{static_cast<u32>(ent[0])} * n +
                        static_cast<u32>(ent[1]);
      if (ctx.finite())
        t.f(0, idx) = freduce(ctx, ent[2]);
      else
        t.c(0, idx) = static_cast<double>(ent[2]);
    }
    cert.terms.push_back(std::move(t));
  }
  if (!verify_sos(HyperMatrix::identity(ctx, n, 2), cert))
    throw std::logic_error("base_identity: table failed load-time verification");
  return cert;
}

SoSCertificate compose_sos(const FieldCtx& ctx, u32 n, u32 d) {
  require_odd_characteristic(ctx, "compose_sos");
  if (n != 1 && n != 2 && n != 4 && n != 8)
    throw std::invalid_argument("compose_sos: n must be in {1, 2, 4, 8}");
  if (d == 0 || (d & (d - 1)) != 0)
    throw std::invalid_argument("compose_sos: d must be a power of two");
  std::size_t side = checked_tensor_size(n, d);
  if (d == 1) {
    // Base of the recursion: sum_i x_i^2 is already a sum of multilinear
    // squares, one unit-vector term per variable.
    SoSCertificate cert{n, 1, ctx, {}, "compose: unit vectors"};
    for (u32 i = 0; i < n; ++i) {
      DenseMatrix t(ctx, 1, n);
      if (ctx.finite())
        t.f(0, i) = 1;
      else
        t.c(0, i) = 1.0;
      cert.terms.push_back(std::move(t));
    }
    return cert;
  }
  SoSCertificate half = compose_sos(ctx, n, d / 2);
  SoSCertificate base = base_identity(ctx, n);
  std::size_t hside = half.terms[0].cols;
  SoSCertificate cert{n, d, ctx, {},
                      "compose(n=" + std::to_string(n) +
                          ", d=" + std::to_string(d) + "): " +
                          std::to_string(n) + " terms"};
  // Treat the two halves' term vectors as the new variables of the base
  // identity: term_l = sum_{a,b} base_l[a,b] * half_a (x) half_b.
  for (u32 l = 0; l < n; ++l) {
    DenseMatrix t(ctx, 1, side);
    for (u32 a = 0; a < n; ++a)
      for (u32 b = 0; b < n; ++b) {
        std::size_t idx = std::size_t{a} * n + b;
        if (ctx.finite()) {
          u64 coef = base.terms[l].fe[idx];
          if (!coef) continue;
          for (std::size_t hi = 0; hi < hside; ++hi) {
            u64 left = half.terms[a].fe[hi];
            if (!left) continue;
            u64 lc = fmul(ctx, coef, left);
            for (std::size_t lo = 0; lo < hside; ++lo)
              t.fe[hi * hside + lo] =
                  fadd(ctx, t.fe[hi * hside + lo],
                       fmul(ctx, lc, half.terms[b].fe[lo]));
          }
        } else {
          cplx coef = base.terms[l].ce[idx];
          if (std::abs(coef) == 0) continue;
          for (std::size_t hi = 0; hi < hside; ++hi) {
            cplx lc = coef * half.terms[a].ce[hi];
            for (std::size_t lo = 0; lo < hside; ++lo)
              t.ce[hi * hside + lo] += lc * half.terms[b].ce[lo];
          }
        }
      }
    cert.terms.push_back(std::move(t));
  }
  return cert;
}

PtCertificate pairing_upper_bound(const HyperMatrix& m,
                                  const CoarseSosProvider& provider) {
  const FieldCtx& ctx = m.m.ctx;
  require_odd_characteristic(ctx, "pairing_upper_bound");
  if (m.d == 0 || m.d % 2 != 0)
    throw std::invalid_argument("pairing_upper_bound: d must be even");
  if (!approx_equal(m.m, DenseMatrix::identity(ctx, m.side())))
    throw std::invalid_argument("pairing_upper_bound: target must be the identity");
  u32 p = m.d / 2;
  std::size_t coarse = 1;
  for (u32 t = 0; t < p; ++t) coarse *= m.n;
  if (coarse > (std::size_t{1} << 15))
    throw std::invalid_argument("pairing_upper_bound: coarse alphabet too large");
  u32 nhat = static_cast<u32>(coarse);
  SoSCertificate sos =
      provider ? provider(ctx, nhat) : base_identity(ctx, nhat);
  HyperMatrix coarse_id = HyperMatrix::identity(ctx, nhat, 2);
  PtCertificate coarse_cert = sos_to_pt(coarse_id, sos);
  PtCertificate fine = regroup_cert(coarse_cert, p, m.n);
  fine.metadata += "; pairing bound via " + std::to_string(sos.terms.size()) +
                   " coarse squares";
  verify_pt_certificate(fine);
  return fine;
}

}  // namespace ptw
