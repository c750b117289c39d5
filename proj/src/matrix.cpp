#include "ptw/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace ptw {

DenseMatrix::DenseMatrix(const FieldCtx& c, std::size_t r, std::size_t cl)
    : rows(r), cols(cl), ctx(c) {
  if (ctx.finite())
    fe.assign(rows * cols, 0);
  else
    ce.assign(rows * cols, cplx{0, 0});
}

DenseMatrix DenseMatrix::identity(const FieldCtx& c, std::size_t n) {
  DenseMatrix m(c, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (c.finite())
      m.f(i, i) = 1;
    else
      m.c(i, i) = 1.0;
  }
  return m;
}

void DenseMatrix::set_int(std::size_t i, std::size_t j, i64 v) {
  if (ctx.finite())
    f(i, j) = freduce(ctx, v);
  else
    c(i, j) = static_cast<double>(v);
}

bool DenseMatrix::is_zero() const {
  if (ctx.finite()) {
    for (u64 v : fe)
      if (v) return false;
    return true;
  }
  for (const cplx& v : ce)
    if (std::abs(v) > ctx.eps) return false;
  return true;
}

static void check_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* who) {
  if (a.rows != b.rows || a.cols != b.cols || !(a.ctx == b.ctx))
    throw std::invalid_argument(std::string(who) + ": shape or context mismatch");
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  check_same_shape(a, b, "add");
  DenseMatrix r = a;
  if (a.ctx.finite())
    for (std::size_t i = 0; i < r.fe.size(); ++i) r.fe[i] = fadd(a.ctx, a.fe[i], b.fe[i]);
  else
    for (std::size_t i = 0; i < r.ce.size(); ++i) r.ce[i] = a.ce[i] + b.ce[i];
  return r;
}

DenseMatrix sub(const DenseMatrix& a, const DenseMatrix& b) {
  check_same_shape(a, b, "sub");
  DenseMatrix r = a;
  if (a.ctx.finite())
    for (std::size_t i = 0; i < r.fe.size(); ++i) r.fe[i] = fsub(a.ctx, a.fe[i], b.fe[i]);
  else
    for (std::size_t i = 0; i < r.ce.size(); ++i) r.ce[i] = a.ce[i] - b.ce[i];
  return r;
}

DenseMatrix scale_int(const DenseMatrix& a, i64 s) {
  DenseMatrix r = a;
  if (a.ctx.finite()) {
    u64 sv = freduce(a.ctx, s);
    for (auto& v : r.fe) v = fmul(a.ctx, v, sv);
  } else {
    for (auto& v : r.ce) v *= static_cast<double>(s);
  }
  return r;
}

DenseMatrix mul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows || !(a.ctx == b.ctx))
    throw std::invalid_argument("mul: shape or context mismatch");
  DenseMatrix r(a.ctx, a.rows, b.cols);
  if (a.ctx.finite()) {
    for (std::size_t i = 0; i < a.rows; ++i)
      for (std::size_t k = 0; k < a.cols; ++k) {
        u64 av = a.f(i, k);
        if (!av) continue;
        for (std::size_t j = 0; j < b.cols; ++j)
          r.f(i, j) = fadd(a.ctx, r.f(i, j), fmul(a.ctx, av, b.f(k, j)));
      }
  } else {
    for (std::size_t i = 0; i < a.rows; ++i)
      for (std::size_t k = 0; k < a.cols; ++k) {
        cplx av = a.c(i, k);
        for (std::size_t j = 0; j < b.cols; ++j) r.c(i, j) += av * b.c(k, j);
      }
  }
  return r;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix r(a.ctx, a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) {
      if (a.ctx.finite())
        r.f(j, i) = a.f(i, j);
      else
        r.c(j, i) = a.c(i, j);
    }
  return r;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  if (!(a.ctx == b.ctx)) throw std::invalid_argument("kron: context mismatch");
  DenseMatrix r(a.ctx, a.rows * b.rows, a.cols * b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j)
      for (std::size_t k = 0; k < b.rows; ++k)
        for (std::size_t l = 0; l < b.cols; ++l) {
          if (a.ctx.finite())
            r.f(i * b.rows + k, j * b.cols + l) = fmul(a.ctx, a.f(i, j), b.f(k, l));
          else
            r.c(i * b.rows + k, j * b.cols + l) = a.c(i, j) * b.c(k, l);
        }
  return r;
}

bool approx_equal(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols || !(a.ctx == b.ctx)) return false;
  if (a.ctx.finite()) return a.fe == b.fe;
  double scale = 1.0;
  for (const cplx& v : a.ce) scale = std::max(scale, std::abs(v));
  for (const cplx& v : b.ce) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < a.ce.size(); ++i)
    if (std::abs(a.ce[i] - b.ce[i]) > a.ctx.eps * scale) return false;
  return true;
}

// --- rank ---

static std::size_t rank_gf2(const DenseMatrix& a) {
  const std::size_t w = (a.cols + 63) / 64;
  std::vector<u64> bits(a.rows * w, 0);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j)
      if (a.f(i, j)) bits[i * w + j / 64] |= 1ULL << (j % 64);
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols && r < a.rows; ++col) {
    std::size_t word = col / 64;
    u64 mask = 1ULL << (col % 64);
    std::size_t piv = r;
    while (piv < a.rows && !(bits[piv * w + word] & mask)) ++piv;
    if (piv == a.rows) continue;
    if (piv != r)
      for (std::size_t k = word; k < w; ++k) std::swap(bits[piv * w + k], bits[r * w + k]);
    for (std::size_t i = 0; i < a.rows; ++i) {
      if (i != r && (bits[i * w + word] & mask))
        for (std::size_t k = word; k < w; ++k) bits[i * w + k] ^= bits[r * w + k];
    }
    ++r;
  }
  return r;
}

static std::size_t rank_finite(const DenseMatrix& a) {
  if (a.ctx.mod() == 2) return rank_gf2(a);
  std::vector<u64> m = a.fe;
  const std::size_t R = a.rows, C = a.cols;
  const FieldCtx& cx = a.ctx;
  std::size_t r = 0;
  for (std::size_t col = 0; col < C && r < R; ++col) {
    std::size_t piv = r;
    while (piv < R && m[piv * C + col] == 0) ++piv;
    if (piv == R) continue;
    if (piv != r)
      for (std::size_t k = col; k < C; ++k) std::swap(m[piv * C + k], m[r * C + k]);
    u64 inv = finv(cx, m[r * C + col]);
    for (std::size_t k = col; k < C; ++k) m[r * C + k] = fmul(cx, m[r * C + k], inv);
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r) continue;
      u64 fct = m[i * C + col];
      if (!fct) continue;
      for (std::size_t k = col; k < C; ++k)
        m[i * C + k] = fsub(cx, m[i * C + k], fmul(cx, fct, m[r * C + k]));
    }
    ++r;
  }
  return r;
}

static std::size_t rank_complex(const DenseMatrix& a) {
  std::vector<cplx> m = a.ce;
  const std::size_t R = a.rows, C = a.cols;
  double scale = 0;
  for (const cplx& v : m) scale = std::max(scale, std::abs(v));
  if (scale == 0) return 0;
  const double thresh = a.ctx.eps * scale;
  std::size_t r = 0;
  for (std::size_t col = 0; col < C && r < R; ++col) {
    std::size_t piv = r;
    double best = 0;
    for (std::size_t i = r; i < R; ++i) {
      double v = std::abs(m[i * C + col]);
      if (v > best) best = v, piv = i;
    }
    if (best <= thresh) continue;
    if (piv != r)
      for (std::size_t k = col; k < C; ++k) std::swap(m[piv * C + k], m[r * C + k]);
    cplx inv = 1.0 / m[r * C + col];
    for (std::size_t k = col; k < C; ++k) m[r * C + k] *= inv;
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r) continue;
      cplx fct = m[i * C + col];
      if (std::abs(fct) == 0.0) continue;
      for (std::size_t k = col; k < C; ++k) m[i * C + k] -= fct * m[r * C + k];
    }
    ++r;
  }
  return r;
}

std::size_t rank(const DenseMatrix& a) {
  if (a.size() == 0) return 0;
  return a.ctx.finite() ? rank_finite(a) : rank_complex(a);
}

// --- rank factorization ---
//
// Row-reduce M while maintaining Einv with M = Einv * (current).  At the end
// the current matrix is an RREF with r nonzero rows, so M = Einv[:, :r] * R.
template <typename T, typename Ops>
static std::pair<DenseMatrix, DenseMatrix> rank_factor_impl(const DenseMatrix& a, Ops ops) {
  const std::size_t R = a.rows, C = a.cols;
  std::vector<T> m = ops.entries(a);
  std::vector<T> einv(R * R, ops.zero());
  for (std::size_t i = 0; i < R; ++i) einv[i * R + i] = ops.one();
  std::size_t r = 0;
  for (std::size_t col = 0; col < C && r < R; ++col) {
    std::size_t piv;
    if (!ops.find_pivot(m, R, C, r, col, piv)) continue;
    if (piv != r) {
      for (std::size_t k = 0; k < C; ++k) std::swap(m[piv * C + k], m[r * C + k]);
      for (std::size_t i = 0; i < R; ++i) std::swap(einv[i * R + piv], einv[i * R + r]);
    }
    T inv = ops.invert(m[r * C + col]);
    for (std::size_t k = 0; k < C; ++k) m[r * C + k] = ops.mul(m[r * C + k], inv);
    // scaling row r by inv means Einv column r is scaled by pivot
    T pivval = ops.invert(inv);
    for (std::size_t i = 0; i < R; ++i) einv[i * R + r] = ops.mul(einv[i * R + r], pivval);
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r) continue;
      T fct = m[i * C + col];
      if (ops.is_zero(fct)) continue;
      for (std::size_t k = 0; k < C; ++k)
        m[i * C + k] = ops.sub(m[i * C + k], ops.mul(fct, m[r * C + k]));
      // row_i -= f*row_r  =>  Einv col_r += f * col_i
      for (std::size_t j = 0; j < R; ++j)
        einv[j * R + r] = ops.add(einv[j * R + r], ops.mul(fct, einv[j * R + i]));
    }
    ++r;
  }
  DenseMatrix u(a.ctx, R, r), v(a.ctx, r, C);
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < r; ++j) ops.put(u, i, j, einv[i * R + j]);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < C; ++j) ops.put(v, i, j, m[i * C + j]);
  return {u, v};
}

struct FiniteOps {
  FieldCtx cx;
  std::vector<u64> entries(const DenseMatrix& a) const { return a.fe; }
  u64 zero() const { return 0; }
  u64 one() const { return 1; }
  bool is_zero(u64 v) const { return v == 0; }
  u64 add(u64 a, u64 b) const { return fadd(cx, a, b); }
  u64 sub(u64 a, u64 b) const { return fsub(cx, a, b); }
  u64 mul(u64 a, u64 b) const { return fmul(cx, a, b); }
  u64 invert(u64 a) const { return finv(cx, a); }
  bool find_pivot(const std::vector<u64>& m, std::size_t R, std::size_t C, std::size_t r,
                  std::size_t col, std::size_t& piv) const {
    for (piv = r; piv < R; ++piv)
      if (m[piv * C + col] != 0) return true;
    return false;
  }
  void put(DenseMatrix& m, std::size_t i, std::size_t j, u64 v) const { m.f(i, j) = v; }
};

struct ComplexOps {
  double thresh;
  std::vector<cplx> entries(const DenseMatrix& a) const { return a.ce; }
  cplx zero() const { return {0, 0}; }
  cplx one() const { return {1, 0}; }
  bool is_zero(cplx v) const { return std::abs(v) == 0.0; }
  cplx add(cplx a, cplx b) const { return a + b; }
  cplx sub(cplx a, cplx b) const { return a - b; }
  cplx mul(cplx a, cplx b) const { return a * b; }
  cplx invert(cplx a) const { return 1.0 / a; }
  bool find_pivot(const std::vector<cplx>& m, std::size_t R, std::size_t C, std::size_t r,
                  std::size_t col, std::size_t& piv) const {
    piv = r;
    double best = 0;
    for (std::size_t i = r; i < R; ++i) {
      double v = std::abs(m[i * C + col]);
      if (v > best) best = v, piv = i;
    }
    return best > thresh;
  }
  void put(DenseMatrix& m, std::size_t i, std::size_t j, cplx v) const { m.c(i, j) = v; }
};

std::pair<DenseMatrix, DenseMatrix> rank_factor(const DenseMatrix& m) {
  if (m.ctx.finite()) return rank_factor_impl<u64>(m, FiniteOps{m.ctx});
  double scale = 0;
  for (const cplx& v : m.ce) scale = std::max(scale, std::abs(v));
  return rank_factor_impl<cplx>(m, ComplexOps{m.ctx.eps * std::max(scale, 1e-300)});
}

// --- gram factorization ---

static DenseMatrix gram_finite(const DenseMatrix& s0) {
  const FieldCtx cx = s0.ctx;
  const u64 P = cx.mod();
  const std::size_t N = s0.rows;
  std::vector<u64> s = s0.fe;
  // w tracks the inverse transform: s0 = w * diag * w^T throughout
  std::vector<u64> w(N * N, 0);
  for (std::size_t i = 0; i < N; ++i) w[i * N + i] = 1;

  auto row_add = [&](std::size_t dst, std::size_t src, u64 fct) {
    // rows+cols of s: s := E s E^T with E = I + fct * e_dst e_src^T,
    // and w := w E^{-1}  (column src of w loses fct * column dst).
    for (std::size_t k = 0; k < N; ++k)
      s[dst * N + k] = fadd(cx, s[dst * N + k], fmul(cx, fct, s[src * N + k]));
    for (std::size_t k = 0; k < N; ++k)
      s[k * N + dst] = fadd(cx, s[k * N + dst], fmul(cx, fct, s[k * N + src]));
    for (std::size_t k = 0; k < N; ++k)
      w[k * N + src] = fsub(cx, w[k * N + src], fmul(cx, fct, w[k * N + dst]));
  };
  auto swap_rc = [&](std::size_t a, std::size_t b) {
    for (std::size_t k = 0; k < N; ++k) std::swap(s[a * N + k], s[b * N + k]);
    for (std::size_t k = 0; k < N; ++k) std::swap(s[k * N + a], s[k * N + b]);
    for (std::size_t k = 0; k < N; ++k) std::swap(w[k * N + a], w[k * N + b]);
  };

  for (std::size_t k = 0; k < N; ++k) {
    if (s[k * N + k] == 0) {
      std::size_t j = k + 1;
      for (; j < N; ++j)
        if (s[j * N + j] != 0) break;
      if (j < N) {
        swap_rc(k, j);
      } else {
        for (j = k + 1; j < N; ++j)
          if (s[k * N + j] != 0) break;
        if (j == N) continue;  // row is zero in the remaining block
        row_add(k, j, 1);      // diagonal becomes 2*s[k][j] != 0 (char != 2)
      }
    }
    u64 d = s[k * N + k];
    u64 dinv = finv(cx, d);
    for (std::size_t i = k + 1; i < N; ++i) {
      u64 fct = s[i * N + k];
      if (!fct) continue;
      row_add(i, k, fneg(cx, fmul(cx, fct, dinv)));
    }
  }

  std::vector<std::vector<u64>> lrows;
  for (std::size_t k = 0; k < N; ++k) {
    u64 d = s[k * N + k];
    if (!d) continue;
    auto emit = [&](u64 coef) {
      if (!coef) return;
      std::vector<u64> row(N);
      for (std::size_t j = 0; j < N; ++j) row[j] = fmul(cx, coef, w[j * N + k]);
      lrows.push_back(std::move(row));
    };
    if (auto r = sqrt_mod(d, P)) {
      emit(*r);
    } else {
      auto [x, y] = two_squares_mod(d, P);
      emit(x);
      emit(y);
    }
  }
  DenseMatrix l(cx, lrows.size(), N);
  for (std::size_t i = 0; i < lrows.size(); ++i)
    for (std::size_t j = 0; j < N; ++j) l.f(i, j) = lrows[i][j];
  return l;
}

static DenseMatrix gram_complex(const DenseMatrix& s0) {
  const std::size_t N = s0.rows;
  std::vector<cplx> s = s0.ce;
  std::vector<cplx> w(N * N, cplx{0, 0});
  for (std::size_t i = 0; i < N; ++i) w[i * N + i] = 1.0;
  double scale = 0;
  for (const cplx& v : s) scale = std::max(scale, std::abs(v));
  if (scale == 0) return DenseMatrix(s0.ctx, 0, N);
  const double thresh = s0.ctx.eps * scale;

  auto row_add = [&](std::size_t dst, std::size_t src, cplx fct) {
    for (std::size_t k = 0; k < N; ++k) s[dst * N + k] += fct * s[src * N + k];
    for (std::size_t k = 0; k < N; ++k) s[k * N + dst] += fct * s[k * N + src];
    for (std::size_t k = 0; k < N; ++k) w[k * N + src] -= fct * w[k * N + dst];
  };
  auto swap_rc = [&](std::size_t a, std::size_t b) {
    for (std::size_t k = 0; k < N; ++k) std::swap(s[a * N + k], s[b * N + k]);
    for (std::size_t k = 0; k < N; ++k) std::swap(s[k * N + a], s[k * N + b]);
    for (std::size_t k = 0; k < N; ++k) std::swap(w[k * N + a], w[k * N + b]);
  };

  for (std::size_t k = 0; k < N; ++k) {
    std::size_t bestj = k;
    double best = std::abs(s[k * N + k]);
    for (std::size_t j = k + 1; j < N; ++j) {
      double v = std::abs(s[j * N + j]);
      if (v > best) best = v, bestj = j;
    }
    if (best <= thresh) {
      std::size_t j = k + 1;
      double bo = 0;
      std::size_t bj = k;
      for (; j < N; ++j) {
        double v = std::abs(s[k * N + j]);
        if (v > bo) bo = v, bj = j;
      }
      if (bo <= thresh) continue;
      row_add(k, bj, 1.0);
    } else if (bestj != k) {
      swap_rc(k, bestj);
    }
    cplx d = s[k * N + k];
    for (std::size_t i = k + 1; i < N; ++i) {
      cplx fct = s[i * N + k];
      if (std::abs(fct) <= thresh) continue;
      row_add(i, k, -fct / d);
    }
  }

  std::vector<std::vector<cplx>> lrows;
  for (std::size_t k = 0; k < N; ++k) {
    cplx d = s[k * N + k];
    if (std::abs(d) <= thresh) continue;
    cplx r = std::sqrt(d);
    std::vector<cplx> row(N);
    for (std::size_t j = 0; j < N; ++j) row[j] = r * w[j * N + k];
    lrows.push_back(std::move(row));
  }
  DenseMatrix l(s0.ctx, lrows.size(), N);
  for (std::size_t i = 0; i < lrows.size(); ++i)
    for (std::size_t j = 0; j < N; ++j) l.c(i, j) = lrows[i][j];
  return l;
}

DenseMatrix gram_factor(const DenseMatrix& s) {
  if (s.rows != s.cols) throw std::invalid_argument("gram_factor: not square");
  if (!approx_equal(s, transpose(s)))
    throw std::invalid_argument("gram_factor: not symmetric");
  if (s.ctx.char_two())
    throw std::invalid_argument("gram_factor: characteristic 2 not supported");
  return s.ctx.finite() ? gram_finite(s) : gram_complex(s);
}

DenseMatrix random_matrix(const FieldCtx& c, std::size_t r, std::size_t cl, Rng& rng) {
  DenseMatrix m(c, r, cl);
  if (c.finite()) {
    for (auto& v : m.fe) v = rng.below(c.mod());
  } else {
    for (auto& v : m.ce) {
      double re = static_cast<double>(static_cast<i64>(rng.below(21)) - 10);
      double im = static_cast<double>(static_cast<i64>(rng.below(21)) - 10);
      v = cplx{re, im};
    }
  }
  return m;
}

DenseMatrix random_nonsingular(const FieldCtx& c, std::size_t n, Rng& rng) {
  for (int tries = 0; tries < 10000; ++tries) {
    DenseMatrix m = random_matrix(c, n, n, rng);
    if (rank(m) == n) return m;
  }
  throw std::runtime_error("random_nonsingular: rejection sampling failed");
}

u64 matrix_hash(const DenseMatrix& m) {
  u64 h = fnv1a(&m.rows, sizeof m.rows);
  h = fnv1a(&m.cols, sizeof m.cols, h);
  if (m.ctx.finite()) {
    h = fnv1a(m.fe.data(), m.fe.size() * sizeof(u64), h);
  } else {
    h = fnv1a(m.ce.data(), m.ce.size() * sizeof(cplx), h);
  }
  return h;
}

}  // namespace ptw
