#include "ptw/field.hpp"

#include <cstdio>

namespace ptw {

std::string hex_u64(u64 v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

bool is_prime_u64(u64 v) {
  if (v < 2) return false;
  for (u64 d : {2ULL, 3ULL, 5ULL, 7ULL}) {
    if (v % d == 0) return v == d;
  }
  // deterministic Miller–Rabin, valid far beyond the moduli used here
  u64 d = v - 1;
  int r = 0;
  while ((d & 1) == 0) d >>= 1, ++r;
  auto mulmod = [&](u64 a, u64 b) { return static_cast<u64>((__uint128_t)a * b % v); };
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (a % v == 0) continue;
    u64 x = 1, e = d, base = a % v;
    while (e) {
      if (e & 1) x = mulmod(x, base);
      base = mulmod(base, base);
      e >>= 1;
    }
    if (x == 1 || x == v - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x);
      if (x == v - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = (__uint128_t)r * base % m;
    base = (__uint128_t)base * base % m;
    exp >>= 1;
  }
  return r;
}

u64 inv_mod(u64 a, u64 p) {
  if (a == 0) throw std::invalid_argument("inv_mod: zero");
  return pow_mod(a, p - 2, p);
}

std::optional<u64> sqrt_mod(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  if (p == 2) return a;
  if (pow_mod(a, (p - 1) / 2, p) != 1) return std::nullopt;
  if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
  // Tonelli–Shanks
  u64 s = p - 1;
  int e = 0;
  while ((s & 1) == 0) s >>= 1, ++e;
  u64 z = 2;
  while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
  u64 m = e;
  u64 c = pow_mod(z, s, p);
  u64 t = pow_mod(a, s, p);
  u64 r = pow_mod(a, (s + 1) / 2, p);
  while (t != 1) {
    u64 i = 0, tt = t;
    while (tt != 1) {
      tt = (__uint128_t)tt * tt % p;
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j + i + 1 < m; ++j) b = (__uint128_t)b * b % p;
    m = i;
    c = (__uint128_t)b * b % p;
    t = (__uint128_t)t * c % p;
    r = (__uint128_t)r * b % p;
  }
  return r;
}

std::pair<u64, u64> two_squares_mod(u64 a, u64 p) {
  a %= p;
  for (u64 x = 0; x < p; ++x) {
    u64 rem = (a + p - (x * x % p)) % p;
    if (auto y = sqrt_mod(rem, p)) return {x, *y};
  }
  throw std::logic_error("two_squares_mod: unreachable for odd p");
}

FieldCtx FieldCtx::gfp(u64 p) {
  if (!is_prime_u64(p) || p >= (1ULL << 31))
    throw std::invalid_argument("FieldCtx::gfp: modulus must be a prime below 2^31");
  FieldCtx c;
  c.kind = FieldKind::GFp;
  c.p = p;
  return c;
}

FieldCtx FieldCtx::complex_approx(double eps) {
  if (!(eps > 0))
    throw std::invalid_argument("FieldCtx::complex_approx: eps must be positive");
  FieldCtx c;
  c.kind = FieldKind::ComplexApprox;
  c.eps = eps;
  return c;
}

FieldCtx FieldCtx::cycmod(u64 q, u32 n, u64 omega) {
  if (!is_prime_u64(q) || q >= (1ULL << 31))
    throw std::invalid_argument("FieldCtx::cycmod: q must be a prime below 2^31");
  if (n == 0 || (q - 1) % n != 0)
    throw std::invalid_argument("FieldCtx::cycmod: need n | q-1");
  omega %= q;
  if (omega == 0 || pow_mod(omega, n, q) != 1)
    throw std::invalid_argument("FieldCtx::cycmod: omega^n != 1");
  for (u32 m = 1; m < n; ++m) {
    if (n % m == 0 && pow_mod(omega, m, q) == 1)
      throw std::invalid_argument("FieldCtx::cycmod: omega has order < n");
  }
  FieldCtx c;
  c.kind = FieldKind::CycMod;
  c.p = q;  // so mod() works uniformly
  c.q = q;
  c.n = n;
  c.omega = omega;
  return c;
}

std::pair<FieldCtx, FieldCtx> FieldCtx::cycmod_pair(u32 n) {
  if (n == 0) throw std::invalid_argument("cycmod_pair: n == 0");
  std::vector<FieldCtx> found;
  for (u64 q = (1ULL << 20) + 1; found.size() < 2; ++q) {
    if ((q - 1) % n != 0 || !is_prime_u64(q)) continue;
    // smallest generator-power of exact order n
    u64 omega = 0;
    for (u64 a = 2; a < q && omega == 0; ++a) {
      u64 w = pow_mod(a, (q - 1) / n, q);
      if (w == 1) continue;
      bool exact = true;
      for (u32 m = 1; m < n; ++m) {
        if (n % m == 0 && pow_mod(w, m, q) == 1) {
          exact = false;
          break;
        }
      }
      if (exact) omega = w;
    }
    if (omega) found.push_back(cycmod(q, n, omega));
  }
  return {found[0], found[1]};
}

bool FieldCtx::operator==(const FieldCtx& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case FieldKind::GFp: return p == o.p;
    case FieldKind::ComplexApprox: return eps == o.eps;
    case FieldKind::CycMod: return q == o.q && n == o.n && omega == o.omega;
  }
  return false;
}

std::string FieldCtx::describe() const {
  char buf[96];
  switch (kind) {
    case FieldKind::GFp:
      std::snprintf(buf, sizeof buf, "gfp(%llu)", (unsigned long long)p);
      break;
    case FieldKind::ComplexApprox:
      std::snprintf(buf, sizeof buf, "complex(eps=%g)", eps);
      break;
    case FieldKind::CycMod:
      std::snprintf(buf, sizeof buf, "cycmod(q=%llu,n=%u,omega=%llu)",
                    (unsigned long long)q, n, (unsigned long long)omega);
      break;
  }
  return buf;
}

}  // namespace ptw
