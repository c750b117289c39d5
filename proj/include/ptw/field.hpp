// Field contexts.
//
// Three kinds of coefficient arithmetic, selected at runtime:
//   * GFp          — prime field, entries are residues in [0, p)
//   * ComplexApprox— double-precision complex numbers with an explicit
//                    tolerance used by every rank/equality decision
//   * CycMod       — "cyclotomic-modular": the prime field F_q together with
//                    a distinguished element omega of exact multiplicative
//                    order n; stands in for Q(zeta_n) computations, with
//                    agreement across two independent q's as the exactness
//                    argument.
//
// Finite-field scalars are u64 residues.  All routines validate their
// context on construction (primality, omega order, eps > 0) and throw
// std::invalid_argument on bad parameters.
#pragma once

#include <complex>
#include <optional>
#include <utility>

#include "ptw/common.hpp"

namespace ptw {

using cplx = std::complex<double>;

enum class FieldKind { GFp, ComplexApprox, CycMod };

struct FieldCtx {
  FieldKind kind = FieldKind::GFp;
  u64 p = 2;         // GFp modulus
  double eps = 1e-9; // ComplexApprox tolerance
  u64 q = 0;         // CycMod modulus
  u32 n = 0;         // CycMod root order
  u64 omega = 0;     // CycMod root of unity, order exactly n

  static FieldCtx gfp(u64 p);
  static FieldCtx complex_approx(double eps = 1e-9);
  static FieldCtx cycmod(u64 q, u32 n, u64 omega);
  // The two smallest primes q = 1 (mod n) above 2^20, each with its smallest
  // canonical omega of exact order n.  Deterministic.
  static std::pair<FieldCtx, FieldCtx> cycmod_pair(u32 n);

  bool finite() const { return kind != FieldKind::ComplexApprox; }
  u64 mod() const { return kind == FieldKind::CycMod ? q : p; }
  u64 characteristic() const { return finite() ? mod() : 0; }
  bool char_two() const { return finite() && mod() == 2; }

  bool operator==(const FieldCtx& o) const;
  std::string describe() const;
};

bool is_prime_u64(u64 v);
u64 pow_mod(u64 base, u64 exp, u64 m);
u64 inv_mod(u64 a, u64 p);  // p prime, a != 0

// Tonelli–Shanks; empty when a is a non-residue.  p odd prime.
std::optional<u64> sqrt_mod(u64 a, u64 p);

// Every element of F_p (p odd) is a sum of two squares; returns (x, y) with
// x^2 + y^2 = a, deterministically (smallest x).
std::pair<u64, u64> two_squares_mod(u64 a, u64 p);

// --- scalar helpers on finite contexts ---
inline u64 fadd(const FieldCtx& c, u64 a, u64 b) {
  u64 m = c.mod(), s = a + b;
  return s >= m ? s - m : s;
}
inline u64 fneg(const FieldCtx& c, u64 a) { return a == 0 ? 0 : c.mod() - a; }
inline u64 fsub(const FieldCtx& c, u64 a, u64 b) { return fadd(c, a, fneg(c, b)); }
inline u64 fmul(const FieldCtx& c, u64 a, u64 b) {
  return (a * b) % c.mod();  // moduli stay below 2^31, no overflow
}
inline u64 finv(const FieldCtx& c, u64 a) { return inv_mod(a, c.mod()); }
inline u64 freduce(const FieldCtx& c, i64 v) {
  i64 m = static_cast<i64>(c.mod());
  i64 r = v % m;
  return static_cast<u64>(r < 0 ? r + m : r);
}

}  // namespace ptw
