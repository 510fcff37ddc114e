#pragma once

// Finite field arithmetic for BLS12-381: the 381-bit base field Fp, the
// 255-bit scalar field Fr, and the Fp2/Fp6/Fp12 extension tower
//   Fp2  = Fp[i]/(i^2 + 1)
//   Fp6  = Fp2[v]/(v^3 - xi),  xi = 1 + i
//   Fp12 = Fp6[w]/(w^2 - v)
// Base-field elements are kept in Montgomery form; all constants are
// derived at startup from the modulus (nothing magic is hardcoded beyond
// the moduli themselves and the standard generators).

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>

namespace hiot::bls {

using u64 = uint64_t;
using u128 = unsigned __int128;

inline u64 adc(u64 a, u64 b, u64& carry) {
  u128 t = u128(a) + b + carry;
  carry = u64(t >> 64);
  return u64(t);
}

inline u64 sbb(u64 a, u64 b, u64& borrow) {
  u128 t = u128(a) - b - borrow;
  borrow = (t >> 64) ? 1 : 0;
  return u64(t);
}

struct FpParams {
  static constexpr size_t N = 6;
  // p = 0x1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0
  //     f6b0f6241eabfffeb153ffffb9feffffffffaaab
  static constexpr std::array<u64, 6> kMod = {
      0xb9feffffffffaaabULL, 0x1eabfffeb153ffffULL, 0x6730d2a0f6b0f624ULL,
      0x64774b84f38512bfULL, 0x4b1ba7b6434bacd7ULL, 0x1a0111ea397fe69aULL};
};

struct FrParams {
  static constexpr size_t N = 4;
  // r = 0x73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001
  static constexpr std::array<u64, 4> kMod = {
      0xffffffff00000001ULL, 0x53bda402fffe5bfeULL, 0x3339d80809a1d805ULL,
      0x73eda753299d7d48ULL};
};

// -x^-1 mod 2^64 by Newton iteration; valid for odd moduli.
constexpr u64 mont_inv64(u64 p0) {
  u64 x = 1;
  for (int i = 0; i < 6; i++) x *= 2 - p0 * x;
  return ~x + 1;
}

template <class P>
struct Fe {
  static constexpr size_t N = P::N;
  static constexpr std::array<u64, N> kMod = P::kMod;
  static constexpr u64 kInv = mont_inv64(P::kMod[0]);

  std::array<u64, N> v{};  // Montgomery form

  bool operator==(const Fe&) const = default;
  bool is_zero() const {
    u64 acc = 0;
    for (u64 x : v) acc |= x;
    return acc == 0;
  }

  // --- canonical (non-Montgomery) limb helpers ---
  static bool raw_geq_mod(const std::array<u64, N>& a) {
    for (size_t i = N; i-- > 0;) {
      if (a[i] > kMod[i]) return true;
      if (a[i] < kMod[i]) return false;
    }
    return true;  // equal
  }
  static void raw_sub_mod(std::array<u64, N>& a) {
    u64 borrow = 0;
    for (size_t i = 0; i < N; i++) a[i] = sbb(a[i], kMod[i], borrow);
  }
  static void raw_dbl_mod(std::array<u64, N>& a) {
    u64 carry = 0;
    for (size_t i = 0; i < N; i++) a[i] = adc(a[i], a[i], carry);
    if (carry || raw_geq_mod(a)) raw_sub_mod(a);
  }

  // R^2 mod p, computed once by doubling.
  static const std::array<u64, N>& r2() {
    static const std::array<u64, N> value = [] {
      std::array<u64, N> x{};
      x[0] = 1;
      for (size_t i = 0; i < 2 * 64 * N; i++) raw_dbl_mod(x);
      return x;
    }();
    return value;
  }

  static void mont_mul(std::array<u64, N>& r, const std::array<u64, N>& a,
                       const std::array<u64, N>& b) {
    std::array<u64, N + 2> t{};
    for (size_t i = 0; i < N; i++) {
      u64 carry = 0;
      for (size_t j = 0; j < N; j++) {
        u128 s = u128(a[j]) * b[i] + t[j] + carry;
        t[j] = u64(s);
        carry = u64(s >> 64);
      }
      u128 s = u128(t[N]) + carry;
      t[N] = u64(s);
      t[N + 1] = u64(s >> 64);

      u64 m = t[0] * kInv;
      u128 s2 = u128(m) * kMod[0] + t[0];
      carry = u64(s2 >> 64);
      for (size_t j = 1; j < N; j++) {
        u128 s3 = u128(m) * kMod[j] + t[j] + carry;
        t[j - 1] = u64(s3);
        carry = u64(s3 >> 64);
      }
      u128 s4 = u128(t[N]) + carry;
      t[N - 1] = u64(s4);
      t[N] = t[N + 1] + u64(s4 >> 64);
    }
    std::array<u64, N> res;
    for (size_t j = 0; j < N; j++) res[j] = t[j];
    if (t[N] || raw_geq_mod(res)) {
      u64 borrow = 0;
      for (size_t j = 0; j < N; j++) res[j] = sbb(res[j], kMod[j], borrow);
    }
    r = res;
  }

  static Fe zero() { return Fe{}; }
  static Fe one() {
    static const Fe value = from_u64(1);
    return value;
  }
  static Fe from_u64(u64 x) {
    std::array<u64, N> raw{};
    raw[0] = x;
    Fe r;
    mont_mul(r.v, raw, r2());
    return r;
  }
  // Accepts any canonical limb array < modulus.
  static Fe from_raw(const std::array<u64, N>& raw) {
    Fe r;
    mont_mul(r.v, raw, r2());
    return r;
  }
  std::array<u64, N> to_raw() const {
    std::array<u64, N> onev{};
    onev[0] = 1;
    std::array<u64, N> r;
    mont_mul(r, v, onev);
    return r;
  }

  Fe add(const Fe& o) const {
    Fe r;
    u64 carry = 0;
    for (size_t i = 0; i < N; i++) r.v[i] = adc(v[i], o.v[i], carry);
    if (carry || raw_geq_mod(r.v)) raw_sub_mod(r.v);
    return r;
  }
  Fe sub(const Fe& o) const {
    Fe r;
    u64 borrow = 0;
    for (size_t i = 0; i < N; i++) r.v[i] = sbb(v[i], o.v[i], borrow);
    if (borrow) {
      u64 carry = 0;
      for (size_t i = 0; i < N; i++) r.v[i] = adc(r.v[i], kMod[i], carry);
    }
    return r;
  }
  Fe neg() const { return Fe{}.sub(*this); }
  Fe dbl() const { return add(*this); }
  Fe mul(const Fe& o) const {
    Fe r;
    mont_mul(r.v, v, o.v);
    return r;
  }
  Fe sqr() const { return mul(*this); }

  // Binary exponentiation, exponent as canonical little-endian limbs.
  Fe pow(std::span<const u64> exp) const {
    int top = -1;
    for (int i = int(exp.size()) * 64 - 1; i >= 0; i--) {
      if ((exp[i / 64] >> (i % 64)) & 1) {
        top = i;
        break;
      }
    }
    if (top < 0) return one();
    Fe acc = *this;
    for (int i = top - 1; i >= 0; i--) {
      acc = acc.sqr();
      if ((exp[i / 64] >> (i % 64)) & 1) acc = acc.mul(*this);
    }
    return acc;
  }

  // Fermat inverse; maps zero to zero.
  Fe inv() const {
    static const std::array<u64, N> pm2 = [] {
      std::array<u64, N> e = kMod;
      u64 borrow = 0;
      e[0] = sbb(e[0], 2, borrow);
      for (size_t i = 1; i < N && borrow; i++) e[i] = sbb(e[i], 0, borrow);
      return e;
    }();
    return pow(pm2);
  }

  static std::optional<Fe> from_be_bytes(std::span<const uint8_t> bytes) {
    if (bytes.size() != N * 8) return std::nullopt;
    std::array<u64, N> raw{};
    for (size_t i = 0; i < N; i++) {
      u64 limb = 0;
      for (size_t j = 0; j < 8; j++)
        limb = (limb << 8) | bytes[(N - 1 - i) * 8 + j];
      raw[i] = limb;
    }
    if (raw_geq_mod(raw)) return std::nullopt;
    return from_raw(raw);
  }
  void to_be_bytes(std::span<uint8_t> out) const {
    auto raw = to_raw();
    for (size_t i = 0; i < N; i++)
      for (size_t j = 0; j < 8; j++)
        out[(N - 1 - i) * 8 + j] = uint8_t(raw[i] >> (8 * (7 - j)));
  }
};

using Fp = Fe<FpParams>;
using Fr = Fe<FrParams>;

// ---------------------------------------------------------------- Fp2

struct Fp2 {
  Fp c0, c1;  // c0 + c1*i

  bool operator==(const Fp2&) const = default;
  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }

  static Fp2 zero() { return {}; }
  static Fp2 one() { return {Fp::one(), Fp::zero()}; }

  Fp2 add(const Fp2& o) const { return {c0.add(o.c0), c1.add(o.c1)}; }
  Fp2 sub(const Fp2& o) const { return {c0.sub(o.c0), c1.sub(o.c1)}; }
  Fp2 neg() const { return {c0.neg(), c1.neg()}; }
  Fp2 dbl() const { return add(*this); }

  Fp2 mul(const Fp2& o) const {
    Fp t0 = c0.mul(o.c0);
    Fp t1 = c1.mul(o.c1);
    Fp s = c0.add(c1).mul(o.c0.add(o.c1));
    return {t0.sub(t1), s.sub(t0).sub(t1)};
  }
  Fp2 sqr() const {
    Fp t = c0.mul(c1);
    return {c0.add(c1).mul(c0.sub(c1)), t.dbl()};
  }
  Fp2 mul_fp(const Fp& k) const { return {c0.mul(k), c1.mul(k)}; }

  // Multiplication by xi = 1 + i.
  Fp2 mul_by_xi() const { return {c0.sub(c1), c0.add(c1)}; }

  Fp2 inv() const {
    Fp norm = c0.sqr().add(c1.sqr());
    Fp ni = norm.inv();
    return {c0.mul(ni), c1.neg().mul(ni)};
  }
};

// ---------------------------------------------------------------- Fp6

struct Fp6 {
  Fp2 c0, c1, c2;  // c0 + c1*v + c2*v^2

  bool operator==(const Fp6&) const = default;
  bool is_zero() const {
    return c0.is_zero() && c1.is_zero() && c2.is_zero();
  }

  static Fp6 zero() { return {}; }
  static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }

  Fp6 add(const Fp6& o) const {
    return {c0.add(o.c0), c1.add(o.c1), c2.add(o.c2)};
  }
  Fp6 sub(const Fp6& o) const {
    return {c0.sub(o.c0), c1.sub(o.c1), c2.sub(o.c2)};
  }
  Fp6 neg() const { return {c0.neg(), c1.neg(), c2.neg()}; }
  Fp6 dbl() const { return add(*this); }

  Fp6 mul(const Fp6& o) const {
    Fp2 aa = c0.mul(o.c0);
    Fp2 bb = c1.mul(o.c1);
    Fp2 cc = c2.mul(o.c2);
    Fp2 r0 = c1.add(c2).mul(o.c1.add(o.c2)).sub(bb).sub(cc).mul_by_xi().add(aa);
    Fp2 r1 = c0.add(c1).mul(o.c0.add(o.c1)).sub(aa).sub(bb).add(cc.mul_by_xi());
    Fp2 r2 = c0.add(c2).mul(o.c0.add(o.c2)).sub(aa).sub(cc).add(bb);
    return {r0, r1, r2};
  }
  Fp6 sqr() const { return mul(*this); }

  // Multiplication by v: (c0, c1, c2) -> (xi*c2, c0, c1).
  Fp6 mul_by_v() const { return {c2.mul_by_xi(), c0, c1}; }

  Fp6 inv() const {
    Fp2 t0 = c0.sqr().sub(c1.mul(c2).mul_by_xi());
    Fp2 t1 = c2.sqr().mul_by_xi().sub(c0.mul(c1));
    Fp2 t2 = c1.sqr().sub(c0.mul(c2));
    Fp2 d = c0.mul(t0)
                .add(c2.mul(t1).mul_by_xi())
                .add(c1.mul(t2).mul_by_xi());
    Fp2 di = d.inv();
    return {t0.mul(di), t1.mul(di), t2.mul(di)};
  }
};

// ---------------------------------------------------------------- Fp12

struct Fp12 {
  Fp6 c0, c1;  // c0 + c1*w

  bool operator==(const Fp12&) const = default;
  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  bool is_one() const { return *this == one(); }

  static Fp12 zero() { return {}; }
  static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }
  static Fp12 from_fp2(const Fp2& x) {
    return {{x, Fp2::zero(), Fp2::zero()}, Fp6::zero()};
  }
  static Fp12 from_fp(const Fp& x) {
    return from_fp2({x, Fp::zero()});
  }
  // w as an element: 0 + 1*w.
  static Fp12 w() { return {Fp6::zero(), Fp6::one()}; }

  Fp12 add(const Fp12& o) const { return {c0.add(o.c0), c1.add(o.c1)}; }
  Fp12 sub(const Fp12& o) const { return {c0.sub(o.c0), c1.sub(o.c1)}; }
  Fp12 neg() const { return {c0.neg(), c1.neg()}; }

  Fp12 mul(const Fp12& o) const {
    Fp6 t0 = c0.mul(o.c0);
    Fp6 t1 = c1.mul(o.c1);
    Fp6 r1 = c0.add(c1).mul(o.c0.add(o.c1)).sub(t0).sub(t1);
    return {t0.add(t1.mul_by_v()), r1};
  }
  Fp12 sqr() const {
    Fp6 t = c0.mul(c1);
    Fp6 r0 = c0.add(c1).mul(c0.add(c1.mul_by_v())).sub(t).sub(t.mul_by_v());
    return {r0, t.dbl()};
  }
  Fp12 inv() const {
    Fp6 d = c0.sqr().sub(c1.sqr().mul_by_v());
    Fp6 di = d.inv();
    return {c0.mul(di), c1.neg().mul(di)};
  }
  // p^6-power Frobenius: w -> -w. Equals inversion on the cyclotomic
  // subgroup the final exponentiation lands in.
  Fp12 conj() const { return {c0, c1.neg()}; }

  Fp12 pow(std::span<const u64> exp) const {
    int top = -1;
    for (int i = int(exp.size()) * 64 - 1; i >= 0; i--) {
      if ((exp[i / 64] >> (i % 64)) & 1) {
        top = i;
        break;
      }
    }
    if (top < 0) return one();
    Fp12 acc = *this;
    for (int i = top - 1; i >= 0; i--) {
      acc = acc.sqr();
      if ((exp[i / 64] >> (i % 64)) & 1) acc = acc.mul(*this);
    }
    return acc;
  }
};

}  // namespace hiot::bls
