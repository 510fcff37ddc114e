#include "pairing.hpp"

#include <stdexcept>
#include <string_view>

namespace hiot::bls {

namespace {

// ---- wide integer helpers for one-time exponent derivation ----

std::vector<u64> big_mul(const std::vector<u64>& a, const std::vector<u64>& b) {
  std::vector<u64> r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); i++) {
    u64 carry = 0;
    for (size_t j = 0; j < b.size(); j++) {
      u128 t = u128(a[i]) * b[j] + r[i + j] + carry;
      r[i + j] = u64(t);
      carry = u64(t >> 64);
    }
    size_t k = i + b.size();
    while (carry) {
      u128 t = u128(r[k]) + carry;
      r[k] = u64(t);
      carry = u64(t >> 64);
      k++;
    }
  }
  while (r.size() > 1 && r.back() == 0) r.pop_back();
  return r;
}

int big_bits(const std::vector<u64>& a) {
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i]) {
      int b = 64;
      while (!((a[i] >> (b - 1)) & 1)) b--;
      return int(i) * 64 + b;
    }
  }
  return 0;
}

bool big_geq(const std::vector<u64>& a, const std::vector<u64>& b) {
  size_t n = std::max(a.size(), b.size());
  for (size_t i = n; i-- > 0;) {
    u64 av = i < a.size() ? a[i] : 0;
    u64 bv = i < b.size() ? b[i] : 0;
    if (av > bv) return true;
    if (av < bv) return false;
  }
  return true;
}

void big_sub_inplace(std::vector<u64>& a, const std::vector<u64>& b) {
  u64 borrow = 0;
  for (size_t i = 0; i < a.size(); i++) {
    u64 bv = i < b.size() ? b[i] : 0;
    a[i] = sbb(a[i], bv, borrow);
  }
}

void big_dec(std::vector<u64>& a) {
  u64 borrow = 0;
  a[0] = sbb(a[0], 1, borrow);
  for (size_t i = 1; i < a.size() && borrow; i++) a[i] = sbb(a[i], 0, borrow);
}

// Exact division; throws if a remainder is left.
std::vector<u64> big_div_exact(const std::vector<u64>& num,
                               const std::vector<u64>& den) {
  int nb = big_bits(num);
  std::vector<u64> q(size_t((nb + 63) / 64), 0);
  std::vector<u64> rem(den.size() + 1, 0);
  for (int i = nb - 1; i >= 0; i--) {
    u64 carry = (num[i / 64] >> (i % 64)) & 1;
    for (size_t j = 0; j < rem.size(); j++) {
      u64 top = rem[j] >> 63;
      rem[j] = (rem[j] << 1) | carry;
      carry = top;
    }
    if (big_geq(rem, den)) {
      big_sub_inplace(rem, den);
      q[i / 64] |= 1ull << (i % 64);
    }
  }
  for (u64 limb : rem)
    if (limb) throw std::logic_error("final-exp exponent division not exact");
  while (q.size() > 1 && q.back() == 0) q.pop_back();
  return q;
}

// ---- generator constants (standard BLS12-381 generators) ----

constexpr std::string_view kG1X =
    "17f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac58"
    "6c55e83ff97a1aeffb3af00adb22c6bb";
constexpr std::string_view kG1Y =
    "08b3f481e3aaa0f1a09e30ed741d8ae4fcf5e095d5d00af600db18cb2c04b3ed"
    "d03cc744a2888ae40caa232946c5e7e1";
constexpr std::string_view kG2X0 =
    "024aa2b2f08f0a91260805272dc51051c6e47ad4fa403b02b4510b647ae3d177"
    "0bac0326a805bbefd48056c8c121bdb8";
constexpr std::string_view kG2X1 =
    "13e02b6052719f607dacd3a088274f65596bd0d09920b61ab5da61bbdc7f5049"
    "334cf11213945d57e5ac7d055d042b7e";
constexpr std::string_view kG2Y0 =
    "0ce5d527727d6e118cc9cdc6da2e351aadfd9baa8cbdd3a76d429a695160d12c"
    "923ac9cc3baca289e193548608b82801";
constexpr std::string_view kG2Y1 =
    "0606c4a02ea734cc32acd2b02bc28b99cb3e287e85a763af267492ab572e99ab"
    "3f370d275cec1da1aaa9075ff05f79be";

Fp fp_from_hex(std::string_view hex) {
  if (hex.size() != 96) throw std::logic_error("bad fp hex constant");
  std::array<uint8_t, 48> bytes;
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw std::logic_error("bad hex digit");
  };
  for (size_t i = 0; i < 48; i++)
    bytes[i] = uint8_t(nib(hex[2 * i]) << 4 | nib(hex[2 * i + 1]));
  auto fe = Fp::from_be_bytes(bytes);
  if (!fe) throw std::logic_error("fp constant not canonical");
  return *fe;
}

Ctx build_ctx() {
  Ctx c;
  c.b1 = Fp::from_u64(4);
  c.b2 = Fp2{Fp::from_u64(4), Fp::from_u64(4)};
  c.g1_gen = {fp_from_hex(kG1X), fp_from_hex(kG1Y), false};
  c.g2_gen = {{fp_from_hex(kG2X0), fp_from_hex(kG2X1)},
              {fp_from_hex(kG2Y0), fp_from_hex(kG2Y1)},
              false};
  c.r_limbs = FrParams::kMod;

  if (!on_curve(c.g1_gen, c.b1)) throw std::logic_error("g1 generator off-curve");
  if (!on_curve(c.g2_gen, c.b2)) throw std::logic_error("g2 generator off-curve");
  if (!scalar_mul<Fp>(c.r_limbs, c.g1_gen).inf)
    throw std::logic_error("g1 generator has wrong order");
  if (!scalar_mul<Fp2>(c.r_limbs, c.g2_gen).inf)
    throw std::logic_error("g2 generator has wrong order");

  // Untwist direction: whichever of (w^2, w^3) or (w^-2, w^-3) maps the
  // twist generator onto y^2 = x^3 + 4 over Fp12.
  Fp12 w = Fp12::w();
  Fp12 w2 = w.mul(w);
  Fp12 w3 = w2.mul(w);
  auto lands_on_curve = [&](const Fp12& fx, const Fp12& fy) {
    Fp12 x = Fp12::from_fp2(c.g2_gen.x).mul(fx);
    Fp12 y = Fp12::from_fp2(c.g2_gen.y).mul(fy);
    Fp12 b = Fp12::from_fp(c.b1);
    return y.mul(y) == x.mul(x).mul(x).add(b);
  };
  Fp12 w2i = w2.inv(), w3i = w3.inv();
  if (lands_on_curve(w2i, w3i)) {
    c.untwist_x = w2i;
    c.untwist_y = w3i;
  } else if (lands_on_curve(w2, w3)) {
    c.untwist_x = w2;
    c.untwist_y = w3;
  } else {
    throw std::logic_error("no untwist direction lands on E(Fp12)");
  }

  // final exponent (p^12 - 1) / r
  std::vector<u64> p(FpParams::kMod.begin(), FpParams::kMod.end());
  std::vector<u64> r(FrParams::kMod.begin(), FrParams::kMod.end());
  std::vector<u64> p2 = big_mul(p, p);
  std::vector<u64> p4 = big_mul(p2, p2);
  std::vector<u64> p12 = big_mul(p4, big_mul(p4, p4));
  big_dec(p12);
  c.final_exp = big_div_exact(p12, r);

  // (p - 1) / 2 and (p + 1) / 4
  {
    std::array<u64, 6> t = FpParams::kMod;
    u64 borrow = 0;
    t[0] = sbb(t[0], 1, borrow);
    for (size_t i = 0; i < 6; i++) {
      u64 next = (i + 1 < 6) ? (t[i + 1] & 1) : 0;
      t[i] = (t[i] >> 1) | (next << 63);
    }
    c.p_half = t;

    t = FpParams::kMod;
    u64 carry = 0;
    t[0] = adc(t[0], 1, carry);
    for (size_t i = 1; i < 6 && carry; i++) t[i] = adc(t[i], 0, carry);
    for (int shift = 0; shift < 2; shift++) {
      for (size_t i = 0; i < 6; i++) {
        u64 next = (i + 1 < 6) ? (t[i + 1] & 1) : 0;
        t[i] = (t[i] >> 1) | (next << 63);
      }
    }
    c.sqrt_exp = t;
  }
  return c;
}

}  // namespace

const Ctx& Ctx::get() {
  static const Ctx ctx = build_ctx();
  return ctx;
}

Fp12 pairing(const G1Affine& p, const G2Affine& q) {
  const Ctx& ctx = Ctx::get();
  if (p.inf || q.inf) return Fp12::one();

  Fp12 qx = Fp12::from_fp2(q.x).mul(ctx.untwist_x);
  Fp12 qy = Fp12::from_fp2(q.y).mul(ctx.untwist_y);
  Fp12 px = Fp12::from_fp(p.x);
  Fp12 py = Fp12::from_fp(p.y);

  Fp12 tx = qx, ty = qy;
  Fp12 f = Fp12::one();

  // Evaluates the line through (tx,ty) with slope lam at P, then moves T.
  auto apply_line = [&](const Fp12& lam, const Fp12& x2) {
    Fp12 line = py.sub(ty).sub(lam.mul(px.sub(tx)));
    Fp12 x3 = lam.sqr().sub(tx).sub(x2);
    Fp12 y3 = lam.mul(tx.sub(x3)).sub(ty);
    tx = x3;
    ty = y3;
    f = f.mul(line);
  };

  // Miller loop over |u| = 0xd201000000010000; u is negative, handled by
  // the conjugation below. Vertical lines fall in a proper subfield and
  // are erased by the final exponentiation, so they are omitted.
  constexpr u64 kLoop = 0xd201000000010000ULL;
  for (int i = 62; i >= 0; i--) {
    f = f.sqr();
    {
      Fp12 t = tx.sqr();
      Fp12 lam = t.add(t).add(t).mul(ty.add(ty).inv());
      apply_line(lam, tx);
    }
    if ((kLoop >> i) & 1) {
      Fp12 lam = qy.sub(ty).mul(qx.sub(tx).inv());
      apply_line(lam, qx);
    }
  }
  f = f.conj();
  return f.pow(ctx.final_exp);
}

}  // namespace hiot::bls
