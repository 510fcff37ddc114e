#pragma once

#include <vector>

#include "curve.hpp"
#include "fields.hpp"

namespace hiot::bls {

using G1Affine = Affine<Fp>;
using G2Affine = Affine<Fp2>;  // on the twist E'(Fp2)

// Process-wide curve context: generators, curve constants, the untwist
// factors into E(Fp12) and the final-exponentiation exponent. Built once,
// validated against the curve equations and group order at startup.
struct Ctx {
  Fp b1;                         // 4
  Fp2 b2;                        // 4(1+i)
  G1Affine g1_gen;
  G2Affine g2_gen;
  Fp12 untwist_x, untwist_y;     // (x', y') -> (x'*untwist_x, y'*untwist_y)
  std::vector<u64> final_exp;    // (p^12 - 1) / r, little-endian limbs
  std::array<u64, 4> r_limbs;    // group order, little-endian
  std::array<u64, 6> p_half;     // (p - 1) / 2, for y-sign compression
  std::array<u64, 6> sqrt_exp;   // (p + 1) / 4

  static const Ctx& get();
};

// Optimal ate pairing e(P, Q) with Q on the twist. Returns an element of
// the order-r subgroup of Fp12*.
Fp12 pairing(const G1Affine& p, const G2Affine& q);

}  // namespace hiot::bls
