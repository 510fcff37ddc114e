#pragma once

// Short-Weierstrass arithmetic y^2 = x^3 + B shared by E(Fp) (B = 4) and
// the sextic twist E'(Fp2) (B = 4(1+i)). Affine points are the canonical
// external form; scalar multiplication runs through Jacobian coordinates.

#include <span>

#include "fields.hpp"

namespace hiot::bls {

template <class F>
struct Affine {
  F x{}, y{};
  bool inf = true;

  bool operator==(const Affine& o) const {
    if (inf || o.inf) return inf == o.inf;
    return x == o.x && y == o.y;
  }
};

template <class F>
struct Jacobian {
  F x{}, y{}, z{};  // z == 0 encodes infinity

  static Jacobian infinity() { return {F::zero(), F::one(), F::zero()}; }
  bool is_inf() const { return z.is_zero(); }

  static Jacobian from_affine(const Affine<F>& a) {
    if (a.inf) return infinity();
    return {a.x, a.y, F::one()};
  }
};

template <class F>
Jacobian<F> jac_dbl(const Jacobian<F>& p) {
  if (p.is_inf()) return p;
  F a = p.x.sqr();
  F b = p.y.sqr();
  F c = b.sqr();
  F d = p.x.add(b).sqr().sub(a).sub(c).dbl();
  F e = a.dbl().add(a);
  F f = e.sqr();
  F x3 = f.sub(d.dbl());
  F y3 = e.mul(d.sub(x3)).sub(c.dbl().dbl().dbl());
  F z3 = p.y.mul(p.z).dbl();
  return {x3, y3, z3};
}

template <class F>
Jacobian<F> jac_add(const Jacobian<F>& p, const Jacobian<F>& q) {
  if (p.is_inf()) return q;
  if (q.is_inf()) return p;
  F z1z1 = p.z.sqr();
  F z2z2 = q.z.sqr();
  F u1 = p.x.mul(z2z2);
  F u2 = q.x.mul(z1z1);
  F s1 = p.y.mul(q.z).mul(z2z2);
  F s2 = q.y.mul(p.z).mul(z1z1);
  F h = u2.sub(u1);
  if (h.is_zero()) {
    if (s1 == s2) return jac_dbl(p);
    return Jacobian<F>::infinity();
  }
  F i = h.dbl().sqr();
  F j = h.mul(i);
  F r = s2.sub(s1).dbl();
  F v = u1.mul(i);
  F x3 = r.sqr().sub(j).sub(v.dbl());
  F y3 = r.mul(v.sub(x3)).sub(s1.mul(j).dbl());
  F z3 = p.z.add(q.z).sqr().sub(z1z1).sub(z2z2).mul(h);
  return {x3, y3, z3};
}

template <class F>
Affine<F> jac_to_affine(const Jacobian<F>& p) {
  if (p.is_inf()) return Affine<F>{};
  F zi = p.z.inv();
  F zi2 = zi.sqr();
  return {p.x.mul(zi2), p.y.mul(zi2.mul(zi)), false};
}

template <class F>
Affine<F> affine_add(const Affine<F>& a, const Affine<F>& b) {
  return jac_to_affine(
      jac_add(Jacobian<F>::from_affine(a), Jacobian<F>::from_affine(b)));
}

template <class F>
Affine<F> affine_neg(const Affine<F>& a) {
  if (a.inf) return a;
  return {a.x, a.y.neg(), false};
}

// k as canonical little-endian limbs.
template <class F>
Affine<F> scalar_mul(std::span<const u64> k, const Affine<F>& base) {
  Jacobian<F> acc = Jacobian<F>::infinity();
  Jacobian<F> b = Jacobian<F>::from_affine(base);
  int top = -1;
  for (int i = int(k.size()) * 64 - 1; i >= 0; i--) {
    if ((k[i / 64] >> (i % 64)) & 1) {
      top = i;
      break;
    }
  }
  for (int i = top; i >= 0; i--) {
    acc = jac_dbl(acc);
    if ((k[i / 64] >> (i % 64)) & 1) acc = jac_add(acc, b);
  }
  return jac_to_affine(acc);
}

template <class F>
bool on_curve(const Affine<F>& a, const F& b_coeff) {
  if (a.inf) return true;
  return a.y.sqr() == a.x.sqr().mul(a.x).add(b_coeff);
}

}  // namespace hiot::bls
