#include <cstring>
#include <stdexcept>

#include "backend_access.hpp"
#include "bls/pairing.hpp"
#include "hiot/algebra.hpp"

namespace hiot {

namespace {

using bls::Fp;
using bls::Fp12;
using bls::Fp2;
using bls::Fr;
using bls::u64;

constexpr uint32_t kBlsOwnerId = 1;

// A protocol G1 element: the E(Fp) point plus, when the element was built
// locally from the generator, its mirror under the same scalar chain on
// the twist E'(Fp2). The mirror is what feeds the second pairing slot;
// points decoded from bytes have none and can only be paired on the left.
struct MirroredPoint {
  bls::G1Affine a;
  bls::G2Affine m;
  bool has_mirror = false;
};
static_assert(sizeof(MirroredPoint) <= 320);
static_assert(sizeof(Fp12) <= 584);

bool raw_gt(const std::array<u64, 6>& a, const std::array<u64, 6>& b) {
  for (size_t i = 6; i-- > 0;) {
    if (a[i] > b[i]) return true;
    if (a[i] < b[i]) return false;
  }
  return false;
}

class BlsBackend final : public PairingBackend {
 public:
  BlsBackend() : ctx_(bls::Ctx::get()) {}

  std::string name() const override { return "bls12-381"; }
  bool has_dlog_oracle() const override { return false; }
  size_t scalar_size() const override { return 32; }
  size_t g1_size() const override { return 48; }
  size_t g2_size() const override { return 576; }

  Bytes order_bytes() const override {
    Bytes b(32);
    for (size_t i = 0; i < 4; i++)
      for (size_t j = 0; j < 8; j++)
        b[(3 - i) * 8 + j] = uint8_t(ctx_.r_limbs[i] >> (8 * (7 - j)));
    return b;
  }

  // --- scalars ---

  Scalar scalar_zero() const override { return Scalar{}; }
  Scalar scalar_one() const override { return scalar_from_u64(1); }
  Scalar scalar_from_u64(uint64_t v) const override {
    Scalar s;
    s.v[0] = v;
    return s;
  }

  Scalar scalar_from_wide_be(std::span<const uint8_t> bytes) const override {
    // Horner over 256-bit chunks; from_raw reduces each chunk mod r.
    static const Fr shift = [] {
      std::array<u64, 4> one{1, 0, 0, 0};
      for (int i = 0; i < 256; i++) Fr::raw_dbl_mod(one);
      return Fr::from_raw(one);
    }();
    size_t nchunks = (bytes.size() + 31) / 32;
    Fr acc = Fr::zero();
    for (size_t c = 0; c < nchunks; c++) {
      size_t end = bytes.size() - (nchunks - 1 - c) * 32;
      size_t begin = end >= 32 ? end - 32 : 0;
      if (c == 0) begin = 0;
      std::array<u64, 4> raw{};
      for (size_t k = begin; k < end; k++)
        raw[(end - 1 - k) / 8] |= u64(bytes[k]) << (8 * ((end - 1 - k) % 8));
      acc = acc.mul(shift).add(Fr::from_raw(raw));
    }
    return from_fr(acc);
  }

  Scalar sc_add(const Scalar& a, const Scalar& b) const override {
    return from_fr(to_fr(a).add(to_fr(b)));
  }
  Scalar sc_sub(const Scalar& a, const Scalar& b) const override {
    return from_fr(to_fr(a).sub(to_fr(b)));
  }
  Scalar sc_mul(const Scalar& a, const Scalar& b) const override {
    return from_fr(to_fr(a).mul(to_fr(b)));
  }
  Scalar sc_neg(const Scalar& a) const override {
    return from_fr(to_fr(a).neg());
  }
  Scalar sc_inv(const Scalar& a) const override {
    if (a.is_zero()) throw std::invalid_argument("inverse of zero");
    return from_fr(to_fr(a).inv());
  }

  Bytes scalar_to_bytes(const Scalar& s) const override {
    Bytes b(32);
    for (size_t i = 0; i < 4; i++)
      for (size_t j = 0; j < 8; j++)
        b[(3 - i) * 8 + j] = uint8_t(s.v[i] >> (8 * (7 - j)));
    return b;
  }

  std::optional<Scalar> scalar_from_bytes(
      std::span<const uint8_t> bytes) const override {
    if (bytes.size() != 32) return std::nullopt;
    std::array<u64, 4> raw{};
    for (size_t i = 0; i < 4; i++)
      for (size_t j = 0; j < 8; j++)
        raw[3 - i] = (raw[3 - i] << 8) | bytes[i * 8 + j];
    if (Fr::raw_geq_mod(raw)) return std::nullopt;
    Scalar s;
    s.v = raw;
    return s;
  }

  // --- G1 ---

  G1Point g1_generator() const override {
    MirroredPoint p{ctx_.g1_gen, ctx_.g2_gen, true};
    return wrap(p);
  }
  G1Point g1_identity() const override {
    MirroredPoint p;
    p.has_mirror = true;
    return wrap(p);
  }
  bool g1_is_identity(const G1Point& x) const override {
    return unwrap(x).a.inf;
  }
  G1Point g1_add(const G1Point& a, const G1Point& b) const override {
    const auto &pa = unwrap(a), &pb = unwrap(b);
    MirroredPoint r;
    r.a = bls::affine_add(pa.a, pb.a);
    r.has_mirror = pa.has_mirror && pb.has_mirror;
    if (r.has_mirror) r.m = bls::affine_add(pa.m, pb.m);
    return wrap(r);
  }
  G1Point g1_sub(const G1Point& a, const G1Point& b) const override {
    return g1_add(a, g1_neg(b));
  }
  G1Point g1_neg(const G1Point& a) const override {
    const auto& pa = unwrap(a);
    MirroredPoint r;
    r.a = bls::affine_neg(pa.a);
    r.has_mirror = pa.has_mirror;
    if (r.has_mirror) r.m = bls::affine_neg(pa.m);
    return wrap(r);
  }
  bool g1_eq(const G1Point& a, const G1Point& b) const override {
    return unwrap(a).a == unwrap(b).a;
  }

  Bytes g1_to_bytes(const G1Point& x) const override {
    const auto& p = unwrap(x);
    Bytes out(48, 0);
    if (p.a.inf) {
      out[0] = 0xc0;
      return out;
    }
    p.a.x.to_be_bytes(out);
    out[0] |= 0x80;
    if (raw_gt(p.a.y.to_raw(), ctx_.p_half)) out[0] |= 0x20;
    return out;
  }

  std::optional<G1Point> g1_from_bytes(
      std::span<const uint8_t> bytes) const override {
    if (bytes.size() != 48) return std::nullopt;
    uint8_t flags = bytes[0] & 0xe0;
    if (!(flags & 0x80)) return std::nullopt;  // uncompressed not used
    if (flags & 0x40) {
      // infinity: every other bit must be clear
      if (bytes[0] != 0xc0) return std::nullopt;
      for (size_t i = 1; i < 48; i++)
        if (bytes[i]) return std::nullopt;
      return g1_identity();
    }
    std::array<uint8_t, 48> xb;
    std::memcpy(xb.data(), bytes.data(), 48);
    xb[0] &= 0x1f;
    auto x = Fp::from_be_bytes(xb);
    if (!x) return std::nullopt;
    Fp rhs = x->sqr().mul(*x).add(ctx_.b1);
    Fp y = rhs.pow(ctx_.sqrt_exp);
    if (!(y.sqr() == rhs)) return std::nullopt;  // x not on the curve
    bool want_big = (flags & 0x20) != 0;
    if (raw_gt(y.to_raw(), ctx_.p_half) != want_big) y = y.neg();
    MirroredPoint p;
    p.a = {*x, y, false};
    p.has_mirror = false;
    if (!bls::scalar_mul<Fp>(ctx_.r_limbs, p.a).inf)
      return std::nullopt;  // not in the prime-order subgroup
    return wrap(p);
  }

  // --- G2 ---

  G2Element g2_identity() const override { return wrap_gt(Fp12::one()); }
  G2Element g2_mul(const G2Element& a, const G2Element& b) const override {
    return wrap_gt(unwrap_gt(a).mul(unwrap_gt(b)));
  }
  bool g2_eq(const G2Element& a, const G2Element& b) const override {
    return unwrap_gt(a) == unwrap_gt(b);
  }
  Bytes g2_to_bytes(const G2Element& x) const override {
    const Fp12& f = unwrap_gt(x);
    Bytes out(576);
    size_t off = 0;
    const Fp* coords[12] = {
        &f.c0.c0.c0, &f.c0.c0.c1, &f.c0.c1.c0, &f.c0.c1.c1,
        &f.c0.c2.c0, &f.c0.c2.c1, &f.c1.c0.c0, &f.c1.c0.c1,
        &f.c1.c1.c0, &f.c1.c1.c1, &f.c1.c2.c0, &f.c1.c2.c1};
    for (const Fp* c : coords) {
      c->to_be_bytes(std::span<uint8_t>(out.data() + off, 48));
      off += 48;
    }
    return out;
  }

  uint64_t g1_dlog(const G1Point&) const override {
    throw std::logic_error("bls12-381 backend has no dlog oracle");
  }

 protected:
  G1Point do_g1_mul(const Scalar& k, const G1Point& x) const override {
    const auto& p = unwrap(x);
    MirroredPoint r;
    r.a = bls::scalar_mul<Fp>(k.v, p.a);
    r.has_mirror = p.has_mirror;
    if (r.has_mirror) r.m = bls::scalar_mul<Fp2>(k.v, p.m);
    return wrap(r);
  }
  G2Element do_g2_exp(const G2Element& base, const Scalar& k) const override {
    return wrap_gt(unwrap_gt(base).pow(k.v));
  }
  G2Element do_pair(const G1Point& x, const G1Point& y) const override {
    const auto &px = unwrap(x), &py = unwrap(y);
    if (!py.has_mirror)
      throw std::logic_error(
          "pair: right operand was not derived locally and has no mirror");
    return wrap_gt(bls::pairing(px.a, py.m));
  }

 private:
  Fr to_fr(const Scalar& s) const { return Fr::from_raw(s.v); }
  Scalar from_fr(const Fr& f) const {
    Scalar s;
    s.v = f.to_raw();
    return s;
  }

  G1Point wrap(const MirroredPoint& p) const {
    G1Point out;
    detail::BackendAccess::as<MirroredPoint>(out) = p;
    detail::BackendAccess::set_owner(out, kBlsOwnerId);
    return out;
  }
  const MirroredPoint& unwrap(const G1Point& p) const {
    detail::require_owner(detail::BackendAccess::owner(p), kBlsOwnerId,
                          "bls g1");
    return detail::BackendAccess::as<MirroredPoint>(p);
  }
  G2Element wrap_gt(const Fp12& f) const {
    G2Element out;
    detail::BackendAccess::as<Fp12>(out) = f;
    detail::BackendAccess::set_owner(out, kBlsOwnerId);
    return out;
  }
  const Fp12& unwrap_gt(const G2Element& e) const {
    detail::require_owner(detail::BackendAccess::owner(e), kBlsOwnerId,
                          "bls g2");
    return detail::BackendAccess::as<Fp12>(e);
  }

  const bls::Ctx& ctx_;
};

}  // namespace

BackendPtr make_bls381_backend() { return std::make_shared<BlsBackend>(); }

}  // namespace hiot
