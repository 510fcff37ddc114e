#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "hiot/bytes.hpp"
#include "hiot/counters.hpp"
#include "hiot/rng.hpp"

namespace hiot {

// Field element of Z_q for the active backend's group order q. Limbs are
// little-endian and always canonical (value < q). The same struct serves
// both backends; unused high limbs stay zero.
struct Scalar {
  std::array<uint64_t, 4> v{};

  bool operator==(const Scalar&) const = default;
  bool is_zero() const { return (v[0] | v[1] | v[2] | v[3]) == 0; }
};

namespace detail {
struct BackendAccess;
}

// Element of the additive group G1. Storage is opaque and interpreted by
// the owning backend; points from different backend instances never mix.
class G1Point {
 public:
  G1Point() = default;
  bool initialized() const { return owner_ != 0; }

 private:
  friend struct detail::BackendAccess;
  alignas(8) std::array<unsigned char, 320> store_{};
  uint32_t owner_ = 0;
};

// Element of the multiplicative group G2 (pairing target).
class G2Element {
 public:
  G2Element() = default;
  bool initialized() const { return owner_ != 0; }

 private:
  friend struct detail::BackendAccess;
  alignas(8) std::array<unsigned char, 584> store_{};
  uint32_t owner_ = 0;
};

// Symmetric bilinear pairing abstraction: G1 additive, G2 multiplicative,
// scalars mod a prime q, pair(aP, bP) = pair(P,P)^(ab).
//
// Two implementations exist. The toy backend keeps discrete logs in the
// clear (capability `dlog oracle`) and is used for tests and frozen
// vectors only. The production backend runs on BLS12-381; its "symmetric"
// G1 elements internally carry a mirrored component in each source group
// of the asymmetric pairing, which is sound because every group element in
// the protocol is derived from the generator by public scalar chains.
//
// All operations are pure; instances are safe to share across threads.
class PairingBackend {
 public:
  virtual ~PairingBackend() = default;

  virtual std::string name() const = 0;
  virtual bool has_dlog_oracle() const = 0;
  virtual size_t scalar_size() const = 0;  // canonical encoding width
  virtual size_t g1_size() const = 0;
  virtual size_t g2_size() const = 0;
  // Canonical big-endian encoding of the group order q.
  virtual Bytes order_bytes() const = 0;

  // --- scalars (Z_q) ---
  virtual Scalar scalar_zero() const = 0;
  virtual Scalar scalar_one() const = 0;
  virtual Scalar scalar_from_u64(uint64_t v) const = 0;
  // Reduces an arbitrary-length big-endian integer mod q.
  virtual Scalar scalar_from_wide_be(std::span<const uint8_t> bytes) const = 0;
  virtual Scalar sc_add(const Scalar& a, const Scalar& b) const = 0;
  virtual Scalar sc_sub(const Scalar& a, const Scalar& b) const = 0;
  virtual Scalar sc_mul(const Scalar& a, const Scalar& b) const = 0;
  virtual Scalar sc_neg(const Scalar& a) const = 0;
  // Multiplicative inverse; throws std::invalid_argument on zero.
  virtual Scalar sc_inv(const Scalar& a) const = 0;
  // Uniform over Z_q* (never zero).
  Scalar scalar_random(Rng& rng) const;
  virtual Bytes scalar_to_bytes(const Scalar& s) const = 0;
  virtual std::optional<Scalar> scalar_from_bytes(
      std::span<const uint8_t> bytes) const = 0;

  // --- G1 ---
  virtual G1Point g1_generator() const = 0;
  virtual G1Point g1_identity() const = 0;
  virtual bool g1_is_identity(const G1Point& x) const = 0;
  virtual G1Point g1_add(const G1Point& a, const G1Point& b) const = 0;
  virtual G1Point g1_sub(const G1Point& a, const G1Point& b) const = 0;
  virtual G1Point g1_neg(const G1Point& a) const = 0;
  virtual bool g1_eq(const G1Point& a, const G1Point& b) const = 0;
  virtual Bytes g1_to_bytes(const G1Point& x) const = 0;
  virtual std::optional<G1Point> g1_from_bytes(
      std::span<const uint8_t> bytes) const = 0;

  // Counted as one M.
  G1Point g1_mul(const Scalar& k, const G1Point& x) const {
    counting::record_g1_mul();
    return do_g1_mul(k, x);
  }

  // --- G2 ---
  virtual G2Element g2_identity() const = 0;
  virtual G2Element g2_mul(const G2Element& a, const G2Element& b) const = 0;
  virtual bool g2_eq(const G2Element& a, const G2Element& b) const = 0;
  virtual Bytes g2_to_bytes(const G2Element& x) const = 0;

  // Counted as one E.
  G2Element g2_exp(const G2Element& base, const Scalar& k) const {
    counting::record_g2_exp();
    return do_g2_exp(base, k);
  }

  // Counted as one P.
  G2Element pair(const G1Point& x, const G1Point& y) const {
    counting::record_pairing();
    return do_pair(x, y);
  }

  // Discrete log of a G1 point relative to the generator. Only the toy
  // backend supports this; others throw std::logic_error.
  virtual uint64_t g1_dlog(const G1Point& x) const = 0;

 protected:
  virtual G1Point do_g1_mul(const Scalar& k, const G1Point& x) const = 0;
  virtual G2Element do_g2_exp(const G2Element& base, const Scalar& k) const = 0;
  virtual G2Element do_pair(const G1Point& x, const G1Point& y) const = 0;
};

using BackendPtr = std::shared_ptr<const PairingBackend>;

// Dlog-transparent toy group of prime order q (default 1009). q must be an
// odd prime below 2^62.
BackendPtr make_toy_backend(uint64_t q = 1009);

// A 61-bit prime toy modulus for tests that need collision headroom the
// default q=1009 cannot give (birthday-scale distinctness, bit-flip sweeps).
constexpr uint64_t kLargeToyPrime = 2305843009213693951ull;  // 2^61 - 1

// BLS12-381 production backend (~128-bit security).
BackendPtr make_bls381_backend();

// Resolves "toy" / "toy-large" / "production" (alias "bls12-381").
BackendPtr make_backend(const std::string& name);

}  // namespace hiot
