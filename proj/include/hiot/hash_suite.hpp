#pragma once

#include <span>

#include "hiot/algebra.hpp"
#include "hiot/bytes.hpp"

namespace hiot {

constexpr size_t kMacTagBytes = 32;

// The five protocol hash functions plus the MAC, all instantiated from
// SHAKE256 under distinct domain tags ("H0".."H4", "MAC"). Inputs are
// length-prefixed, so the encodings are prefix-free. Scalar-valued hashes
// reduce a wide output into Z_q* and re-derive with a counter in the
// (never observed) case the reduction hits zero.
class HashSuite {
 public:
  HashSuite(BackendPtr backend, size_t n_bits);

  size_t n_bits() const { return n_bits_; }
  size_t n_bytes() const { return n_bits_ / 8; }

  // {0,1}* -> Z_q*
  Scalar h0(std::span<const uint8_t> id) const;
  // {0,1}* x G1 -> Z_q*
  Scalar h1(std::span<const uint8_t> msg, const G1Point& point) const;
  // Raw two-part form of H1, for digests whose second part mixes a group
  // element with other fields.
  Scalar h1(std::span<const uint8_t> msg, std::span<const uint8_t> b) const;
  // {0,1}* x {0,1}* -> Z_q*
  Scalar h2(std::span<const uint8_t> a, std::span<const uint8_t> b) const;
  // {0,1}* -> {0,1}^n
  Bytes h3(std::span<const uint8_t> x) const;
  // {0,1}* -> Z_q*
  Scalar h4(std::span<const uint8_t> m) const;

  Bytes mac(std::span<const uint8_t> key, std::span<const uint8_t> msg) const;
  // Constant-time tag comparison.
  bool mac_verify(std::span<const uint8_t> key, std::span<const uint8_t> msg,
                  std::span<const uint8_t> tag) const;

  const PairingBackend& backend() const { return *backend_; }

 private:
  Scalar to_scalar(const char* tag,
                   std::initializer_list<std::span<const uint8_t>> parts) const;

  BackendPtr backend_;
  size_t n_bits_;
};

// Constant-time equality for fixed-width tags and keys.
bool tag_eq(std::span<const uint8_t> a, std::span<const uint8_t> b);

inline Bytes xor_bytes(std::span<const uint8_t> a, std::span<const uint8_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("xor width mismatch");
  Bytes out(a.size());
  for (size_t i = 0; i < a.size(); i++) out[i] = a[i] ^ b[i];
  return out;
}

}  // namespace hiot
