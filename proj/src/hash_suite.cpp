#include "hiot/hash_suite.hpp"

#include <openssl/crypto.h>

#include <stdexcept>

#include "xof.hpp"

namespace hiot {

HashSuite::HashSuite(BackendPtr backend, size_t n_bits)
    : backend_(std::move(backend)), n_bits_(n_bits) {
  if (n_bits_ == 0 || n_bits_ % 8 != 0)
    throw std::invalid_argument("payload width must be a positive byte count");
}

Scalar HashSuite::to_scalar(
    const char* tag,
    std::initializer_list<std::span<const uint8_t>> parts) const {
  counting::record_hash();
  size_t wide = backend_->scalar_size() + 16;
  for (uint32_t ctr = 0;; ctr++) {
    Bytes framed;
    put_lp(framed, to_bytes(tag));
    for (auto p : parts) put_lp(framed, p);
    put_u32_be(framed, ctr);
    Bytes out(wide);
    detail::shake256(framed, out);
    Scalar s = backend_->scalar_from_wide_be(out);
    if (!s.is_zero()) return s;
  }
}

Scalar HashSuite::h0(std::span<const uint8_t> id) const {
  return to_scalar("H0", {id});
}

Scalar HashSuite::h1(std::span<const uint8_t> msg, const G1Point& point) const {
  Bytes enc = backend_->g1_to_bytes(point);
  return to_scalar("H1", {msg, enc});
}

Scalar HashSuite::h1(std::span<const uint8_t> msg,
                     std::span<const uint8_t> b) const {
  return to_scalar("H1", {msg, b});
}

Scalar HashSuite::h2(std::span<const uint8_t> a,
                     std::span<const uint8_t> b) const {
  return to_scalar("H2", {a, b});
}

Bytes HashSuite::h3(std::span<const uint8_t> x) const {
  counting::record_hash();
  return detail::xof("H3", {x}, n_bytes());
}

Scalar HashSuite::h4(std::span<const uint8_t> m) const {
  return to_scalar("H4", {m});
}

Bytes HashSuite::mac(std::span<const uint8_t> key,
                     std::span<const uint8_t> msg) const {
  counting::record_mac();
  return detail::xof("MAC", {key, msg}, kMacTagBytes);
}

bool HashSuite::mac_verify(std::span<const uint8_t> key,
                           std::span<const uint8_t> msg,
                           std::span<const uint8_t> tag) const {
  return tag_eq(mac(key, msg), tag);
}

bool tag_eq(std::span<const uint8_t> a, std::span<const uint8_t> b) {
  if (a.size() != b.size()) return false;
  return CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

}  // namespace hiot
