#pragma once

#include <openssl/evp.h>

#include <span>
#include <stdexcept>
#include <vector>

#include "hiot/bytes.hpp"

namespace hiot::detail {

// One-shot SHAKE256 over already-framed input.
inline void shake256(std::span<const uint8_t> input, std::span<uint8_t> out) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw std::runtime_error("EVP_MD_CTX_new failed");
  bool ok = EVP_DigestInit_ex(ctx, EVP_shake256(), nullptr) == 1 &&
            EVP_DigestUpdate(ctx, input.data(), input.size()) == 1 &&
            EVP_DigestFinalXOF(ctx, out.data(), out.size()) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("SHAKE256 evaluation failed");
}

// Domain-separated XOF: SHAKE256(lp(tag) || lp(part_1) || ... || lp(part_k)).
// Length prefixes make the framing prefix-free, so distinct part vectors
// never collide by concatenation ambiguity.
inline Bytes xof(std::string_view tag,
                 std::initializer_list<std::span<const uint8_t>> parts,
                 size_t outlen) {
  Bytes framed;
  put_lp(framed, std::span<const uint8_t>(
                     reinterpret_cast<const uint8_t*>(tag.data()), tag.size()));
  for (auto part : parts) put_lp(framed, part);
  Bytes out(outlen);
  shake256(framed, out);
  return out;
}

}  // namespace hiot::detail
