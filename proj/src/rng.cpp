#include "hiot/rng.hpp"

#include <openssl/rand.h>

#include <cstring>
#include <stdexcept>

#include "xof.hpp"

namespace hiot {

DrbgRng::DrbgRng(uint64_t seed) : seed_(seed) { block_.reserve(256); }

void DrbgRng::refill() {
  Bytes seed_bytes;
  put_u64_be(seed_bytes, seed_);
  Bytes ctr_bytes;
  put_u64_be(ctr_bytes, counter_++);
  block_ = detail::xof("DRBG", {seed_bytes, ctr_bytes}, 256);
  used_ = 0;
}

void DrbgRng::fill(std::span<uint8_t> out) {
  size_t off = 0;
  while (off < out.size()) {
    if (used_ == block_.size()) refill();
    size_t take = std::min(out.size() - off, block_.size() - used_);
    std::memcpy(out.data() + off, block_.data() + used_, take);
    used_ += take;
    off += take;
  }
}

void SystemRng::fill(std::span<uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), int(out.size())) != 1)
    throw std::runtime_error("system entropy source failed");
}

}  // namespace hiot
