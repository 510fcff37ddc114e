#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hiot {

using Bytes = std::vector<uint8_t>;

inline Bytes to_bytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

inline void append(Bytes& out, std::span<const uint8_t> data) {
  out.insert(out.end(), data.begin(), data.end());
}

inline void put_u32_be(Bytes& out, uint32_t v) {
  out.push_back(uint8_t(v >> 24));
  out.push_back(uint8_t(v >> 16));
  out.push_back(uint8_t(v >> 8));
  out.push_back(uint8_t(v));
}

inline void put_u64_be(Bytes& out, uint64_t v) {
  for (int i = 7; i >= 0; i--) out.push_back(uint8_t(v >> (8 * i)));
}

inline uint32_t get_u32_be(const uint8_t* p) {
  return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) |
         (uint32_t(p[2]) << 8) | uint32_t(p[3]);
}

inline uint64_t get_u64_be(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; i++) v = (v << 8) | p[i];
  return v;
}

// Length-prefixed field encoding used for all hash inputs. Prefix-free by
// construction: every variable-length part carries its 4-byte length.
inline void put_lp(Bytes& out, std::span<const uint8_t> data) {
  put_u32_be(out, uint32_t(data.size()));
  append(out, data);
}

inline std::string hex_encode(std::span<const uint8_t> data) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(data.size() * 2);
  for (uint8_t b : data) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xf]);
  }
  return s;
}

// Returns true iff `needle` occurs as a contiguous byte substring of `hay`.
inline bool contains_bytes(std::span<const uint8_t> hay,
                           std::span<const uint8_t> needle) {
  if (needle.empty() || needle.size() > hay.size()) return false;
  for (size_t i = 0; i + needle.size() <= hay.size(); i++) {
    if (std::memcmp(hay.data() + i, needle.data(), needle.size()) == 0)
      return true;
  }
  return false;
}

}  // namespace hiot
