#pragma once

#include <atomic>
#include <stdexcept>

#include "hiot/algebra.hpp"

namespace hiot::detail {

struct BackendAccess {
  template <class T>
  static T& as(G1Point& p) {
    static_assert(sizeof(T) <= 320);
    return *reinterpret_cast<T*>(p.store_.data());
  }
  template <class T>
  static const T& as(const G1Point& p) {
    return *reinterpret_cast<const T*>(p.store_.data());
  }
  template <class T>
  static T& as(G2Element& e) {
    static_assert(sizeof(T) <= 584);
    return *reinterpret_cast<T*>(e.store_.data());
  }
  template <class T>
  static const T& as(const G2Element& e) {
    return *reinterpret_cast<const T*>(e.store_.data());
  }

  static void set_owner(G1Point& p, uint32_t id) { p.owner_ = id; }
  static void set_owner(G2Element& e, uint32_t id) { e.owner_ = id; }
  static uint32_t owner(const G1Point& p) { return p.owner_; }
  static uint32_t owner(const G2Element& e) { return e.owner_; }

  static uint32_t fresh_backend_id() {
    static std::atomic<uint32_t> next{1};
    return next.fetch_add(1);
  }
};

inline void require_owner(uint32_t have, uint32_t want, const char* what) {
  if (have != want)
    throw std::logic_error(std::string(what) +
                           ": element does not belong to this backend");
}

}  // namespace hiot::detail
