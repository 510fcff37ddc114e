#pragma once

#include <vector>

#include "hiot/bytes.hpp"
#include "hiot/rng.hpp"

namespace hiot {

// Fault injected on one in-flight frame. Reorder applies a seeded jitter
// so concurrent frames can overtake each other deterministically.
struct Fault {
  enum class Kind : uint8_t { None, Delay, Duplicate, Drop, Reorder };
  Kind kind = Kind::None;
  int64_t delay_ms = 0;

  static Fault none() { return {}; }
  static Fault delay(int64_t ms) { return {Kind::Delay, ms}; }
  static Fault duplicate() { return {Kind::Duplicate, 0}; }
  static Fault drop() { return {Kind::Drop, 0}; }
  static Fault reorder() { return {Kind::Reorder, 0}; }
};

struct Delivery {
  uint64_t at_ms = 0;
  Bytes frame;
};

// Deterministic in-process network: turns a sent frame into time-stamped
// deliveries under the requested fault. Duplicates are byte-identical.
class SimNet {
 public:
  explicit SimNet(uint64_t seed, uint64_t base_latency_ms = 5)
      : rng_(seed), latency_(base_latency_ms) {}

  std::vector<Delivery> send(uint64_t now_ms, Bytes frame,
                             Fault fault = Fault::none());

  // Seeded Fisher-Yates shuffle for reorder scenarios.
  void shuffle(std::vector<Delivery>& batch);

 private:
  DrbgRng rng_;
  uint64_t latency_;
};

}  // namespace hiot
