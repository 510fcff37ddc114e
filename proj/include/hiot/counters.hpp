#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace hiot {

enum class Entity : uint8_t { User = 0, Gwn = 1, Sensor = 2 };
enum class Phase : uint8_t {
  Setup = 0,
  Registration = 1,
  Authentication = 2,
  Confirmation = 3,
};

constexpr size_t kEntityCount = 3;
constexpr size_t kPhaseCount = 4;

const char* entity_name(Entity e);
const char* phase_name(Phase p);

// One (entity, phase) bucket. Only group-level and hash-level operations are
// tracked: pairings (P), G1 scalar multiplications (M), G2 exponentiations
// (E) and hash evaluations (H). MACs get their own counter so hash totals
// can be read with or without them. Scalar field ops and XORs are free.
struct OpCounts {
  uint64_t pairings = 0;
  uint64_t g1_muls = 0;
  uint64_t g2_exps = 0;
  uint64_t hashes = 0;
  uint64_t macs = 0;

  OpCounts& operator+=(const OpCounts& o) {
    pairings += o.pairings;
    g1_muls += o.g1_muls;
    g2_exps += o.g2_exps;
    hashes += o.hashes;
    macs += o.macs;
    return *this;
  }
  bool operator==(const OpCounts&) const = default;

  // Renders e.g. "3P+4M+6H" (zero terms omitted, MACs shown as +kMAC).
  std::string brief() const;
};

class OpCounter {
 public:
  OpCounts& at(Entity e, Phase p) {
    return buckets_[size_t(e) * kPhaseCount + size_t(p)];
  }
  const OpCounts& at(Entity e, Phase p) const {
    return buckets_[size_t(e) * kPhaseCount + size_t(p)];
  }
  OpCounts total() const {
    OpCounts t;
    for (const auto& b : buckets_) t += b;
    return t;
  }
  void reset() { buckets_ = {}; }

 private:
  std::array<OpCounts, kEntityCount * kPhaseCount> buckets_{};
};

// Interception hooks used by the algebra and hash layers. A scope installs
// itself as the thread-local sink; with no scope active nothing is counted,
// so instrumentation never perturbs protocol decisions.
namespace counting {
void record_pairing();
void record_g1_mul();
void record_g2_exp();
void record_hash();
void record_mac();
}  // namespace counting

// RAII: routes counted operations on this thread into counter.at(e, p).
// Scopes nest; the innermost wins.
class CountScope {
 public:
  CountScope(OpCounter& counter, Entity e, Phase p);
  ~CountScope();
  CountScope(const CountScope&) = delete;
  CountScope& operator=(const CountScope&) = delete;

 private:
  OpCounts* prev_;
};

}  // namespace hiot
