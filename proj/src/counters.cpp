#include "hiot/counters.hpp"

namespace hiot {

namespace {
thread_local OpCounts* t_sink = nullptr;
}

const char* entity_name(Entity e) {
  switch (e) {
    case Entity::User: return "user";
    case Entity::Gwn: return "gwn";
    case Entity::Sensor: return "sensor";
  }
  return "?";
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Setup: return "setup";
    case Phase::Registration: return "registration";
    case Phase::Authentication: return "authentication";
    case Phase::Confirmation: return "confirmation";
  }
  return "?";
}

std::string OpCounts::brief() const {
  std::string s;
  auto term = [&s](uint64_t n, const char* sym) {
    if (n == 0) return;
    if (!s.empty()) s += "+";
    s += std::to_string(n) + sym;
  };
  term(pairings, "P");
  term(g1_muls, "M");
  term(g2_exps, "E");
  term(hashes, "H");
  term(macs, "MAC");
  if (s.empty()) s = "0";
  return s;
}

namespace counting {
void record_pairing() {
  if (t_sink) t_sink->pairings++;
}
void record_g1_mul() {
  if (t_sink) t_sink->g1_muls++;
}
void record_g2_exp() {
  if (t_sink) t_sink->g2_exps++;
}
void record_hash() {
  if (t_sink) t_sink->hashes++;
}
void record_mac() {
  if (t_sink) t_sink->macs++;
}
}  // namespace counting

CountScope::CountScope(OpCounter& counter, Entity e, Phase p)
    : prev_(t_sink) {
  t_sink = &counter.at(e, p);
}

CountScope::~CountScope() { t_sink = prev_; }

}  // namespace hiot
