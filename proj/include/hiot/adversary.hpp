#pragma once

#include <map>
#include <string>
#include <vector>

#include "hiot/harness.hpp"

namespace hiot {

// Outcome of one scripted attack scenario. Deterministic under (backend,
// seed); `pass` means the defense held on every step.
struct ScenarioReport {
  std::string name;
  std::string backend;
  uint64_t seed = 0;
  bool pass = false;
  std::vector<std::string> checks;          // "ok: ..." / "FAIL: ..." lines
  std::map<std::string, uint64_t> metrics;  // counters for machine readers

  void check(bool ok, const std::string& what);
  std::string to_text() const;
  std::string to_json() const;
};

// Within-window byte-identical replay must hit the cache; out-of-window
// delivery must hit the timestamp check.
ScenarioReport run_replay_attack(BackendPtr backend, uint64_t seed);

// `volume` bogus requests, each well-formed but carrying a guessed
// account point: all must die before session-key or MAC work, with zero
// pairings spent; an interleaved honest request must still succeed.
ScenarioReport run_dos_attack(BackendPtr backend, uint64_t seed,
                              size_t volume = 1000);

// Every single-bit flip of a pinned service request must be rejected by
// the sensor or fail MAC confirmation at the user. `max_flips` 0 means
// exhaustive over the whole frame.
ScenarioReport run_tamper_attack(BackendPtr backend, uint64_t seed,
                                 size_t max_flips = 0);

// Forgery bombardment without any private key: random tuples plus
// structured attempts (replayed commit with fresh c, stolen account with
// self-chosen keys). Zero acceptances expected.
ScenarioReport run_impersonation_attack(BackendPtr backend, uint64_t seed,
                                        size_t attempts = 10000);

// No authentication-phase frame may contain the user identity or account
// encodings; account-protection values must never repeat.
ScenarioReport run_anonymity_check(BackendPtr backend, uint64_t seed,
                                   size_t sessions = 100);

// Dispatch by scenario name: replay|dos|tamper|impersonation|anonymity.
// `scale` overrides the scenario's volume/attempts/sessions when nonzero.
ScenarioReport run_scenario(const std::string& name, BackendPtr backend,
                            uint64_t seed, size_t scale = 0);

std::vector<std::string> scenario_names();

}  // namespace hiot
