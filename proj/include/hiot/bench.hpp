#pragma once

#include <string>

#include "hiot/algebra.hpp"
#include "hiot/counters.hpp"

namespace hiot {

// Published reference costs this construction advertises, used to
// cross-check the instrumented counts (P = pairing, M = G1 scalar
// multiplication, E = G2 exponentiation, H = hash; MACs tracked apart).
inline constexpr const char* kNominalUserAuth = "3M+4H";
inline constexpr const char* kNominalGwnRegistration = "2M+2H";
inline constexpr const char* kNominalSensorTotal = "3P+4M+6H";
inline constexpr size_t kNominalHandshakeBits = 2012;

struct TimingStats {
  double mean_ms = 0;
  double variance_ms2 = 0;
  double min_ms = 0;
  double max_ms = 0;
  uint64_t iterations = 0;
};

struct BenchReport {
  std::string backend;
  uint64_t seed = 0;
  uint64_t iterations = 0;

  // Instrumented operation counts of one deterministic protocol run,
  // bucketed by (entity, phase). Counts are intercepted at the algebra
  // and hash layers, never annotated by hand.
  OpCounter counts;

  TimingStats registration_time;  // user + sensor registration, per run
  TimingStats auth_time;          // request + handling + confirmation

  size_t request_bytes = 0;        // measured service-request frame
  size_t confirm_bytes = 0;        // measured confirmation frame
  size_t analytic_request_bytes = 0;
  size_t analytic_confirm_bytes = 0;
  size_t handshake_bits = 0;       // request + confirmation, on the wire
  size_t nominal_handshake_bits = kNominalHandshakeBits;

  // Deviations of measured counts from the nominal figures, e.g. the
  // gateway's extra hash. Empty strings mean exact agreement.
  std::string gwn_delta_note;
  std::string user_delta_note;
  std::string sensor_delta_note;

  std::string to_json() const;
  std::string to_text() const;
};

// Runs `iterations` timed handshakes (plus one counted run) on the given
// backend. Deterministic counts; timings are machine-dependent.
BenchReport run_benchmark(BackendPtr backend, uint64_t iterations,
                          uint64_t seed);

}  // namespace hiot
