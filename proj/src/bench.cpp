#include "hiot/bench.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>

#include "hiot/harness.hpp"

namespace hiot {

namespace {

class StatsAcc {
 public:
  void add(double x) {
    n_++;
    double d = x - mean_;
    mean_ += d / double(n_);
    m2_ += d * (x - mean_);
    min_ = n_ == 1 ? x : std::min(min_, x);
    max_ = n_ == 1 ? x : std::max(max_, x);
  }
  TimingStats finish() const {
    TimingStats t;
    t.iterations = n_;
    t.mean_ms = mean_;
    t.variance_ms2 = n_ > 1 ? m2_ / double(n_ - 1) : 0;
    t.min_ms = min_;
    t.max_ms = max_;
    return t;
  }

 private:
  uint64_t n_ = 0;
  double mean_ = 0, m2_ = 0, min_ = 0, max_ = 0;
};

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

std::string delta_note(const OpCounts& measured, const char* nominal,
                       const std::string& scope) {
  if (measured.brief() == nominal) return "";
  return scope + " measured " + measured.brief() + " vs nominal " + nominal;
}

nlohmann::json counts_json(const OpCounts& c) {
  return {{"pairings", c.pairings},
          {"g1_muls", c.g1_muls},
          {"g2_exps", c.g2_exps},
          {"hashes", c.hashes},
          {"macs", c.macs},
          {"brief", c.brief()}};
}

nlohmann::json timing_json(const TimingStats& t) {
  return {{"mean_ms", t.mean_ms},
          {"variance_ms2", t.variance_ms2},
          {"min_ms", t.min_ms},
          {"max_ms", t.max_ms},
          {"iterations", t.iterations}};
}

}  // namespace

BenchReport run_benchmark(BackendPtr backend, uint64_t iterations,
                          uint64_t seed) {
  BenchReport rep;
  rep.backend = backend->name();
  rep.seed = seed;
  rep.iterations = iterations;

  // Counted run: one full registration + handshake with per-party
  // counters, then merged into one bucketed view.
  {
    Harness h(backend, seed);
    auto res = h.handshake();
    if (!res.established) throw std::runtime_error("benchmark handshake failed");
    rep.request_bytes = res.request_frame.size();
    rep.confirm_bytes = res.reply_frame.size();
    auto merge = [&](OpCounter& from) {
      for (size_t e = 0; e < kEntityCount; e++)
        for (size_t p = 0; p < kPhaseCount; p++)
          rep.counts.at(Entity(e), Phase(p)) += from.at(Entity(e), Phase(p));
    };
    merge(h.gwn().counters());
    merge(h.user().counters());
    merge(h.sensor().counters());

    WireCodec codec = h.codec();
    rep.analytic_request_bytes = codec.service_request_size();
    rep.analytic_confirm_bytes = codec.mac_confirm_size();
    rep.handshake_bits = (rep.request_bytes + rep.confirm_bytes) * 8;
  }

  rep.user_delta_note = delta_note(
      rep.counts.at(Entity::User, Phase::Authentication), kNominalUserAuth,
      "user authentication");
  rep.gwn_delta_note = delta_note(
      rep.counts.at(Entity::Gwn, Phase::Registration), kNominalGwnRegistration,
      "gateway registration");
  {
    OpCounts sensor_total;
    sensor_total += rep.counts.at(Entity::Sensor, Phase::Registration);
    sensor_total += rep.counts.at(Entity::Sensor, Phase::Authentication);
    rep.sensor_delta_note =
        delta_note(sensor_total, kNominalSensorTotal, "sensor total");
  }

  // Timed runs. Registration cost is dominated by the sensor's pairing
  // check; authentication runs pairing-free.
  StatsAcc reg_stats, auth_stats;
  for (uint64_t i = 0; i < iterations; i++) {
    auto t0 = std::chrono::steady_clock::now();
    Harness h(backend, seed + i);
    reg_stats.add(ms_since(t0));

    auto t1 = std::chrono::steady_clock::now();
    auto res = h.handshake();
    auth_stats.add(ms_since(t1));
    if (!res.established)
      throw std::runtime_error("benchmark handshake failed");
  }
  rep.registration_time = reg_stats.finish();
  rep.auth_time = auth_stats.finish();
  return rep;
}

std::string BenchReport::to_json() const {
  nlohmann::json j;
  j["backend"] = backend;
  j["seed"] = seed;
  j["iterations"] = iterations;
  nlohmann::json jc;
  for (size_t e = 0; e < kEntityCount; e++) {
    nlohmann::json row;
    for (size_t p = 0; p < kPhaseCount; p++) {
      const OpCounts& c = counts.at(Entity(e), Phase(p));
      if (c == OpCounts{}) continue;
      row[phase_name(Phase(p))] = counts_json(c);
    }
    jc[entity_name(Entity(e))] = row;
  }
  j["counts"] = jc;
  j["timing"] = {{"registration", timing_json(registration_time)},
                 {"authentication", timing_json(auth_time)}};
  j["communication"] = {
      {"request_bytes", request_bytes},
      {"confirm_bytes", confirm_bytes},
      {"analytic_request_bytes", analytic_request_bytes},
      {"analytic_confirm_bytes", analytic_confirm_bytes},
      {"handshake_bits", handshake_bits},
      {"nominal_handshake_bits", nominal_handshake_bits},
  };
  nlohmann::json deltas = nlohmann::json::array();
  for (const std::string* note : {&user_delta_note, &gwn_delta_note,
                                  &sensor_delta_note})
    if (!note->empty()) deltas.push_back(*note);
  j["count_deltas"] = deltas;
  j["nominal"] = {{"user_authentication", kNominalUserAuth},
                  {"gwn_registration", kNominalGwnRegistration},
                  {"sensor_total", kNominalSensorTotal}};
  return j.dump(2);
}

std::string BenchReport::to_text() const {
  std::string s;
  s += "benchmark [" + backend + ", seed=" + std::to_string(seed) + "]\n";
  s += "operation counts (P/M/E/H, MACs apart):\n";
  for (size_t e = 0; e < kEntityCount; e++) {
    for (size_t p = 0; p < kPhaseCount; p++) {
      const OpCounts& c = counts.at(Entity(e), Phase(p));
      if (c == OpCounts{}) continue;
      s += "  " + std::string(entity_name(Entity(e))) + "/" +
           phase_name(Phase(p)) + ": " + c.brief() + "\n";
    }
  }
  for (const std::string* note : {&user_delta_note, &gwn_delta_note,
                                  &sensor_delta_note})
    if (!note->empty()) s += "  note: " + *note + "\n";
  auto tline = [](const char* name, const TimingStats& t) {
    char buf[160];
    snprintf(buf, sizeof(buf),
             "  %s: mean %.3f ms, var %.4f, min %.3f, max %.3f (%llu runs)\n",
             name, t.mean_ms, t.variance_ms2, t.min_ms, t.max_ms,
             (unsigned long long)t.iterations);
    return std::string(buf);
  };
  s += "timing:\n";
  s += tline("registration", registration_time);
  s += tline("authentication", auth_time);
  s += "communication:\n";
  s += "  request " + std::to_string(request_bytes) + " B (analytic " +
       std::to_string(analytic_request_bytes) + " B), confirm " +
       std::to_string(confirm_bytes) + " B (analytic " +
       std::to_string(analytic_confirm_bytes) + " B)\n";
  s += "  handshake total " + std::to_string(handshake_bits) +
       " bits (nominal reference " + std::to_string(nominal_handshake_bits) +
       " bits; element widths differ by backend)\n";
  return s;
}

}  // namespace hiot
