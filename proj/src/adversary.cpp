#include "hiot/adversary.hpp"

#include <json.hpp>

namespace hiot {

void ScenarioReport::check(bool ok, const std::string& what) {
  checks.push_back((ok ? "ok: " : "FAIL: ") + what);
  if (!ok) pass = false;
}

std::string ScenarioReport::to_text() const {
  std::string out = "scenario " + name + " [" + backend +
                    ", seed=" + std::to_string(seed) + "]\n";
  for (const auto& c : checks) out += "  " + c + "\n";
  for (const auto& [k, v] : metrics)
    out += "  " + k + " = " + std::to_string(v) + "\n";
  out += pass ? "verdict: PASS\n" : "verdict: FAIL\n";
  return out;
}

std::string ScenarioReport::to_json() const {
  nlohmann::json j;
  j["scenario"] = name;
  j["backend"] = backend;
  j["seed"] = seed;
  j["pass"] = pass;
  j["checks"] = checks;
  j["metrics"] = metrics;
  return j.dump(2);
}

namespace {

ScenarioReport make_report(const std::string& name, const BackendPtr& backend,
                           uint64_t seed) {
  ScenarioReport r;
  r.name = name;
  r.backend = backend->name();
  r.seed = seed;
  r.pass = true;
  return r;
}

// Adversary-side request assembly from public values only.
Bytes encode_request(const WireCodec& codec, const PairingBackend& be,
                     const SigncryptResult& sc, uint64_t t_ms) {
  ServiceRequestBody req;
  req.masked_acd = be.g1_to_bytes(sc.masked_acd);
  req.c = be.scalar_to_bytes(sc.sigma.c);
  req.commit = be.g1_to_bytes(sc.sigma.commit);
  req.masked_msg = sc.sigma.masked_msg;
  req.masked_key = sc.sigma.masked_key;
  req.locked_seed = be.g1_to_bytes(sc.sigma.locked_seed);
  req.timestamp_ms = t_ms;
  return codec.encode(WireMessage{std::move(req)});
}

Harness::DeliveryOutcome deliver_to(SensorParty& sensor, WireCodec& codec,
                                    std::span<const uint8_t> frame,
                                    Clock& clock, WireMessage* reply) {
  auto decoded = codec.decode(frame);
  if (std::holds_alternative<DecodeError>(decoded))
    return {false, RejectReason::Malformed};
  auto out = sensor.handle_request(std::get<WireMessage>(decoded), clock);
  if (reply) *reply = out.reply;
  return {out.accepted, out.reason};
}

}  // namespace

ScenarioReport run_replay_attack(BackendPtr backend, uint64_t seed) {
  ScenarioReport r = make_report("replay", backend, seed);
  Harness h(backend, seed);

  auto res = h.handshake(0, Fault::duplicate());
  r.check(res.deliveries.size() == 2, "duplicate fault produced two copies");
  r.check(!res.deliveries.empty() && res.deliveries[0].accepted,
          "original delivery accepted");
  r.check(res.deliveries.size() == 2 && !res.deliveries[1].accepted &&
              res.deliveries[1].reason == RejectReason::Replayed,
          "in-window duplicate rejected by replay cache");
  r.check(res.established && res.user_key == res.sensor_key,
          "honest handshake still completed with matching keys");

  // Same bytes again, delivered long after the window has passed.
  h.clock().advance(2 * h.params().freshness_window_ms);
  auto late = h.deliver_raw(res.request_frame);
  r.check(!late.accepted && late.reason == RejectReason::StaleTimestamp,
          "out-of-window redelivery rejected by timestamp check");

  r.metrics["deliveries"] = res.deliveries.size() + 1;
  return r;
}

ScenarioReport run_dos_attack(BackendPtr backend, uint64_t seed,
                              size_t volume) {
  ScenarioReport r = make_report("dos", backend, seed);
  Harness h(backend, seed);
  const auto& be = *h.params().backend;
  DrbgRng attacker(seed ^ 0xd05);

  // The attacker owns a keypair and knows every public value, but cannot
  // produce a registered account point without the gateway's blinding.
  UserKeyPair rogue = user_keygen(to_bytes("attacker"), h.params(), attacker);
  SensorPublicKey target = h.sensor().public_key();

  auto& auth_counts = h.sensor().counters().at(Entity::Sensor,
                                               Phase::Authentication);
  OpCounts before = auth_counts;

  uint64_t unknown_account = 0, other_reject = 0, accepted = 0;
  auto bombard = [&](size_t count) {
    for (size_t i = 0; i < count; i++) {
      UserCredential fake;
      fake.acd = be.g1_mul(be.scalar_random(attacker), h.params().generator);
      fake.sig = be.scalar_zero();
      fake.delta = be.scalar_zero();
      Bytes payload = attacker.bytes(h.params().payload_bytes());
      SigncryptResult sc =
          signcrypt(rogue, fake, target, payload, h.params(), attacker);
      Bytes frame = encode_request(h.codec(), be, sc, h.clock().now_ms());
      auto out = h.deliver_raw(frame);
      if (out.accepted)
        accepted++;
      else if (out.reason == RejectReason::UnknownAccount)
        unknown_account++;
      else
        other_reject++;
    }
  };

  bombard(volume / 2);
  auto honest = h.handshake();
  bombard(volume - volume / 2);

  OpCounts spent = auth_counts;
  uint64_t pairings = spent.pairings - before.pairings;
  uint64_t macs_beyond_honest = spent.macs - before.macs - 1;

  r.check(accepted == 0, "no bogus request established a session");
  r.check(unknown_account == volume,
          "every bogus request died at the account check");
  r.check(pairings == 0, "authentication path spent zero pairings");
  r.check(macs_beyond_honest == 0,
          "no MAC was computed for any bogus request");
  r.check(honest.established && honest.user_key == honest.sensor_key,
          "interleaved honest request still succeeded");

  r.metrics["volume"] = volume;
  r.metrics["unknown_account"] = unknown_account;
  r.metrics["other_reject"] = other_reject;
  r.metrics["pairings_spent"] = pairings;
  r.metrics["g1_muls_per_bogus"] =
      volume ? (spent.g1_muls - before.g1_muls - 4) / volume : 0;
  return r;
}

ScenarioReport run_tamper_attack(BackendPtr backend, uint64_t seed,
                                 size_t max_flips) {
  ScenarioReport r = make_report("tamper", backend, seed);
  Harness h(backend, seed);

  // Pin one transcript: user enters awaiting-confirm, sensor untouched.
  Bytes payload = h.rng().bytes(h.params().payload_bytes());
  WireMessage req =
      h.user().begin_auth(h.sensor().id(), payload, h.clock(), h.rng());
  Bytes frame = h.codec().encode(req);
  h.clock().advance(5);

  const SensorParty pristine_sensor = h.sensor();
  const UserParty pristine_user = h.user();

  // Control: the unmodified frame must still be accepted end to end.
  {
    SensorParty sn = pristine_sensor;
    UserParty u = pristine_user;
    WireMessage reply;
    auto out = deliver_to(sn, h.codec(), frame, h.clock(), &reply);
    bool complete = out.accepted && u.complete_auth(reply) ==
                                        UserParty::ConfirmOutcome::Established;
    r.check(complete, "pinned transcript accepted when unmodified");
  }

  size_t total_bits = frame.size() * 8;
  size_t step = 1;
  if (max_flips && max_flips < total_bits)
    step = (total_bits + max_flips - 1) / max_flips;

  uint64_t tried = 0, rejected_at_sensor = 0, mac_failed_at_user = 0,
           accepted = 0;
  std::map<RejectReason, uint64_t> reasons;
  for (size_t bit = 0; bit < total_bits; bit += step) {
    Bytes mutated = frame;
    mutated[bit / 8] ^= uint8_t(1u << (bit % 8));
    SensorParty sn = pristine_sensor;
    UserParty u = pristine_user;
    WireMessage reply;
    auto out = deliver_to(sn, h.codec(), mutated, h.clock(), &reply);
    tried++;
    if (!out.accepted) {
      rejected_at_sensor++;
      reasons[out.reason]++;
      continue;
    }
    // Sensor accepted (e.g. a low timestamp bit): the user's MAC check is
    // the last line of defense.
    if (u.complete_auth(reply) == UserParty::ConfirmOutcome::Established)
      accepted++;
    else
      mac_failed_at_user++;
  }

  r.check(accepted == 0, "no single-bit flip survived to an established session");
  r.check(rejected_at_sensor + mac_failed_at_user == tried,
          "every flip was rejected at the sensor or failed the user MAC");
  r.metrics["bits_flipped"] = tried;
  r.metrics["rejected_at_sensor"] = rejected_at_sensor;
  r.metrics["mac_failed_at_user"] = mac_failed_at_user;
  for (const auto& [reason, count] : reasons)
    r.metrics[std::string("reject_") + reject_reason_name(reason)] = count;
  return r;
}

ScenarioReport run_impersonation_attack(BackendPtr backend, uint64_t seed,
                                        size_t attempts) {
  ScenarioReport r = make_report("impersonation", backend, seed);
  Harness h(backend, seed);
  const auto& be = *h.params().backend;
  DrbgRng attacker(seed ^ 0x1333f);

  // Observed public material: one honest transcript and the system values.
  auto honest = h.handshake();
  r.check(honest.established, "baseline honest handshake succeeded");
  auto observed = h.codec().decode(honest.request_frame);
  const auto& observed_req =
      *std::get<WireMessage>(observed).as<ServiceRequestBody>();

  UserKeyPair rogue = user_keygen(to_bytes("impostor"), h.params(), attacker);
  SensorPublicKey target = h.sensor().public_key();
  const G1Point real_acd = h.user().credential().acd;

  size_t structured = attempts / 10;
  size_t stolen = attempts / 10;
  size_t random_tries = attempts - structured - stolen;

  uint64_t accepted = 0;
  std::map<RejectReason, uint64_t> reasons;
  auto fire = [&](const Bytes& frame) {
    auto out = h.deliver_raw(frame);
    if (out.accepted)
      accepted++;
    else
      reasons[out.reason]++;
  };

  // Random well-formed tuples assembled from public group operations.
  for (size_t i = 0; i < random_tries; i++) {
    ServiceRequestBody req;
    auto rand_point = [&] {
      return be.g1_to_bytes(
          be.g1_mul(be.scalar_random(attacker), h.params().generator));
    };
    req.masked_acd = rand_point();
    req.c = be.scalar_to_bytes(be.scalar_random(attacker));
    req.commit = rand_point();
    req.masked_msg = attacker.bytes(h.params().payload_bytes());
    req.masked_key = attacker.bytes(h.params().payload_bytes());
    req.locked_seed = rand_point();
    req.timestamp_ms = h.clock().now_ms();
    fire(h.codec().encode(WireMessage{std::move(req)}));
  }

  // Replayed commit/seed transport with a fresh signature scalar.
  for (size_t i = 0; i < structured; i++) {
    ServiceRequestBody req = observed_req;
    req.c = be.scalar_to_bytes(be.scalar_random(attacker));
    req.timestamp_ms = h.clock().now_ms();
    fire(h.codec().encode(WireMessage{std::move(req)}));
  }

  // Stolen account point, self-chosen keys.
  for (size_t i = 0; i < stolen; i++) {
    UserCredential fake;
    fake.acd = real_acd;
    fake.sig = be.scalar_zero();
    fake.delta = be.scalar_zero();
    Bytes payload = attacker.bytes(h.params().payload_bytes());
    SigncryptResult sc =
        signcrypt(rogue, fake, target, payload, h.params(), attacker);
    fire(encode_request(h.codec(), be, sc, h.clock().now_ms()));
  }

  r.check(accepted == 0, "all forgery attempts rejected");
  auto post = h.handshake();
  r.check(post.established && post.user_key == post.sensor_key,
          "legitimate user still authenticates after the bombardment");

  r.metrics["attempts"] = attempts;
  for (const auto& [reason, count] : reasons)
    r.metrics[std::string("reject_") + reject_reason_name(reason)] = count;
  return r;
}

ScenarioReport run_anonymity_check(BackendPtr backend, uint64_t seed,
                                   size_t sessions) {
  ScenarioReport r = make_report("anonymity", backend, seed);
  Harness::Options opts;
  opts.user_count = 2;
  Harness h(backend, seed, opts);
  const auto& be = *h.params().backend;

  std::vector<Bytes> auth_frames;
  std::vector<Bytes> masked_accounts;
  size_t completed = 0;
  for (size_t i = 0; i < sessions; i++) {
    auto res = h.handshake(i % h.user_count());
    if (res.established) completed++;
    auto decoded = h.codec().decode(res.request_frame);
    masked_accounts.push_back(
        std::get<WireMessage>(decoded).as<ServiceRequestBody>()->masked_acd);
    auth_frames.push_back(std::move(res.request_frame));
    auth_frames.push_back(std::move(res.reply_frame));
    h.clock().advance(7);  // distinct timestamps across sessions
  }
  r.check(completed == sessions, "all sessions completed");

  // Sensitive encodings: both user identities and account points.
  std::vector<Bytes> needles;
  for (size_t i = 0; i < h.user_count(); i++) {
    needles.push_back(h.user(i).id());
    needles.push_back(be.g1_to_bytes(h.user(i).credential().acd));
  }
  uint64_t hits = 0;
  for (const Bytes& frame : auth_frames)
    for (const Bytes& needle : needles)
      if (contains_bytes(frame, needle)) hits++;
  r.check(hits == 0,
          "no auth-phase frame contains a user identity or account encoding");

  // Positive control: the registration request *does* carry the identity,
  // so the scanner itself is known to work.
  RegUserReqBody reg;
  reg.user_id = h.user(0).id();
  reg.user_pk = be.g1_to_bytes(h.user(0).keypair().pk);
  Bytes reg_frame = h.codec().encode(WireMessage{std::move(reg)});
  r.check(contains_bytes(reg_frame, h.user(0).id()),
          "scanner control: registration frame exposes the identity");

  bool all_distinct = true;
  for (size_t i = 0; i < masked_accounts.size() && all_distinct; i++)
    for (size_t j = i + 1; j < masked_accounts.size(); j++)
      if (masked_accounts[i] == masked_accounts[j]) {
        all_distinct = false;
        break;
      }
  r.check(all_distinct, "account-protection values pairwise distinct");

  r.metrics["sessions"] = sessions;
  r.metrics["frames_scanned"] = auth_frames.size();
  r.metrics["substring_hits"] = hits;
  return r;
}

ScenarioReport run_scenario(const std::string& name, BackendPtr backend,
                            uint64_t seed, size_t scale) {
  if (name == "replay") return run_replay_attack(backend, seed);
  if (name == "dos") return run_dos_attack(backend, seed, scale ? scale : 1000);
  if (name == "tamper") return run_tamper_attack(backend, seed, scale);
  if (name == "impersonation")
    return run_impersonation_attack(backend, seed, scale ? scale : 10000);
  if (name == "anonymity")
    return run_anonymity_check(backend, seed, scale ? scale : 100);
  throw std::invalid_argument("unknown scenario: " + name);
}

std::vector<std::string> scenario_names() {
  return {"replay", "dos", "tamper", "impersonation", "anonymity"};
}

}  // namespace hiot
