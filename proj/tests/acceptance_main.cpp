// Acceptance suite: one check per release criterion, every tolerance
// pinned in code. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fail.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "hiot/adversary.hpp"
#include "hiot/bench.hpp"
#include "hiot/harness.hpp"

using namespace hiot;

namespace {

int failures = 0;

void report(int number, bool pass, const std::string& name,
            const std::string& detail) {
  printf("%s  criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number,
         name.c_str(), detail.c_str());
  fflush(stdout);
  if (!pass) failures++;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// 1. Honest-run correctness: 500 toy + 50 production seeded handshakes,
// all established with byte-identical keys, under 60 s.
void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  size_t failures_toy = 0, failures_prod = 0;
  auto toy = make_toy_backend(1009);
  for (uint64_t seed = 1; seed <= 500; seed++) {
    Harness h(toy, seed);
    auto res = h.handshake();
    if (!res.established || res.user_key != res.sensor_key) failures_toy++;
  }
  auto prod = make_bls381_backend();
  for (uint64_t seed = 1; seed <= 50; seed++) {
    Harness h(prod, seed);
    auto res = h.handshake();
    if (!res.established || res.user_key != res.sensor_key) failures_prod++;
  }
  double secs = seconds_since(t0);
  bool pass = failures_toy == 0 && failures_prod == 0 && secs < 60.0;
  char buf[160];
  snprintf(buf, sizeof(buf),
           "500 toy + 50 production runs, %zu+%zu failures, %.1f s",
           failures_toy, failures_prod, secs);
  report(1, pass, "honest-run correctness", buf);
}

// 2. Algebraic identity suite on 200 random toy instances each; the
// pairing-product check must agree with the scalar check everywhere.
void criterion_2() {
  auto be = make_toy_backend(1009);
  DrbgRng rng(2024);
  auto sys = setup(be, 128, 256, 5000, rng);
  const auto& P = sys.params.generator;

  size_t bad = 0;
  for (int i = 0; i < 200; i++) {
    // credential identity
    auto user = user_keygen(to_bytes("u"), sys.params, rng);
    auto cred = issue_credential(sys.master, user.id, user.pk, sys.params, rng);
    if (!be->g1_eq(cred.acd,
                   be->g1_sub(be->g1_mul(cred.sig, P),
                              be->g1_mul(cred.delta, sys.params.master_pub))))
      bad++;

    // partial-key pairing identity + route agreement (accept and reject)
    auto pk = issue_partial_key(sys.master, to_bytes("s"), sys.params, rng);
    if (!verify_partial_key(pk, sys.params)) bad++;
    if (verify_partial_key(pk, sys.params) !=
        verify_partial_key_scalar(pk, sys.params))
      bad++;
    PartialKey bent = pk;
    bent.partial_key = be->sc_add(bent.partial_key, be->scalar_one());
    if (verify_partial_key(bent, sys.params) !=
        verify_partial_key_scalar(bent, sys.params))
      bad++;

    // recovery and signature identities via one signcryption
    auto sensor = sensor_finalize_keys(to_bytes("s"), pk, sys.params, rng);
    Bytes m = rng.bytes(32);
    auto sc = signcrypt(user, cred, sensor.public_key(), m, sys.params, rng);
    G1Point dp = be->g1_mul(sensor.partial_key, P);
    G1Point rec = be->g1_mul(be->sc_inv(sensor.secret),
                             be->g1_sub(sc.sigma.locked_seed, dp));
    if (!be->g1_eq(rec, sc.sigma.commit)) bad++;
    G1Point sig_rhs = be->g1_sub(be->g1_mul(sc.sigma.c, P),
                                 be->g1_mul(sys.params.hash.h4(m), user.pk));
    if (!be->g1_eq(sc.sigma.commit, sig_rhs)) bad++;
  }
  report(2, bad == 0, "algebraic identity suite",
         "200 instances x 4 identities + dual-route agreement, " +
             std::to_string(bad) + " violations");
}

// 3. Operation counts: user auth exactly 3M+4H, sensor 3P in registration
// and 4M+6H in authentication; gateway measured and delta flagged.
void criterion_3() {
  bool pass = true;
  std::string gwn_note;
  for (auto be : {make_toy_backend(1009), make_bls381_backend()}) {
    Harness h(be, 3);
    auto res = h.handshake();
    if (!res.established) pass = false;

    const OpCounts& uauth =
        h.user().counters().at(Entity::User, Phase::Authentication);
    if (uauth.brief() != "3M+4H" || uauth.macs != 0) pass = false;

    const OpCounts& sreg =
        h.sensor().counters().at(Entity::Sensor, Phase::Registration);
    if (sreg.pairings != 3) pass = false;

    const OpCounts& sauth =
        h.sensor().counters().at(Entity::Sensor, Phase::Authentication);
    if (sauth.g1_muls != 4 || sauth.hashes != 6 || sauth.pairings != 0)
      pass = false;

    const OpCounts& greg =
        h.gwn().counters().at(Entity::Gwn, Phase::Registration);
    gwn_note = "gwn measured " + greg.brief() + " vs nominal " +
               kNominalGwnRegistration + " (delta reported)";
  }
  report(3, pass, "operation counts",
         "user 3M+4H, sensor 3P reg / 4M+6H auth on both backends; " +
             gwn_note);
}

// 4. Replay resistance.
void criterion_4() {
  auto rep = run_replay_attack(make_toy_backend(kLargeToyPrime), 4);
  report(4, rep.pass, "replay resistance",
         "in-window duplicate via cache, out-of-window via timestamp");
}

// 5. DOS resistance: 1000 bogus requests, zero sessions, zero pairings,
// honest request interleaved succeeds.
void criterion_5() {
  auto rep = run_dos_attack(make_toy_backend(kLargeToyPrime), 5, 1000);
  std::string detail = "1000 bogus: " +
                       std::to_string(rep.metrics.at("unknown_account")) +
                       " unknown-account, " +
                       std::to_string(rep.metrics.at("pairings_spent")) +
                       " pairings";
  report(5, rep.pass, "dos resistance", detail);
}

// 6. Tamper exhaustion: every single-bit flip of the pinned service
// request rejected at the sensor or failed at the user MAC.
void criterion_6() {
  auto rep = run_tamper_attack(make_toy_backend(kLargeToyPrime), 6, 0);
  std::string detail =
      std::to_string(rep.metrics.at("bits_flipped")) + " flips, " +
      std::to_string(rep.metrics.at("rejected_at_sensor")) + " sensor, " +
      std::to_string(rep.metrics.at("mac_failed_at_user")) + " user-mac";
  report(6, rep.pass, "tamper exhaustion", detail);
}

// 7. Anonymity scan over 100 sessions on the production backend.
void criterion_7() {
  auto rep = run_anonymity_check(make_bls381_backend(), 7, 100);
  report(7, rep.pass, "anonymity scan",
         std::to_string(rep.metrics.at("frames_scanned")) +
             " frames scanned, " +
             std::to_string(rep.metrics.at("substring_hits")) +
             " identity/account hits, protection values distinct");
}

// 8. Communication cost: analytic and measured wire sizes agree exactly;
// the measured figure is published next to the nominal reference, whose
// element sizes are unspecified (documented deviation, not an equality).
void criterion_8() {
  bool pass = true;
  std::string sizes;
  for (auto be : {make_toy_backend(1009), make_bls381_backend()}) {
    Harness h(be, 8);
    auto res = h.handshake();
    if (!res.established) pass = false;
    size_t measured_req = res.request_frame.size();
    size_t measured_conf = res.reply_frame.size();
    if (measured_req != h.codec().service_request_size()) pass = false;
    if (measured_conf != h.codec().mac_confirm_size()) pass = false;
    size_t bits = (measured_req + measured_conf) * 8;
    sizes += be->name() + "=" + std::to_string(bits) + "b ";
  }
  report(8, pass, "communication cost",
         sizes + "(nominal reference " +
             std::to_string(kNominalHandshakeBits) +
             "b; element sizes unpublished there)");
}

// 9. Timing: the reference total is platform-bound and explicitly not
// reproduced; substituted property is a production handshake under 500 ms
// with mean/variance over >= 100 iterations.
void criterion_9() {
  auto rep = run_benchmark(make_bls381_backend(), 100, 9);
  bool pass = rep.auth_time.iterations >= 100 &&
              rep.auth_time.mean_ms < 500.0 && rep.auth_time.max_ms < 500.0 &&
              rep.auth_time.variance_ms2 >= 0.0;
  char buf[160];
  snprintf(buf, sizeof(buf),
           "production auth mean %.2f ms (max %.2f, var %.4f) over %llu runs",
           rep.auth_time.mean_ms, rep.auth_time.max_ms,
           rep.auth_time.variance_ms2,
           (unsigned long long)rep.auth_time.iterations);
  report(9, pass, "timing substitute property", buf);
}

// 10. Wire robustness: decode fuzz never crashes; golden transcript bytes
// reproduce across seeded runs.
void criterion_10() {
  WireCodec codec(8, 8, 32);
  DrbgRng rng(10);
  size_t handled = 0;
  for (int i = 0; i < 10000; i++) {
    Bytes frame = rng.bytes(rng.next_u64() % 260);
    auto res = codec.decode(frame);
    if (std::holds_alternative<WireMessage>(res) ||
        std::holds_alternative<DecodeError>(res))
      handled++;
  }

  Harness a(make_toy_backend(1009), 7);
  Harness b(make_toy_backend(1009), 7);
  auto ra = a.handshake();
  auto rb = b.handshake();
  bool golden = ra.request_frame == rb.request_frame &&
                ra.reply_frame == rb.reply_frame && ra.established;
  report(10, handled == 10000 && golden, "wire robustness",
         "10000 fuzz frames handled, seeded transcript bytes identical");
}

}  // namespace

int main() {
  printf("acceptance suite\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (failures == 0)
    printf("all criteria passed\n");
  else
    printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
