#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hiot/adversary.hpp"

using namespace hiot;

namespace {
BackendPtr big_toy() { return make_toy_backend(kLargeToyPrime); }
}  // namespace

TEST_CASE("replay scenario holds") {
  auto rep = run_replay_attack(big_toy(), 101);
  INFO(rep.to_text());
  CHECK(rep.pass);
}

TEST_CASE("dos scenario holds at reduced desk volume") {
  auto rep = run_dos_attack(big_toy(), 102, 100);
  INFO(rep.to_text());
  CHECK(rep.pass);
  CHECK(rep.metrics.at("pairings_spent") == 0);
  CHECK(rep.metrics.at("unknown_account") == 100);
  // per-request work stays at the recovery cost (two scalar mults)
  CHECK(rep.metrics.at("g1_muls_per_bogus") == 2);
}

TEST_CASE("tamper scenario: exhaustive flips on a pinned toy transcript") {
  auto rep = run_tamper_attack(big_toy(), 103);
  INFO(rep.to_text());
  CHECK(rep.pass);
  // the request frame is 106 bytes on this backend; all bits were tried
  CHECK(rep.metrics.at("bits_flipped") == 848);
}

TEST_CASE("impersonation scenario at desk scale") {
  auto rep = run_impersonation_attack(big_toy(), 104, 500);
  INFO(rep.to_text());
  CHECK(rep.pass);
  CHECK(rep.metrics.at("attempts") == 500);
}

TEST_CASE("impersonation sample on the production backend") {
  auto rep = run_impersonation_attack(make_bls381_backend(), 105, 60);
  INFO(rep.to_text());
  CHECK(rep.pass);
}

TEST_CASE("anonymity scenario holds") {
  auto rep = run_anonymity_check(big_toy(), 106, 40);
  INFO(rep.to_text());
  CHECK(rep.pass);
  CHECK(rep.metrics.at("substring_hits") == 0);
}

TEST_CASE("scenarios are deterministic under a fixed seed") {
  auto a = run_replay_attack(big_toy(), 107);
  auto b = run_replay_attack(big_toy(), 107);
  CHECK(a.to_json() == b.to_json());

  auto c = run_tamper_attack(big_toy(), 108, 64);
  auto d = run_tamper_attack(big_toy(), 108, 64);
  CHECK(c.to_json() == d.to_json());
}

TEST_CASE("scenario dispatch and names") {
  CHECK(scenario_names().size() == 5);
  CHECK_THROWS_AS(run_scenario("nope", big_toy(), 1), std::invalid_argument);
  auto rep = run_scenario("replay", big_toy(), 109);
  CHECK(rep.name == "replay");
  CHECK(rep.pass);
}
