#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <mutex>
#include <thread>
#include <set>

#include "hiot/harness.hpp"
#include "hiot/socket_transport.hpp"

using namespace hiot;

namespace {
BackendPtr big_toy() { return make_toy_backend(kLargeToyPrime); }
}  // namespace

TEST_CASE("honest handshake establishes equal keys on both sides") {
  Harness h(big_toy(), 1);
  auto res = h.handshake();
  REQUIRE(res.established);
  CHECK(res.user_key == res.sensor_key);
  CHECK_FALSE(res.user_key.empty());
  CHECK(h.user().phase() == PartyPhase::Established);
  CHECK(h.sensor().phase() == PartyPhase::Established);
  // same digest h_1 on both sides
  CHECK(h.user().session()->digest == h.sensor().session()->digest);
}

TEST_CASE("registration state machine") {
  Harness h(big_toy(), 2);
  // harness already registered everyone
  CHECK(h.user().phase() == PartyPhase::Registered);
  CHECK(h.sensor().phase() == PartyPhase::Registered);
  CHECK(h.sensor().directory_size() == 1);

  // an unregistered user cannot start authentication
  UserParty fresh(to_bytes("nobody"), h.params());
  CHECK_THROWS_AS(
      fresh.begin_auth(h.sensor().id(), Bytes(32, 0), h.clock(), h.rng()),
      std::logic_error);

  // an unregistered sensor cannot serve
  SensorParty cold(to_bytes("cold"), h.params());
  WireMessage dummy{ServiceRequestBody{}};
  CHECK_THROWS_AS(cold.handle_request(dummy, h.clock()), std::logic_error);

  // unknown target sensor
  CHECK_THROWS_AS(
      h.user().begin_auth(to_bytes("ghost"), Bytes(32, 0), h.clock(), h.rng()),
      std::invalid_argument);
}

TEST_CASE("duplicate registration issues a fresh credential") {
  Harness h(big_toy(), 3);
  auto& be = *h.params().backend;
  Bytes acd1 = be.g1_to_bytes(h.user().credential().acd);
  auto resp = h.gwn().handle(h.user().registration_request(h.rng()), h.rng());
  REQUIRE(resp.size() == 1);
  REQUIRE(h.user().process_registration(resp[0]));
  Bytes acd2 = be.g1_to_bytes(h.user().credential().acd);
  CHECK(acd1 != acd2);
  CHECK(h.gwn().user_count() == 1);  // latest credential kept per identity
}

TEST_CASE("empty identity registers fine") {
  Harness h(big_toy(), 4);
  UserParty anon(Bytes{}, h.params());
  auto resp = h.gwn().handle(anon.registration_request(h.rng()), h.rng());
  REQUIRE(resp.size() == 1);
  CHECK(anon.process_registration(resp[0]));
}

TEST_CASE("tampered partial key is rejected at sensor registration") {
  Harness h(big_toy(), 55);
  SensorParty fresh(to_bytes("sensor-2"), h.params());
  auto out = h.gwn().handle(fresh.registration_request(), h.rng());
  REQUIRE_FALSE(out.empty());
  auto* body = std::get_if<RegSensorRespBody>(&out[0].body);
  REQUIRE(body);
  body->partial_key[7] ^= 1;
  CHECK_FALSE(fresh.process_registration(out[0], h.rng()));
  CHECK(fresh.phase() == PartyPhase::Failed);
}

TEST_CASE("no session key is exposed before verification completes") {
  // Both state machines hold back key material until their own check
  // has passed: the user through MAC confirmation, the sensor through
  // the signature and account checks.
  Harness h(big_toy(), 56);
  CHECK_FALSE(h.user().session().has_value());
  CHECK_FALSE(h.sensor().session().has_value());
  WireMessage req = h.user().begin_auth(h.sensor().id(), h.rng().bytes(32),
                                        h.clock(), h.rng());
  CHECK_FALSE(h.user().session().has_value());  // awaiting confirmation
  auto out = h.sensor().handle_request(req, h.clock());
  REQUIRE(out.accepted);
  CHECK(h.sensor().session().has_value());  // sensor verified the request
  CHECK_FALSE(h.user().session().has_value());
  REQUIRE(h.user().complete_auth(out.reply) ==
          UserParty::ConfirmOutcome::Established);
  CHECK(h.user().session().has_value());
  CHECK(h.user().session()->key == h.sensor().session()->key);
  CHECK(h.user().session()->digest == h.sensor().session()->digest);

  // a failed confirmation clears any session state
  h.clock().advance(3);
  WireMessage req2 = h.user().begin_auth(h.sensor().id(), h.rng().bytes(32),
                                         h.clock(), h.rng());
  CHECK_FALSE(h.user().session().has_value());  // superseded
  auto out2 = h.sensor().handle_request(req2, h.clock());
  REQUIRE(out2.accepted);
  auto* tag = &std::get<MacConfirmBody>(out2.reply.body).tag;
  (*tag)[0] ^= 1;
  CHECK(h.user().complete_auth(out2.reply) ==
        UserParty::ConfirmOutcome::BadMac);
  CHECK_FALSE(h.user().session().has_value());
}

TEST_CASE("tampered directory push is rejected by the sensor") {
  Harness h(big_toy(), 5);
  auto pushes = h.gwn().directory_pushes();
  REQUIRE(pushes.size() == 1);
  auto* body = std::get_if<DirectoryPushBody>(&pushes[0].body);
  REQUIRE(body);
  body->sig[7] ^= 1;
  CHECK_FALSE(h.sensor().process_directory_push(pushes[0]));
}

TEST_CASE("freshness window rejects stale and future-dated requests") {
  Harness h(big_toy(), 6);
  int64_t window = h.params().freshness_window_ms;

  auto res = h.handshake();  // leaves a valid frame behind
  REQUIRE(res.established);

  // replay the same frame too late
  h.clock().advance(2 * window);
  auto late = h.deliver_raw(res.request_frame);
  CHECK_FALSE(late.accepted);
  CHECK(late.reason == RejectReason::StaleTimestamp);

  // future-dated: craft a request stamped far ahead of the sensor clock
  WireMessage req = h.user().begin_auth(h.sensor().id(),
                                        h.rng().bytes(32), h.clock(), h.rng());
  auto* body = std::get_if<ServiceRequestBody>(&req.body);
  body->timestamp_ms += uint64_t(3 * window);
  auto future = h.deliver_raw(h.codec().encode(req));
  CHECK_FALSE(future.accepted);
  CHECK(future.reason == RejectReason::StaleTimestamp);

  // boundary: exactly window-1 late is still fresh
  WireMessage req2 = h.user().begin_auth(h.sensor().id(),
                                         h.rng().bytes(32), h.clock(), h.rng());
  h.clock().advance(window - 1);
  auto fresh = h.deliver_raw(h.codec().encode(req2));
  CHECK(fresh.accepted);
}

TEST_CASE("simulated network faults map to the expected rejections") {
  SUBCASE("delay beyond the window is rejected as stale") {
    Harness h(big_toy(), 60);
    auto res =
        h.handshake(0, Fault::delay(2 * h.params().freshness_window_ms));
    REQUIRE(res.deliveries.size() == 1);
    CHECK_FALSE(res.deliveries[0].accepted);
    CHECK(res.deliveries[0].reason == RejectReason::StaleTimestamp);
    CHECK_FALSE(res.established);
  }
  SUBCASE("drop means no delivery and no session") {
    Harness h(big_toy(), 61);
    auto res = h.handshake(0, Fault::drop());
    CHECK(res.deliveries.empty());
    CHECK_FALSE(res.established);
  }
  SUBCASE("reorder jitter stays inside the window and succeeds") {
    Harness h(big_toy(), 62);
    auto res = h.handshake(0, Fault::reorder());
    REQUIRE(res.deliveries.size() == 1);
    CHECK(res.established);
  }
  SUBCASE("batch shuffle is deterministic under the seed") {
    SimNet a(99), b(99);
    std::vector<Delivery> da, db;
    for (uint64_t i = 0; i < 10; i++) {
      da.push_back({i, Bytes{uint8_t(i)}});
      db.push_back({i, Bytes{uint8_t(i)}});
    }
    a.shuffle(da);
    b.shuffle(db);
    for (size_t i = 0; i < 10; i++) CHECK(da[i].frame == db[i].frame);
  }
}

TEST_CASE("byte-identical replays inside the window hit the cache") {
  Harness h(big_toy(), 7);
  auto res = h.handshake(0, Fault::duplicate());
  REQUIRE(res.deliveries.size() == 2);
  CHECK(res.deliveries[0].accepted);
  CHECK_FALSE(res.deliveries[1].accepted);
  CHECK(res.deliveries[1].reason == RejectReason::Replayed);
  CHECK(res.established);  // the honest copy still completed
}

TEST_CASE("mock clock drives the request timestamp") {
  Harness h(big_toy(), 8);
  h.clock().set(1'800'000'000'000ull);
  WireMessage req = h.user().begin_auth(h.sensor().id(), h.rng().bytes(32),
                                        h.clock(), h.rng());
  CHECK(req.as<ServiceRequestBody>()->timestamp_ms == 1'800'000'000'000ull);
}

TEST_CASE("repeated begin_auth yields distinct protection values") {
  Harness h(big_toy(), 9);
  std::set<Bytes> masked;
  for (int i = 0; i < 20; i++) {
    WireMessage req = h.user().begin_auth(h.sensor().id(), h.rng().bytes(32),
                                          h.clock(), h.rng());
    masked.insert(req.as<ServiceRequestBody>()->masked_acd);
  }
  CHECK(masked.size() == 20);
}

TEST_CASE("confirmation failures") {
  Harness h(big_toy(), 10);

  SUBCASE("flipped MAC bit fails and the party records failure") {
    WireMessage req = h.user().begin_auth(h.sensor().id(), h.rng().bytes(32),
                                          h.clock(), h.rng());
    auto out = h.sensor().handle_request(req, h.clock());
    REQUIRE(out.accepted);
    auto* tag = &std::get<MacConfirmBody>(out.reply.body).tag;
    (*tag)[3] ^= 0x10;
    CHECK(h.user().complete_auth(out.reply) ==
          UserParty::ConfirmOutcome::BadMac);
    CHECK(h.user().phase() == PartyPhase::Failed);
  }

  SUBCASE("confirmation without a pending session") {
    MacConfirmBody stray;
    stray.tag = Bytes(kMacTagBytes, 0);
    CHECK(h.user().complete_auth(WireMessage{stray}) ==
          UserParty::ConfirmOutcome::NoPendingSession);
  }

  SUBCASE("cross-session confirmation is rejected") {
    WireMessage req1 = h.user().begin_auth(h.sensor().id(), h.rng().bytes(32),
                                           h.clock(), h.rng());
    auto out1 = h.sensor().handle_request(req1, h.clock());
    REQUIRE(out1.accepted);
    // A second handshake supersedes the first; the stale confirmation
    // must not establish it.
    h.clock().advance(3);
    WireMessage req2 = h.user().begin_auth(h.sensor().id(), h.rng().bytes(32),
                                           h.clock(), h.rng());
    (void)req2;
    CHECK(h.user().complete_auth(out1.reply) ==
          UserParty::ConfirmOutcome::BadMac);
  }

  SUBCASE("reject frames do not confirm") {
    WireMessage req = h.user().begin_auth(h.sensor().id(), h.rng().bytes(32),
                                          h.clock(), h.rng());
    (void)req;
    CHECK(h.user().complete_auth(WireMessage{RejectBody{1}}) ==
          UserParty::ConfirmOutcome::Malformed);
  }
}

TEST_CASE("lookup policies agree on decisions") {
  for (auto policy :
       {LookupPolicy::ByRecoveredAccount, LookupPolicy::SignatureFirst}) {
    Harness h(big_toy(), 11);
    h.sensor().set_lookup_policy(policy);
    auto res = h.handshake();
    CHECK(res.established);

    // tampered commit must be rejected under both policies
    WireMessage req = h.user().begin_auth(h.sensor().id(), h.rng().bytes(32),
                                          h.clock(), h.rng());
    auto* body = std::get_if<ServiceRequestBody>(&req.body);
    body->commit = body->masked_acd;  // valid point, wrong value
    auto out = h.deliver_raw(h.codec().encode(req));
    CHECK_FALSE(out.accepted);
  }
}

TEST_CASE("unknown accounts and bad signatures share one wire code") {
  Harness h(big_toy(), 12);
  const auto& be = *h.params().backend;

  // unknown account: honest-looking request from an unregistered keypair
  DrbgRng rogue_rng(99);
  UserKeyPair rogue = user_keygen(to_bytes("rogue"), h.params(), rogue_rng);
  UserCredential fake;
  fake.acd = be.g1_mul(be.scalar_random(rogue_rng), h.params().generator);
  fake.sig = be.scalar_zero();
  fake.delta = be.scalar_zero();
  auto sc = signcrypt(rogue, fake, h.sensor().public_key(),
                      rogue_rng.bytes(32), h.params(), rogue_rng);
  ServiceRequestBody req;
  req.masked_acd = be.g1_to_bytes(sc.masked_acd);
  req.c = be.scalar_to_bytes(sc.sigma.c);
  req.commit = be.g1_to_bytes(sc.sigma.commit);
  req.masked_msg = sc.sigma.masked_msg;
  req.masked_key = sc.sigma.masked_key;
  req.locked_seed = be.g1_to_bytes(sc.sigma.locked_seed);
  req.timestamp_ms = h.clock().now_ms();
  auto unknown = h.sensor().handle_request(WireMessage{req}, h.clock());
  CHECK(unknown.reason == RejectReason::UnknownAccount);

  // bad signature: flip the signature scalar on an honest request
  WireMessage honest = h.user().begin_auth(h.sensor().id(), h.rng().bytes(32),
                                           h.clock(), h.rng());
  auto* hb = std::get_if<ServiceRequestBody>(&honest.body);
  hb->c = be.scalar_to_bytes(
      be.sc_add(*be.scalar_from_bytes(hb->c), be.scalar_one()));
  auto bad = h.sensor().handle_request(honest, h.clock());
  CHECK(bad.reason == RejectReason::BadSignature);

  // externally both rejections are the same opaque byte
  CHECK(std::get<RejectBody>(unknown.reply.body).code ==
        std::get<RejectBody>(bad.reply.body).code);
}

TEST_CASE("established parties can re-authenticate") {
  Harness h(big_toy(), 13);
  auto first = h.handshake();
  REQUIRE(first.established);
  Bytes key1 = first.user_key;
  h.clock().advance(50);
  auto second = h.handshake();
  REQUIRE(second.established);
  CHECK(second.user_key != key1);  // fresh session key
}

TEST_CASE("transport equivalence: simnet and loopback TCP decide alike") {
  // The same scripted sequence (honest, duplicate, stale) must produce
  // identical accept/reject decisions over both transports.
  auto run_script = [](auto&& deliver, Harness& h) {
    std::vector<std::pair<bool, RejectReason>> decisions;
    auto record = [&](Harness::DeliveryOutcome o) {
      decisions.emplace_back(o.accepted, o.reason);
    };
    // honest
    WireMessage req1 = h.user().begin_auth(h.sensor().id(), h.rng().bytes(32),
                                           h.clock(), h.rng());
    Bytes f1 = h.codec().encode(req1);
    record(deliver(f1));
    // byte-identical duplicate
    record(deliver(f1));
    // stale
    WireMessage req2 = h.user().begin_auth(h.sensor().id(), h.rng().bytes(32),
                                           h.clock(), h.rng());
    Bytes f2 = h.codec().encode(req2);
    h.clock().advance(2 * h.params().freshness_window_ms);
    record(deliver(f2));
    return decisions;
  };

  // simnet (direct in-process delivery)
  Harness hs(big_toy(), 14);
  auto sim_decisions =
      run_script([&](const Bytes& f) { return hs.deliver_raw(f); }, hs);

  // loopback TCP: the sensor sits behind a frame handler
  Harness ht(big_toy(), 14);
  std::mutex mu;
  TcpServer server;
  uint16_t port = server.listen("127.0.0.1", 0);
  server.serve_async([&](const Bytes& frame) {
    std::lock_guard<std::mutex> lock(mu);
    std::vector<Bytes> out;
    WireMessage reply;
    ht.deliver_raw(frame, &reply);
    out.push_back(ht.codec().encode(reply));
    return out;
  });

  TcpClient client;
  client.connect("127.0.0.1", port);
  auto tcp_decisions = run_script(
      [&](const Bytes& f) -> Harness::DeliveryOutcome {
        client.send(f);
        auto resp = client.recv();
        REQUIRE(resp);
        auto dec = ht.codec().decode(*resp);
        REQUIRE(std::holds_alternative<WireMessage>(dec));
        const auto& msg = std::get<WireMessage>(dec);
        // only the opaque accept/reject outcome is observable externally
        bool accepted = msg.type() == MsgType::MacConfirm;
        return {accepted, RejectReason::None};
      },
      ht);
  client.close();
  server.stop();

  REQUIRE(sim_decisions.size() == tcp_decisions.size());
  for (size_t i = 0; i < sim_decisions.size(); i++)
    CHECK(sim_decisions[i].first == tcp_decisions[i].first);
}

TEST_CASE("oversized frames close the connection") {
  TcpServer server;
  uint16_t port = server.listen("127.0.0.1", 0);
  server.serve_async([](const Bytes&) { return std::vector<Bytes>{}; });

  TcpClient client;
  client.connect("127.0.0.1", port);
  // hand-write an oversize header
  Bytes hdr;
  put_u32_be(hdr, uint32_t(kMaxFrame + 1));
  // raw send via frame API is refused client-side; push the header bytes
  // through a legitimate frame first to prove the path works
  client.send(Bytes{1, 2, 3});
  // now violate the framing limit directly
  CHECK_THROWS(client.send(Bytes(kMaxFrame + 1, 0)));
  client.close();
  server.stop();
}

TEST_CASE("connecting to a closed port fails distinctly") {
  TcpClient client;
  CHECK_THROWS_AS(client.connect("127.0.0.1", 1), std::system_error);
}

TEST_CASE("independent parties run handshakes concurrently") {
  // Distinct parties may progress fully in parallel; the algebra layer is
  // pure and the counters are thread-local.
  constexpr int kThreads = 4;
  std::vector<std::thread> threads;
  std::array<bool, kThreads> ok{};
  for (int t = 0; t < kThreads; t++) {
    threads.emplace_back([t, &ok] {
      Harness h(make_toy_backend(kLargeToyPrime), 300 + uint64_t(t));
      bool good = true;
      for (int i = 0; i < 20; i++) {
        auto res = h.handshake();
        good = good && res.established && res.user_key == res.sensor_key;
        h.clock().advance(11);
      }
      ok[t] = good;
    });
  }
  for (auto& th : threads) th.join();
  for (int t = 0; t < kThreads; t++) CHECK(ok[t]);
}
