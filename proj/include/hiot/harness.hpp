#pragma once

#include <vector>

#include "hiot/protocol.hpp"
#include "hiot/simnet.hpp"

namespace hiot {

// One gateway, n users, one sensor, registered end to end over wire
// messages. Shared by tests, attack scenarios, the benchmark and the CLI.
class Harness {
 public:
  struct Options {
    size_t user_count = 1;
    uint32_t security_bits = 128;
    size_t payload_bits = 256;
    int64_t freshness_window_ms = 5000;
  };

  Harness(BackendPtr backend, uint64_t seed)
      : Harness(std::move(backend), seed, Options{}) {}
  Harness(BackendPtr backend, uint64_t seed, Options opts);

  struct DeliveryOutcome {
    bool accepted = false;
    RejectReason reason = RejectReason::None;
  };

  struct HandshakeResult {
    bool established = false;
    UserParty::ConfirmOutcome user_outcome =
        UserParty::ConfirmOutcome::NoPendingSession;
    std::vector<DeliveryOutcome> deliveries;  // one per arriving request copy
    Bytes request_frame;
    Bytes reply_frame;
    Bytes user_key, sensor_key;
  };

  // Runs one authentication handshake for users_[user_index], optionally
  // injecting a transport fault on the service request.
  HandshakeResult handshake(size_t user_index = 0, Fault fault = Fault::none());

  // Feeds one raw service-request frame to the sensor at the current mock
  // time; used by adversaries to deliver crafted or mutated frames.
  DeliveryOutcome deliver_raw(std::span<const uint8_t> frame,
                              WireMessage* reply = nullptr);

  SystemParams& params() { return sys_.params; }
  const MasterKey& master() const { return sys_.master; }
  WireCodec& codec() { return codec_; }
  MockClock& clock() { return clock_; }
  DrbgRng& rng() { return rng_; }
  SimNet& net() { return net_; }
  GatewayParty& gwn() { return *gwn_; }
  UserParty& user(size_t i = 0) { return users_.at(i); }
  size_t user_count() const { return users_.size(); }
  SensorParty& sensor() { return sensor_; }

 private:
  DrbgRng rng_;
  MockClock clock_;
  SetupResult sys_;
  WireCodec codec_;
  SimNet net_;
  std::unique_ptr<GatewayParty> gwn_;
  std::vector<UserParty> users_;
  SensorParty sensor_;
};

}  // namespace hiot
