#include "hiot/harness.hpp"

#include <algorithm>
#include <stdexcept>

namespace hiot {

Harness::Harness(BackendPtr backend, uint64_t seed, Options opts)
    : rng_(seed),
      clock_(),
      sys_(setup(std::move(backend), opts.security_bits, opts.payload_bits,
                 opts.freshness_window_ms, rng_)),
      codec_(WireCodec::for_params(sys_.params)),
      net_(seed ^ 0x5e55a0u),
      gwn_(std::make_unique<GatewayParty>(sys_.params, sys_.master)),
      sensor_(to_bytes("sensor-1"), sys_.params) {
  users_.reserve(opts.user_count);
  for (size_t i = 0; i < opts.user_count; i++) {
    users_.emplace_back(to_bytes("user-" + std::to_string(i)), sys_.params);
    UserParty& u = users_.back();
    auto resp = gwn_->handle(u.registration_request(rng_), rng_);
    if (resp.size() != 1 || !u.process_registration(resp[0]))
      throw std::runtime_error("user registration failed");
  }
  auto out = gwn_->handle(sensor_.registration_request(), rng_);
  if (out.empty() || !sensor_.process_registration(out[0], rng_))
    throw std::runtime_error("sensor registration failed");
  for (size_t i = 1; i < out.size(); i++) {
    if (!sensor_.process_directory_push(out[i]))
      throw std::runtime_error("directory push rejected");
  }
  for (UserParty& u : users_) u.learn_sensor(sensor_.id(), sensor_.public_key());
}

Harness::HandshakeResult Harness::handshake(size_t user_index, Fault fault) {
  UserParty& u = users_.at(user_index);
  Bytes payload = rng_.bytes(sys_.params.payload_bytes());
  WireMessage req = u.begin_auth(sensor_.id(), payload, clock_, rng_);

  HandshakeResult res;
  res.request_frame = codec_.encode(req);

  auto deliveries = net_.send(clock_.now_ms(), res.request_frame, fault);
  std::stable_sort(deliveries.begin(), deliveries.end(),
                   [](const Delivery& a, const Delivery& b) {
                     return a.at_ms < b.at_ms;
                   });

  WireMessage reply;
  bool have_reply = false;
  for (const Delivery& d : deliveries) {
    clock_.set(d.at_ms);
    WireMessage arrived_reply;
    DeliveryOutcome out = deliver_raw(d.frame, &arrived_reply);
    res.deliveries.push_back(out);
    if (out.accepted && !have_reply) {
      reply = arrived_reply;
      have_reply = true;
    }
  }
  if (have_reply) {
    res.reply_frame = codec_.encode(reply);
    res.user_outcome = u.complete_auth(reply);
    res.established =
        res.user_outcome == UserParty::ConfirmOutcome::Established;
    if (res.established) {
      res.user_key = u.session()->key;
      res.sensor_key = sensor_.session()->key;
    }
  }
  return res;
}

Harness::DeliveryOutcome Harness::deliver_raw(std::span<const uint8_t> frame,
                                              WireMessage* reply) {
  auto decoded = codec_.decode(frame);
  if (std::holds_alternative<DecodeError>(decoded))
    return {false, RejectReason::Malformed};
  auto outcome = sensor_.handle_request(std::get<WireMessage>(decoded), clock_);
  if (reply) *reply = outcome.reply;
  return {outcome.accepted, outcome.reason};
}

}  // namespace hiot
