#include "hiot/protocol.hpp"

#include <algorithm>
#include <chrono>

namespace hiot {

uint64_t SystemClock::now_ms() {
  return uint64_t(std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::system_clock::now().time_since_epoch())
                      .count());
}

const char* reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "none";
    case RejectReason::Malformed: return "malformed";
    case RejectReason::StaleTimestamp: return "stale-timestamp";
    case RejectReason::Replayed: return "replayed";
    case RejectReason::BadSignature: return "bad-signature";
    case RejectReason::UnknownAccount: return "unknown-account";
    case RejectReason::BadMac: return "bad-mac";
    case RejectReason::NoPendingSession: return "no-pending-session";
  }
  return "?";
}

void ReplayCache::insert(Bytes acd_enc, uint64_t t_ms) {
  if (entries_.size() >= policy_.max_cache) {
    // Evict the entry with the oldest timestamp.
    auto oldest = entries_.begin();
    for (auto it = entries_.begin(); it != entries_.end(); ++it)
      if (it->second < oldest->second) oldest = it;
    entries_.erase(oldest);
  }
  entries_.emplace(std::move(acd_enc), t_ms);
}

void ReplayCache::purge(uint64_t now_ms) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->second + uint64_t(policy_.window_ms) < now_ms)
      it = entries_.erase(it);
    else
      ++it;
  }
}

namespace {

WireMessage make_reject(uint8_t code) {
  return WireMessage{RejectBody{code}};
}

// |a - b| for unsigned timestamps.
uint64_t abs_diff(uint64_t a, uint64_t b) { return a > b ? a - b : b - a; }

}  // namespace

// ---------------------------------------------------------------- gateway

GatewayParty::GatewayParty(SystemParams params, MasterKey master)
    : params_(std::move(params)),
      master_(master),
      codec_(WireCodec::for_params(params_)) {}

std::vector<WireMessage> GatewayParty::handle(const WireMessage& msg,
                                              Rng& rng) {
  const auto& be = *params_.backend;
  if (const auto* req = msg.as<RegUserReqBody>()) {
    auto pk = be.g1_from_bytes(req->user_pk);
    if (!pk) return {make_reject(kRejectCodeMalformed)};
    UserCredential cred;
    {
      CountScope scope(counters_, Entity::Gwn, Phase::Registration);
      cred = issue_credential(master_, req->user_id, *pk, params_, rng);
    }
    // A re-registering user gets a fresh credential; the directory keeps
    // the latest one per identity.
    std::erase_if(users_, [&](const UserRecord& u) { return u.id == req->user_id; });
    users_.push_back({req->user_id, *pk, cred});
    RegUserRespBody resp;
    resp.acd = be.g1_to_bytes(cred.acd);
    resp.sig = be.scalar_to_bytes(cred.sig);
    resp.delta = be.scalar_to_bytes(cred.delta);
    return {WireMessage{std::move(resp)}};
  }
  if (const auto* req = msg.as<RegSensorReqBody>()) {
    PartialKey pk;
    {
      CountScope scope(counters_, Entity::Gwn, Phase::Registration);
      pk = issue_partial_key(master_, req->sensor_id, params_, rng);
    }
    RegSensorRespBody resp;
    resp.partial_pub = be.g1_to_bytes(pk.partial_pub);
    resp.partial_key = be.scalar_to_bytes(pk.partial_key);
    resp.gamma = be.scalar_to_bytes(pk.gamma);
    resp.directory_count = uint32_t(users_.size());
    std::vector<WireMessage> out;
    out.push_back(WireMessage{std::move(resp)});
    for (WireMessage& push : directory_pushes()) out.push_back(std::move(push));
    return out;
  }
  return {make_reject(kRejectCodeMalformed)};
}

std::vector<WireMessage> GatewayParty::directory_pushes() const {
  const auto& be = *params_.backend;
  std::vector<WireMessage> out;
  for (const UserRecord& u : users_) {
    DirectoryPushBody push;
    push.acd = be.g1_to_bytes(u.cred.acd);
    push.sig = be.scalar_to_bytes(u.cred.sig);
    push.user_pk = be.g1_to_bytes(u.pk);
    push.delta = be.scalar_to_bytes(u.cred.delta);
    out.push_back(WireMessage{std::move(push)});
  }
  return out;
}

// ---------------------------------------------------------------- user

UserParty::UserParty(Bytes id, SystemParams params)
    : id_(std::move(id)),
      params_(std::move(params)),
      codec_(WireCodec::for_params(params_)) {}

WireMessage UserParty::registration_request(Rng& rng) {
  {
    CountScope scope(counters_, Entity::User, Phase::Registration);
    keys_ = user_keygen(id_, params_, rng);
  }
  RegUserReqBody req;
  req.user_id = id_;
  req.user_pk = params_.backend->g1_to_bytes(keys_.pk);
  return WireMessage{std::move(req)};
}

bool UserParty::process_registration(const WireMessage& resp) {
  const auto* body = resp.as<RegUserRespBody>();
  if (!body) return false;
  const auto& be = *params_.backend;
  auto acd = be.g1_from_bytes(body->acd);
  auto sig = be.scalar_from_bytes(body->sig);
  auto delta = be.scalar_from_bytes(body->delta);
  if (!acd || !sig || !delta) return false;
  UserCredential cred{*acd, *sig, *delta};
  bool ok;
  {
    CountScope scope(counters_, Entity::User, Phase::Registration);
    ok = verify_credential(cred, params_);
  }
  if (!ok) {
    phase_ = PartyPhase::Failed;
    return false;
  }
  cred_ = cred;
  phase_ = PartyPhase::Registered;
  return true;
}

void UserParty::learn_sensor(Bytes sensor_id, const SensorPublicKey& pk) {
  for (auto& [id, existing] : known_sensors_) {
    if (id == sensor_id) {
      existing = pk;
      return;
    }
  }
  known_sensors_.emplace_back(std::move(sensor_id), pk);
}

WireMessage UserParty::begin_auth(std::span<const uint8_t> sensor_id,
                                  std::span<const uint8_t> payload,
                                  Clock& clock, Rng& rng) {
  if (phase_ == PartyPhase::Uninitialized || phase_ == PartyPhase::Failed)
    throw std::logic_error("user is not registered");
  const SensorPublicKey* target = nullptr;
  for (const auto& [id, pk] : known_sensors_) {
    if (std::equal(id.begin(), id.end(), sensor_id.begin(), sensor_id.end()))
      target = &pk;
  }
  if (!target) throw std::invalid_argument("unknown target sensor");

  SigncryptResult sc;
  {
    CountScope scope(counters_, Entity::User, Phase::Authentication);
    sc = signcrypt(keys_, cred_, *target, payload, params_, rng);
  }
  uint64_t t_ms = clock.now_ms();
  pending_ = PendingAuth{Bytes(sensor_id.begin(), sensor_id.end()), t_ms,
                         sc.sigma.c, sc.sigma.commit};
  session_.reset();  // key material exists only in Established
  phase_ = PartyPhase::AwaitingConfirm;

  const auto& be = *params_.backend;
  ServiceRequestBody req;
  req.masked_acd = be.g1_to_bytes(sc.masked_acd);
  req.c = be.scalar_to_bytes(sc.sigma.c);
  req.commit = be.g1_to_bytes(sc.sigma.commit);
  req.masked_msg = sc.sigma.masked_msg;
  req.masked_key = sc.sigma.masked_key;
  req.locked_seed = be.g1_to_bytes(sc.sigma.locked_seed);
  req.timestamp_ms = t_ms;
  return WireMessage{std::move(req)};
}

UserParty::ConfirmOutcome UserParty::complete_auth(const WireMessage& confirm) {
  const auto* body = confirm.as<MacConfirmBody>();
  if (!body) return ConfirmOutcome::Malformed;
  if (!pending_) return ConfirmOutcome::NoPendingSession;

  SessionSecrets secrets;
  {
    CountScope scope(counters_, Entity::User, Phase::Confirmation);
    secrets = derive_session(pending_->sensor_id, pending_->t_ms, cred_.acd,
                             pending_->c, pending_->commit, params_);
  }
  if (!confirm_session(secrets, body->tag, params_)) {
    phase_ = PartyPhase::Failed;
    pending_.reset();
    session_.reset();
    return ConfirmOutcome::BadMac;
  }
  session_ = Session{secrets.key, secrets.digest, pending_->sensor_id,
                     pending_->t_ms};
  pending_.reset();
  phase_ = PartyPhase::Established;
  return ConfirmOutcome::Established;
}

// ---------------------------------------------------------------- sensor

SensorParty::SensorParty(Bytes id, SystemParams params)
    : id_(std::move(id)),
      params_(std::move(params)),
      codec_(WireCodec::for_params(params_)),
      freshness_{params_.freshness_window_ms, 4096},
      cache_(freshness_) {}

void SensorParty::set_freshness(FreshnessPolicy p) {
  freshness_ = p;
  cache_ = ReplayCache(p);
}

WireMessage SensorParty::registration_request() const {
  RegSensorReqBody req;
  req.sensor_id = id_;
  return WireMessage{std::move(req)};
}

bool SensorParty::process_registration(const WireMessage& resp, Rng& rng) {
  const auto* body = resp.as<RegSensorRespBody>();
  if (!body) return false;
  const auto& be = *params_.backend;
  auto t_point = be.g1_from_bytes(body->partial_pub);
  auto d = be.scalar_from_bytes(body->partial_key);
  auto gamma = be.scalar_from_bytes(body->gamma);
  if (!t_point || !d || !gamma) return false;
  PartialKey pk{*t_point, *d, *gamma};
  {
    CountScope scope(counters_, Entity::Sensor, Phase::Registration);
    if (!verify_partial_key(pk, params_)) {
      phase_ = PartyPhase::Failed;
      return false;
    }
    keys_ = sensor_finalize_keys(id_, pk, params_, rng);
  }
  phase_ = PartyPhase::Registered;
  return true;
}

bool SensorParty::process_directory_push(const WireMessage& push) {
  const auto* body = push.as<DirectoryPushBody>();
  if (!body) return false;
  const auto& be = *params_.backend;
  auto acd = be.g1_from_bytes(body->acd);
  auto sig = be.scalar_from_bytes(body->sig);
  auto delta = be.scalar_from_bytes(body->delta);
  auto pk = be.g1_from_bytes(body->user_pk);
  if (!acd || !sig || !delta || !pk) return false;
  UserCredential cred{*acd, *sig, *delta};
  bool ok;
  {
    CountScope scope(counters_, Entity::Sensor, Phase::Registration);
    ok = verify_credential(cred, params_);
  }
  if (!ok) return false;
  // Replace any entry with the same account point.
  std::erase_if(directory_,
                [&](const DirEntry& e) { return e.acd_enc == body->acd; });
  directory_.push_back({body->acd, *acd, *sig, *delta, *pk});
  return true;
}

SensorParty::RequestOutcome SensorParty::reject(RejectReason reason) const {
  uint8_t code = reason == RejectReason::Malformed ? kRejectCodeMalformed
                                                   : kRejectCodeProtocol;
  return {false, reason, make_reject(code)};
}

SensorParty::RequestOutcome SensorParty::handle_request(const WireMessage& req,
                                                        Clock& clock) {
  if (phase_ == PartyPhase::Uninitialized || phase_ == PartyPhase::Failed)
    throw std::logic_error("sensor is not registered");
  const auto* body = req.as<ServiceRequestBody>();
  if (!body) return reject(RejectReason::Malformed);

  // Freshness comes first; both past- and future-dated requests fail.
  uint64_t now = clock.now_ms();
  if (abs_diff(body->timestamp_ms, now) >= uint64_t(freshness_.window_ms))
    return reject(RejectReason::StaleTimestamp);

  const auto& be = *params_.backend;
  auto masked_acd = be.g1_from_bytes(body->masked_acd);
  auto c = be.scalar_from_bytes(body->c);
  auto commit = be.g1_from_bytes(body->commit);
  auto locked_seed = be.g1_from_bytes(body->locked_seed);
  if (!masked_acd || !c || !commit || !locked_seed)
    return reject(RejectReason::Malformed);
  Ciphertext sigma{*c, *commit, body->masked_msg, body->masked_key,
                   *locked_seed};

  CountScope scope(counters_, Entity::Sensor, Phase::Authentication);

  auto recovered = unsigncrypt_recover(keys_, *masked_acd, sigma, params_);
  if (const auto* err = std::get_if<UnsigncryptError>(&recovered)) {
    return reject(*err == UnsigncryptError::BadLengths
                      ? RejectReason::Malformed
                      : RejectReason::BadSignature);
  }
  const auto& rec = std::get<UnsigncryptOk>(recovered);
  Bytes acd_enc = be.g1_to_bytes(rec.acd);

  const DirEntry* entry = nullptr;
  if (lookup_ == LookupPolicy::ByRecoveredAccount) {
    for (const DirEntry& e : directory_)
      if (e.acd_enc == acd_enc) entry = &e;
    if (!entry) return reject(RejectReason::UnknownAccount);
    if (!signature_check(rec, sigma.c, entry->pk, params_))
      return reject(RejectReason::BadSignature);
  } else {
    for (const DirEntry& e : directory_) {
      if (signature_check(rec, sigma.c, e.pk, params_)) {
        entry = &e;
        break;
      }
    }
    if (!entry) return reject(RejectReason::BadSignature);
    if (entry->acd_enc != acd_enc) return reject(RejectReason::UnknownAccount);
  }

  cache_.purge(now);
  if (cache_.contains(acd_enc, body->timestamp_ms))
    return reject(RejectReason::Replayed);

  SessionSecrets secrets = derive_session(id_, body->timestamp_ms, rec.acd,
                                          sigma.c, rec.commit, params_);
  cache_.insert(acd_enc, body->timestamp_ms);
  session_ = Session{secrets.key, secrets.digest, acd_enc, now};
  phase_ = PartyPhase::Established;

  MacConfirmBody confirm;
  confirm.tag = secrets.mac_tag;
  return {true, RejectReason::None, WireMessage{std::move(confirm)}};
}

}  // namespace hiot
