#pragma once

#include <deque>
#include <optional>
#include <set>
#include <vector>

#include "hiot/counters.hpp"
#include "hiot/signcrypt.hpp"
#include "hiot/wire.hpp"

namespace hiot {

class Clock {
 public:
  virtual ~Clock() = default;
  virtual uint64_t now_ms() = 0;
};

class SystemClock final : public Clock {
 public:
  uint64_t now_ms() override;
};

class MockClock final : public Clock {
 public:
  explicit MockClock(uint64_t start_ms = 1'700'000'000'000ull)
      : now_(start_ms) {}
  uint64_t now_ms() override { return now_; }
  void set(uint64_t ms) { now_ = ms; }
  void advance(int64_t delta_ms) { now_ += uint64_t(delta_ms); }

 private:
  uint64_t now_;
};

// Internal rejection reasons. On the wire every protocol rejection maps to
// the same opaque code; these stay distinguishable for tests and logs.
enum class RejectReason : uint8_t {
  None = 0,
  Malformed,
  StaleTimestamp,
  Replayed,
  BadSignature,
  UnknownAccount,
  BadMac,
  NoPendingSession,
};

const char* reject_reason_name(RejectReason r);

enum class PartyPhase : uint8_t {
  Uninitialized,
  Registered,
  AwaitingConfirm,
  Established,
  Failed,
};

// How the sensor picks the user key for the signature equation. Indexing
// by the recovered account point is the default; the alternative checks
// the signature against every known key first, preserving the textbook
// step order at linear cost in directory size.
enum class LookupPolicy : uint8_t { ByRecoveredAccount, SignatureFirst };

struct FreshnessPolicy {
  int64_t window_ms = 5000;   // delta_t
  size_t max_cache = 4096;
};

// Bounded set of (account-encoding, timestamp) pairs with TTL equal to
// the freshness window: entries older than the window are useless because
// the timestamp check already rejects them.
class ReplayCache {
 public:
  explicit ReplayCache(FreshnessPolicy policy) : policy_(policy) {}

  bool contains(const Bytes& acd_enc, uint64_t t_ms) const {
    return entries_.count({acd_enc, t_ms}) > 0;
  }
  void insert(Bytes acd_enc, uint64_t t_ms);
  void purge(uint64_t now_ms);
  size_t size() const { return entries_.size(); }

 private:
  FreshnessPolicy policy_;
  std::set<std::pair<Bytes, uint64_t>> entries_;
};

struct Session {
  Bytes key;
  Scalar digest;       // h_1
  Bytes peer;          // account encoding (sensor side) or sensor id (user side)
  uint64_t established_at_ms = 0;
};

// ---------------------------------------------------------------- gateway

class GatewayParty {
 public:
  GatewayParty(SystemParams params, MasterKey master);

  // Registration dispatch; responses in send order (a sensor response is
  // followed by `directory_count` directory pushes).
  std::vector<WireMessage> handle(const WireMessage& msg, Rng& rng);

  // Directory refresh for sensors that registered before a user did.
  std::vector<WireMessage> directory_pushes() const;

  const SystemParams& params() const { return params_; }
  size_t user_count() const { return users_.size(); }
  OpCounter& counters() { return counters_; }

 private:
  struct UserRecord {
    Bytes id;
    G1Point pk;
    UserCredential cred;
  };

  SystemParams params_;
  MasterKey master_;
  WireCodec codec_;
  std::vector<UserRecord> users_;
  OpCounter counters_;
};

// ---------------------------------------------------------------- user

class UserParty {
 public:
  enum class ConfirmOutcome : uint8_t {
    Established,
    BadMac,
    NoPendingSession,
    Malformed,
  };

  UserParty(Bytes id, SystemParams params);

  WireMessage registration_request(Rng& rng);
  // Verifies the returned credential; -> Registered on success.
  bool process_registration(const WireMessage& resp);

  // Sensor public keys are public information, installed out of band.
  void learn_sensor(Bytes sensor_id, const SensorPublicKey& pk);

  // Builds the service request, caches the pending session inputs and
  // moves to AwaitingConfirm. A repeated call supersedes the previous
  // pending handshake. Throws on unknown target or wrong payload width.
  WireMessage begin_auth(std::span<const uint8_t> sensor_id,
                         std::span<const uint8_t> payload, Clock& clock,
                         Rng& rng);

  ConfirmOutcome complete_auth(const WireMessage& confirm);

  PartyPhase phase() const { return phase_; }
  const std::optional<Session>& session() const { return session_; }
  const Bytes& id() const { return id_; }
  const UserKeyPair& keypair() const { return keys_; }
  const UserCredential& credential() const { return cred_; }
  OpCounter& counters() { return counters_; }

 private:
  struct PendingAuth {
    Bytes sensor_id;
    uint64_t t_ms;
    Scalar c;
    G1Point commit;
  };

  Bytes id_;
  SystemParams params_;
  WireCodec codec_;
  PartyPhase phase_ = PartyPhase::Uninitialized;
  UserKeyPair keys_;
  UserCredential cred_;
  std::vector<std::pair<Bytes, SensorPublicKey>> known_sensors_;
  std::optional<PendingAuth> pending_;
  std::optional<Session> session_;
  OpCounter counters_;
};

// ---------------------------------------------------------------- sensor

class SensorParty {
 public:
  struct RequestOutcome {
    bool accepted = false;
    RejectReason reason = RejectReason::None;
    WireMessage reply;
  };

  SensorParty(Bytes id, SystemParams params);

  WireMessage registration_request() const;
  // Pairing-checks the partial key, picks the self secret; -> Registered.
  bool process_registration(const WireMessage& resp, Rng& rng);
  // Verifies and installs one user directory entry.
  bool process_directory_push(const WireMessage& push);

  RequestOutcome handle_request(const WireMessage& req, Clock& clock);

  void set_lookup_policy(LookupPolicy p) { lookup_ = p; }
  void set_freshness(FreshnessPolicy p);

  PartyPhase phase() const { return phase_; }
  const std::optional<Session>& session() const { return session_; }
  const Bytes& id() const { return id_; }
  SensorPublicKey public_key() const { return keys_.public_key(); }
  const SensorKeyMaterial& key_material() const { return keys_; }
  size_t directory_size() const { return directory_.size(); }
  OpCounter& counters() { return counters_; }

 private:
  struct DirEntry {
    Bytes acd_enc;
    G1Point acd;
    Scalar sig;
    Scalar delta;
    G1Point pk;
  };

  RequestOutcome reject(RejectReason reason) const;

  Bytes id_;
  SystemParams params_;
  WireCodec codec_;
  PartyPhase phase_ = PartyPhase::Uninitialized;
  SensorKeyMaterial keys_;
  std::vector<DirEntry> directory_;
  LookupPolicy lookup_ = LookupPolicy::ByRecoveredAccount;
  FreshnessPolicy freshness_;
  ReplayCache cache_;
  std::optional<Session> session_;
  OpCounter counters_;
};

}  // namespace hiot
