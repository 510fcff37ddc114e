#pragma once

#include <optional>
#include <variant>

#include "hiot/algebra.hpp"
#include "hiot/bytes.hpp"
#include "hiot/hash_suite.hpp"
#include "hiot/rng.hpp"

namespace hiot {

// Published system parameters. P is the backend generator; P_pub = sP for
// the gateway master secret s; g = pair(P, P).
struct SystemParams {
  BackendPtr backend;
  G1Point generator;
  G1Point master_pub;
  G2Element g;
  uint32_t security_bits = 128;
  size_t payload_bits = 256;
  int64_t freshness_window_ms = 5000;
  HashSuite hash;

  size_t payload_bytes() const { return payload_bits / 8; }
};

struct MasterKey {
  Scalar s;
};

struct UserKeyPair {
  Bytes id;       // ID_p
  Scalar sk;      // x_p
  G1Point pk;     // PK_p = x_p * P
};

// Gateway-issued anonymous account triple. The account point acd doubles
// as the user's identifier; sig and delta let anyone holding P_pub check
// acd = sig*P - delta*P_pub.
struct UserCredential {
  G1Point acd;
  Scalar sig;    // sigma_1
  Scalar delta;  // H1(ID_p, PK_p)
};

// Gateway part of a sensor's key: partial_pub = tP, partial_key = t +
// s*gamma with gamma = H1(ID_c, partial_pub).
struct PartialKey {
  G1Point partial_pub;  // T
  Scalar partial_key;   // d
  Scalar gamma;
};

// Composite sensor public key {T, PK_c1, gamma}.
struct SensorPublicKey {
  G1Point partial_pub;  // T
  G1Point pub1;         // PK_c1 = x_c * P
  Scalar gamma;
};

struct SensorKeyMaterial {
  Bytes id;             // ID_c
  G1Point partial_pub;  // T
  Scalar partial_key;   // d
  Scalar gamma;
  Scalar secret;        // x_c
  G1Point pub1;         // PK_c1

  SensorPublicKey public_key() const { return {partial_pub, pub1, gamma}; }
};

// Signcryption tuple. `c` binds payload and randomizer to the sender key;
// `commit` = rP; `masked_msg` = m xor H3(k); `masked_key` = k xor
// H3(masked_msg); `locked_seed` = r*PK_c1 + T + gamma*P_pub, recoverable
// only with the receiver's full private key.
struct Ciphertext {
  Scalar c;
  G1Point commit;
  Bytes masked_msg;
  Bytes masked_key;
  G1Point locked_seed;
};

struct SetupResult {
  SystemParams params;
  MasterKey master;
};

// --- registration-phase algorithms ---

SetupResult setup(BackendPtr backend, uint32_t security_bits,
                  size_t payload_bits, int64_t freshness_window_ms, Rng& rng);

UserKeyPair user_keygen(Bytes id, const SystemParams& params, Rng& rng);

UserCredential issue_credential(const MasterKey& master,
                                std::span<const uint8_t> id,
                                const G1Point& user_pk,
                                const SystemParams& params, Rng& rng);

bool verify_credential(const UserCredential& cred, const SystemParams& params);

PartialKey issue_partial_key(const MasterKey& master,
                             std::span<const uint8_t> id,
                             const SystemParams& params, Rng& rng);

// Pairing-product route: e(dP, P) == e(T, P) * e(P_pub, gamma*P).
bool verify_partial_key(const PartialKey& pk, const SystemParams& params);
// Algebraically equivalent scalar route: dP == T + gamma*P_pub.
bool verify_partial_key_scalar(const PartialKey& pk,
                               const SystemParams& params);

SensorKeyMaterial sensor_finalize_keys(Bytes id, const PartialKey& pk,
                                       const SystemParams& params, Rng& rng);

// --- authentication-phase algorithms ---

struct SigncryptResult {
  G1Point masked_acd;  // R_2 = commit + acd
  Ciphertext sigma;
};

// Payload must be exactly params.payload_bytes() long.
SigncryptResult signcrypt(const UserKeyPair& user, const UserCredential& cred,
                          const SensorPublicKey& receiver,
                          std::span<const uint8_t> payload,
                          const SystemParams& params, Rng& rng);

enum class UnsigncryptError : uint8_t {
  BadLengths,    // mask widths disagree with params
  BadSignature,  // commit mismatch or signature equation failed
};

struct UnsigncryptOk {
  Bytes payload;     // recovered m
  G1Point acd;       // masked_acd - commit
  G1Point commit;    // recovered and cross-checked R_1
  Scalar randomizer; // recomputed r = H2(k, m), exposed for transcripts
};

// Recovers the commit point and payload with the sensor's full private
// key; no signature verification yet (the caller picks the user key to
// check against, which may depend on the recovered account point).
std::variant<UnsigncryptOk, UnsigncryptError> unsigncrypt_recover(
    const SensorKeyMaterial& sensor, const G1Point& masked_acd,
    const Ciphertext& sigma, const SystemParams& params);

// Signature equation: commit == c*P - H4(m)*PK_p.
bool signature_check(const UnsigncryptOk& rec, const Scalar& c,
                     const G1Point& user_pk, const SystemParams& params);

// Full unsigncryption against a known user key: recover, then check.
std::variant<UnsigncryptOk, UnsigncryptError> unsigncrypt(
    const SensorKeyMaterial& sensor, const G1Point& user_pk,
    const G1Point& masked_acd, const Ciphertext& sigma,
    const SystemParams& params);

// --- session derivation (both sides) ---

struct SessionSecrets {
  Scalar digest;   // h_1
  Bytes key;       // canonical bytes of H2(h_1, R_1)
  Bytes mac_tag;   // MAC_key(h_1)
};

SessionSecrets derive_session(std::span<const uint8_t> sensor_id,
                              uint64_t timestamp_ms, const G1Point& acd,
                              const Scalar& c, const G1Point& commit,
                              const SystemParams& params);

// MAC check for the confirmation step.
bool confirm_session(const SessionSecrets& mine,
                     std::span<const uint8_t> received_tag,
                     const SystemParams& params);

}  // namespace hiot
