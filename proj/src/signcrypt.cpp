#include "hiot/signcrypt.hpp"

#include <stdexcept>

namespace hiot {

SetupResult setup(BackendPtr backend, uint32_t security_bits,
                  size_t payload_bits, int64_t freshness_window_ms, Rng& rng) {
  if (freshness_window_ms <= 0)
    throw std::invalid_argument("freshness window must be positive");
  Scalar s = backend->scalar_random(rng);
  G1Point p = backend->g1_generator();
  SystemParams params{
      backend,
      p,
      backend->g1_mul(s, p),
      backend->pair(p, p),
      security_bits,
      payload_bits,
      freshness_window_ms,
      HashSuite(backend, payload_bits),
  };
  return {std::move(params), MasterKey{s}};
}

UserKeyPair user_keygen(Bytes id, const SystemParams& params, Rng& rng) {
  Scalar x = params.backend->scalar_random(rng);
  return {std::move(id), x, params.backend->g1_mul(x, params.generator)};
}

UserCredential issue_credential(const MasterKey& master,
                                std::span<const uint8_t> id,
                                const G1Point& user_pk,
                                const SystemParams& params, Rng& rng) {
  const auto& be = *params.backend;
  Scalar w1 = be.scalar_random(rng);
  Scalar h_id = params.hash.h0(id);
  Scalar delta = params.hash.h1(id, user_pk);
  Scalar acd_exp = be.sc_add(w1, h_id);
  UserCredential cred;
  cred.acd = be.g1_mul(acd_exp, params.generator);
  cred.sig = be.sc_add(acd_exp, be.sc_mul(master.s, delta));
  cred.delta = delta;
  return cred;
}

bool verify_credential(const UserCredential& cred, const SystemParams& params) {
  const auto& be = *params.backend;
  G1Point rhs = be.g1_sub(be.g1_mul(cred.sig, params.generator),
                          be.g1_mul(cred.delta, params.master_pub));
  return be.g1_eq(cred.acd, rhs);
}

PartialKey issue_partial_key(const MasterKey& master,
                             std::span<const uint8_t> id,
                             const SystemParams& params, Rng& rng) {
  const auto& be = *params.backend;
  Scalar t = be.scalar_random(rng);
  PartialKey pk;
  pk.partial_pub = be.g1_mul(t, params.generator);
  pk.gamma = params.hash.h1(id, pk.partial_pub);
  pk.partial_key = be.sc_add(t, be.sc_mul(master.s, pk.gamma));
  return pk;
}

bool verify_partial_key(const PartialKey& pk, const SystemParams& params) {
  const auto& be = *params.backend;
  G1Point dp = be.g1_mul(pk.partial_key, params.generator);
  G1Point gp = be.g1_mul(pk.gamma, params.generator);
  G2Element lhs = be.pair(dp, params.generator);
  G2Element rhs = be.g2_mul(be.pair(pk.partial_pub, params.generator),
                            be.pair(params.master_pub, gp));
  return be.g2_eq(lhs, rhs);
}

bool verify_partial_key_scalar(const PartialKey& pk,
                               const SystemParams& params) {
  const auto& be = *params.backend;
  G1Point lhs = be.g1_mul(pk.partial_key, params.generator);
  G1Point rhs = be.g1_add(pk.partial_pub,
                          be.g1_mul(pk.gamma, params.master_pub));
  return be.g1_eq(lhs, rhs);
}

SensorKeyMaterial sensor_finalize_keys(Bytes id, const PartialKey& pk,
                                       const SystemParams& params, Rng& rng) {
  const auto& be = *params.backend;
  Scalar x = be.scalar_random(rng);
  return {std::move(id), pk.partial_pub,    pk.partial_key, pk.gamma, x,
          be.g1_mul(x, params.generator)};
}

SigncryptResult signcrypt(const UserKeyPair& user, const UserCredential& cred,
                          const SensorPublicKey& receiver,
                          std::span<const uint8_t> payload,
                          const SystemParams& params, Rng& rng) {
  if (payload.size() != params.payload_bytes())
    throw std::invalid_argument("payload length mismatch");
  const auto& be = *params.backend;
  const auto& hs = params.hash;

  Bytes seed = rng.bytes(params.payload_bytes());  // k
  Scalar r = hs.h2(seed, payload);

  Ciphertext sigma;
  sigma.commit = be.g1_mul(r, params.generator);
  sigma.masked_msg = xor_bytes(payload, hs.h3(seed));
  sigma.masked_key = xor_bytes(seed, hs.h3(sigma.masked_msg));
  sigma.locked_seed =
      be.g1_add(be.g1_add(be.g1_mul(r, receiver.pub1), receiver.partial_pub),
                be.g1_mul(receiver.gamma, params.master_pub));
  sigma.c = be.sc_add(be.sc_mul(user.sk, hs.h4(payload)), r);

  return {be.g1_add(sigma.commit, cred.acd), std::move(sigma)};
}

std::variant<UnsigncryptOk, UnsigncryptError> unsigncrypt_recover(
    const SensorKeyMaterial& sensor, const G1Point& masked_acd,
    const Ciphertext& sigma, const SystemParams& params) {
  if (sigma.masked_msg.size() != params.payload_bytes() ||
      sigma.masked_key.size() != params.payload_bytes())
    return UnsigncryptError::BadLengths;
  const auto& be = *params.backend;
  const auto& hs = params.hash;

  // commit = (1/x_c) * (locked_seed - dP)
  G1Point dp = be.g1_mul(sensor.partial_key, params.generator);
  G1Point commit = be.g1_mul(be.sc_inv(sensor.secret),
                             be.g1_sub(sigma.locked_seed, dp));
  // The transmitted commit must match the recovered one.
  if (!be.g1_eq(commit, sigma.commit)) return UnsigncryptError::BadSignature;

  UnsigncryptOk ok;
  Bytes seed = xor_bytes(sigma.masked_key, hs.h3(sigma.masked_msg));
  ok.payload = xor_bytes(sigma.masked_msg, hs.h3(seed));
  ok.randomizer = hs.h2(seed, ok.payload);
  ok.commit = commit;
  ok.acd = be.g1_sub(masked_acd, commit);
  return ok;
}

bool signature_check(const UnsigncryptOk& rec, const Scalar& c,
                     const G1Point& user_pk, const SystemParams& params) {
  const auto& be = *params.backend;
  G1Point rhs = be.g1_sub(be.g1_mul(c, params.generator),
                          be.g1_mul(params.hash.h4(rec.payload), user_pk));
  return be.g1_eq(rec.commit, rhs);
}

std::variant<UnsigncryptOk, UnsigncryptError> unsigncrypt(
    const SensorKeyMaterial& sensor, const G1Point& user_pk,
    const G1Point& masked_acd, const Ciphertext& sigma,
    const SystemParams& params) {
  auto rec = unsigncrypt_recover(sensor, masked_acd, sigma, params);
  if (std::holds_alternative<UnsigncryptError>(rec)) return rec;
  if (!signature_check(std::get<UnsigncryptOk>(rec), sigma.c, user_pk, params))
    return UnsigncryptError::BadSignature;
  return rec;
}

SessionSecrets derive_session(std::span<const uint8_t> sensor_id,
                              uint64_t timestamp_ms, const G1Point& acd,
                              const Scalar& c, const G1Point& commit,
                              const SystemParams& params) {
  const auto& be = *params.backend;
  const auto& hs = params.hash;

  Bytes left;  // ID_c || t_c
  put_lp(left, sensor_id);
  Bytes ts;
  put_u64_be(ts, timestamp_ms);
  put_lp(left, ts);

  Bytes right;  // Acd || c
  put_lp(right, be.g1_to_bytes(acd));
  put_lp(right, be.scalar_to_bytes(c));

  SessionSecrets out;
  out.digest = hs.h1(left, right);
  Scalar key = hs.h2(be.scalar_to_bytes(out.digest), be.g1_to_bytes(commit));
  out.key = be.scalar_to_bytes(key);
  out.mac_tag = hs.mac(out.key, be.scalar_to_bytes(out.digest));
  return out;
}

bool confirm_session(const SessionSecrets& mine,
                     std::span<const uint8_t> received_tag,
                     const SystemParams&) {
  return tag_eq(mine.mac_tag, received_tag);
}

}  // namespace hiot
