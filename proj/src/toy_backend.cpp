#include <stdexcept>

#include "backend_access.hpp"
#include "hiot/algebra.hpp"

namespace hiot {

namespace {

using u128 = unsigned __int128;

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t q) {
  return uint64_t((u128(a) * b) % q);
}

uint64_t addmod(uint64_t a, uint64_t b, uint64_t q) {
  uint64_t s = a + b;  // no overflow: q < 2^62
  return s >= q ? s - q : s;
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t q) {
  uint64_t acc = 1 % q;
  while (exp) {
    if (exp & 1) acc = mulmod(acc, base, q);
    base = mulmod(base, base, q);
    exp >>= 1;
  }
  return acc;
}

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                     23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, s++;
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                     23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod(a % n, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; i++) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// Group elements are their discrete logs: a G1 point is the exponent a of
// aP, a G2 element the exponent x of g^x. Pairing is exponent
// multiplication, which makes every algebraic identity checkable in the
// clear. Insecure by design; test oracle only.
class ToyBackend final : public PairingBackend {
 public:
  explicit ToyBackend(uint64_t q)
      : q_(q), id_(detail::BackendAccess::fresh_backend_id()) {
    if (q < 3 || q >= (1ull << 62) || !is_prime_u64(q))
      throw std::invalid_argument("toy modulus must be an odd prime < 2^62");
  }

  std::string name() const override {
    return "toy(q=" + std::to_string(q_) + ")";
  }
  bool has_dlog_oracle() const override { return true; }
  size_t scalar_size() const override { return 8; }
  size_t g1_size() const override { return 8; }
  size_t g2_size() const override { return 8; }

  Bytes order_bytes() const override {
    Bytes b;
    put_u64_be(b, q_);
    return b;
  }

  Scalar scalar_zero() const override { return Scalar{}; }
  Scalar scalar_one() const override { return wrap(1 % q_); }
  Scalar scalar_from_u64(uint64_t v) const override { return wrap(v % q_); }

  Scalar scalar_from_wide_be(std::span<const uint8_t> bytes) const override {
    uint64_t acc = 0;
    for (uint8_t b : bytes) acc = addmod(mulmod(acc, 256 % q_, q_), b % q_, q_);
    return wrap(acc);
  }

  Scalar sc_add(const Scalar& a, const Scalar& b) const override {
    return wrap(addmod(val(a), val(b), q_));
  }
  Scalar sc_sub(const Scalar& a, const Scalar& b) const override {
    return wrap(addmod(val(a), q_ - val(b), q_));
  }
  Scalar sc_mul(const Scalar& a, const Scalar& b) const override {
    return wrap(mulmod(val(a), val(b), q_));
  }
  Scalar sc_neg(const Scalar& a) const override {
    uint64_t v = val(a);
    return wrap(v == 0 ? 0 : q_ - v);
  }
  Scalar sc_inv(const Scalar& a) const override {
    uint64_t v = val(a);
    if (v == 0) throw std::invalid_argument("inverse of zero");
    return wrap(powmod(v, q_ - 2, q_));
  }

  Bytes scalar_to_bytes(const Scalar& s) const override {
    Bytes b;
    put_u64_be(b, val(s));
    return b;
  }
  std::optional<Scalar> scalar_from_bytes(
      std::span<const uint8_t> bytes) const override {
    auto v = decode_u64(bytes);
    if (!v) return std::nullopt;
    return wrap(*v);
  }

  G1Point g1_generator() const override { return point(1); }
  G1Point g1_identity() const override { return point(0); }
  bool g1_is_identity(const G1Point& x) const override { return dlog(x) == 0; }
  G1Point g1_add(const G1Point& a, const G1Point& b) const override {
    return point(addmod(dlog(a), dlog(b), q_));
  }
  G1Point g1_sub(const G1Point& a, const G1Point& b) const override {
    return point(addmod(dlog(a), q_ - dlog(b), q_));
  }
  G1Point g1_neg(const G1Point& a) const override {
    uint64_t v = dlog(a);
    return point(v == 0 ? 0 : q_ - v);
  }
  bool g1_eq(const G1Point& a, const G1Point& b) const override {
    return dlog(a) == dlog(b);
  }
  Bytes g1_to_bytes(const G1Point& x) const override {
    Bytes b;
    put_u64_be(b, dlog(x));
    return b;
  }
  std::optional<G1Point> g1_from_bytes(
      std::span<const uint8_t> bytes) const override {
    auto v = decode_u64(bytes);
    if (!v) return std::nullopt;
    return point(*v);
  }

  G2Element g2_identity() const override { return element(0); }
  G2Element g2_mul(const G2Element& a, const G2Element& b) const override {
    return element(addmod(exp_of(a), exp_of(b), q_));
  }
  bool g2_eq(const G2Element& a, const G2Element& b) const override {
    return exp_of(a) == exp_of(b);
  }
  Bytes g2_to_bytes(const G2Element& x) const override {
    Bytes b;
    put_u64_be(b, exp_of(x));
    return b;
  }

  uint64_t g1_dlog(const G1Point& x) const override { return dlog(x); }

 protected:
  G1Point do_g1_mul(const Scalar& k, const G1Point& x) const override {
    return point(mulmod(val(k), dlog(x), q_));
  }
  G2Element do_g2_exp(const G2Element& base, const Scalar& k) const override {
    return element(mulmod(exp_of(base), val(k), q_));
  }
  G2Element do_pair(const G1Point& x, const G1Point& y) const override {
    return element(mulmod(dlog(x), dlog(y), q_));
  }

 private:
  Scalar wrap(uint64_t v) const {
    Scalar s;
    s.v[0] = v;
    return s;
  }
  uint64_t val(const Scalar& s) const {
    if (s.v[1] | s.v[2] | s.v[3] || s.v[0] >= q_)
      throw std::invalid_argument("scalar out of range for toy modulus");
    return s.v[0];
  }
  G1Point point(uint64_t dl) const {
    G1Point p;
    detail::BackendAccess::as<uint64_t>(p) = dl;
    detail::BackendAccess::set_owner(p, id_);
    return p;
  }
  uint64_t dlog(const G1Point& p) const {
    detail::require_owner(detail::BackendAccess::owner(p), id_, "toy g1");
    return detail::BackendAccess::as<uint64_t>(p);
  }
  G2Element element(uint64_t e) const {
    G2Element x;
    detail::BackendAccess::as<uint64_t>(x) = e;
    detail::BackendAccess::set_owner(x, id_);
    return x;
  }
  uint64_t exp_of(const G2Element& x) const {
    detail::require_owner(detail::BackendAccess::owner(x), id_, "toy g2");
    return detail::BackendAccess::as<uint64_t>(x);
  }
  std::optional<uint64_t> decode_u64(std::span<const uint8_t> bytes) const {
    if (bytes.size() != 8) return std::nullopt;
    uint64_t v = get_u64_be(bytes.data());
    if (v >= q_) return std::nullopt;
    return v;
  }

  uint64_t q_;
  uint32_t id_;
};

}  // namespace

BackendPtr make_toy_backend(uint64_t q) {
  return std::make_shared<ToyBackend>(q);
}

}  // namespace hiot
