#include <stdexcept>

#include "hiot/algebra.hpp"

namespace hiot {

Scalar PairingBackend::scalar_random(Rng& rng) const {
  // Wide reduction keeps the modular bias far below 2^-64; zero is
  // resampled so outputs land in Z_q*.
  for (int attempt = 0; attempt < 128; attempt++) {
    Bytes wide = rng.bytes(scalar_size() + 16);
    Scalar s = scalar_from_wide_be(wide);
    if (!s.is_zero()) return s;
  }
  throw std::runtime_error("scalar sampler kept producing zero");
}

BackendPtr make_backend(const std::string& name) {
  if (name == "toy") return make_toy_backend();
  if (name == "toy-large") return make_toy_backend(kLargeToyPrime);
  if (name == "production" || name == "bls12-381") return make_bls381_backend();
  // self-describing toy names round-trip: "toy(q=1009)"
  if (name.rfind("toy(q=", 0) == 0 && name.back() == ')') {
    uint64_t q = std::stoull(name.substr(6, name.size() - 7));
    return make_toy_backend(q);
  }
  throw std::invalid_argument("unknown backend: " + name);
}

}  // namespace hiot
