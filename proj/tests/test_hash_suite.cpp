#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "hiot/hash_suite.hpp"

using namespace hiot;

namespace {
BackendPtr toy() {
  static BackendPtr be = make_toy_backend(1009);
  return be;
}
}  // namespace

TEST_CASE("construction rejects non-byte widths") {
  CHECK_THROWS_AS(HashSuite(toy(), 0), std::invalid_argument);
  CHECK_THROWS_AS(HashSuite(toy(), 13), std::invalid_argument);
  CHECK_NOTHROW(HashSuite(toy(), 256));
}

TEST_CASE("scalar hashes are deterministic, nonzero and in range") {
  HashSuite hs(toy(), 256);
  CHECK(hs.h0(to_bytes("x")) == hs.h0(to_bytes("x")));
  Scalar empty = hs.h0({});
  CHECK(empty.v[0] > 0);
  CHECK(empty.v[0] < 1009);

  // Frozen regression vectors (toy modulus 1009).
  CHECK(hs.h0(to_bytes("user-A")).v[0] == 1008);
  CHECK(hs.h2(to_bytes("pinned-seed"), to_bytes("pinned-msg")).v[0] == 332);
  CHECK(hs.h4(to_bytes("pinned-payload")).v[0] == 136);

  auto p17 = toy()->g1_mul(toy()->scalar_from_u64(17), toy()->g1_generator());
  CHECK(hs.h1(to_bytes("id-pinned"), p17).v[0] == 257);
}

TEST_CASE("h1 is sensitive to the point argument") {
  HashSuite hs(toy(), 256);
  auto p = toy()->g1_generator();
  auto p2 = toy()->g1_mul(toy()->scalar_from_u64(2), p);
  CHECK(hs.h1(to_bytes("m"), p) != hs.h1(to_bytes("m"), p2));
}

TEST_CASE("avalanche: one flipped message bit moves h1") {
  HashSuite hs(toy(), 256);
  auto p = toy()->g1_generator();
  DrbgRng rng(5);
  int changed = 0;
  for (int i = 0; i < 100; i++) {
    Bytes msg = rng.bytes(24);
    Scalar base = hs.h1(msg, p);
    Bytes flipped = msg;
    flipped[i % msg.size()] ^= uint8_t(1u << (i % 8));
    if (hs.h1(flipped, p) != base) changed++;
  }
  // With q=1009 two distinct inputs still collide with odds ~1/1008.
  CHECK(changed >= 98);
}

TEST_CASE("h2 is order-sensitive") {
  HashSuite hs(toy(), 256);
  DrbgRng rng(6);
  int differing = 0;
  for (int i = 0; i < 100; i++) {
    Bytes a = rng.bytes(8), b = rng.bytes(9);
    if (hs.h2(a, b) != hs.h2(b, a)) differing++;
  }
  CHECK(differing >= 98);
}

TEST_CASE("length-prefixed framing kills concatenation ambiguity") {
  HashSuite hs(toy(), 256);
  // ("ab","c") and ("a","bc") concatenate identically without prefixes.
  CHECK(hs.h2(to_bytes("ab"), to_bytes("c")) !=
        hs.h2(to_bytes("a"), to_bytes("bc")));
}

TEST_CASE("h3 has exact width and XOR involutes") {
  HashSuite hs(toy(), 256);
  CHECK(hs.h3({}).size() == 32);
  HashSuite wide(toy(), 512);
  CHECK(wide.h3({}).size() == 64);

  DrbgRng rng(7);
  Bytes x = rng.bytes(32), k = rng.bytes(16);
  Bytes mask = hs.h3(k);
  CHECK(xor_bytes(xor_bytes(x, mask), mask) == x);

  // Frozen vector: h3 of 32 zero bytes.
  Bytes zeros(32, 0);
  CHECK(hex_encode(hs.h3(zeros)) ==
        "bfb364b33c2647ec462fe4e3c1275ffe23bcc69b37041e80986ac67e0c2c7056");
}

TEST_CASE("xor width mismatch throws") {
  CHECK_THROWS_AS(xor_bytes(Bytes(3), Bytes(4)), std::invalid_argument);
}

TEST_CASE("mac round-trip, bit flip, wrong key") {
  HashSuite hs(toy(), 256);
  DrbgRng rng(8);
  Bytes key = rng.bytes(32), msg = rng.bytes(40);
  Bytes tag = hs.mac(key, msg);
  CHECK(tag.size() == kMacTagBytes);
  CHECK(hs.mac_verify(key, msg, tag));

  Bytes bad = tag;
  bad[0] ^= 1;
  CHECK_FALSE(hs.mac_verify(key, msg, bad));
  CHECK_FALSE(hs.mac_verify(key, msg, Bytes{}));

  Bytes key2 = rng.bytes(32);
  CHECK_FALSE(hs.mac_verify(key2, msg, tag));
}

TEST_CASE("reduction sanity: 10k samples, no zeros, >95% residue coverage") {
  HashSuite hs(toy(), 256);
  std::set<uint64_t> seen;
  for (uint32_t i = 0; i < 10000; i++) {
    Bytes input;
    put_u32_be(input, i);
    Scalar s = hs.h0(input);
    REQUIRE(s.v[0] > 0);
    REQUIRE(s.v[0] < 1009);
    seen.insert(s.v[0]);
  }
  CHECK(seen.size() > size_t(0.95 * 1008));
}

TEST_CASE("domain tags separate the five functions") {
  HashSuite hs(toy(), 256);
  Bytes input = to_bytes("same-input");
  std::set<uint64_t> outputs{hs.h0(input).v[0],
                             hs.h2(input, {}).v[0],
                             hs.h4(input).v[0]};
  // Different domains on identical input should not all coincide.
  CHECK(outputs.size() >= 2);
  // And the suite tracks its backend's modulus.
  HashSuite big(make_toy_backend(kLargeToyPrime), 256);
  CHECK(big.h0(input).v[0] >= 1009);  // overwhelmingly likely on 61 bits
}
