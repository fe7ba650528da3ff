#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <random>

#include "seqdec/codes.hpp"

using namespace seqdec;

namespace {

std::vector<std::uint8_t> random_bits(std::mt19937_64& eng, int n) {
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = static_cast<std::uint8_t>(eng() & 1);
  return v;
}

// weight enumeration by plain binary counting, independent of the Gray walk
std::vector<std::uint64_t> weights_by_counting(const BlockCode& c) {
  std::vector<std::uint64_t> w(c.n() + 1, 0);
  for (std::uint64_t info = 0; info < (1ULL << c.k()); ++info) {
    std::uint64_t cw = 0;
    for (int i = 0; i < c.k(); ++i) {
      if ((info >> i) & 1) cw ^= c.rows()[i];
    }
    ++w[std::popcount(cw)];
  }
  return w;
}

}  // namespace

TEST_CASE("extended Golay code", "[codes][golay]") {
  const auto g = build_extended_golay();
  CHECK(g.n() == 24);
  CHECK(g.k() == 12);
  const auto w = weights_by_counting(g);
  CHECK(w[0] == 1);
  CHECK(w[8] == 759);
  CHECK(w[12] == 2576);
  CHECK(w[16] == 759);
  CHECK(w[24] == 1);
  for (int i = 1; i < 8; ++i) CHECK(w[i] == 0);
  CHECK(weight_distribution(g) == w);
  CHECK(minimum_distance(g) == 8);
}

TEST_CASE("extended QR-48 code", "[codes][qr48]") {
  const auto q = build_extended_qr48();
  CHECK(q.n() == 48);
  CHECK(q.k() == 24);
  const auto w = weight_distribution(q);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    total += w[i];
    if (i % 2 == 1) CHECK(w[i] == 0);  // overall parity
  }
  CHECK(total == (1ULL << 24));
  for (int i = 1; i < 12; ++i) CHECK(w[i] == 0);
  CHECK(w[12] == 17296);
  CHECK(minimum_distance(q) == 12);
}

TEST_CASE("block encoding is systematic and linear", "[codes]") {
  const auto g = build_extended_golay();
  std::mt19937_64 eng(5);
  CHECK(encode_block(g, std::vector<std::uint8_t>(12, 0)).weight() == 0);
  for (int i = 0; i < 12; ++i) {
    std::vector<std::uint8_t> e(12, 0);
    e[i] = 1;
    CHECK(encode_block(g, e) == g.unpack(g.rows()[i]));
  }
  for (int t = 0; t < 200; ++t) {
    const auto a = random_bits(eng, 12), b = random_bits(eng, 12);
    std::vector<std::uint8_t> ab(12);
    for (int i = 0; i < 12; ++i) ab[i] = a[i] ^ b[i];
    const auto ca = encode_block(g, a);
    CHECK(encode_block(g, ab) == (ca ^ encode_block(g, b)));
    for (int i = 0; i < 12; ++i) CHECK(ca[i] == a[i]);
    // re-encoding the information part reproduces the word
    std::vector<std::uint8_t> head(ca.bits.begin(), ca.bits.begin() + 12);
    CHECK(encode_block(g, head) == ca);
  }
  CHECK_THROWS_AS(encode_block(g, std::vector<std::uint8_t>(11, 0)), LengthMismatch);
}

TEST_CASE("reduce_to_systematic rejects a dependent leading block", "[codes]") {
  CHECK_THROWS_AS(reduce_to_systematic({0b0101, 0b1001}, 2), DomainError);
  const auto r = reduce_to_systematic({0b1110, 0b0011}, 2);
  CHECK(r[0] == 0b1101);
  CHECK(r[1] == 0b1110);
  CHECK_THROWS_AS(BlockCode("bad", 4, 2, {0b0111, 0b0011}), DomainError);
}

TEST_CASE("octal generator parsing", "[codes][octal]") {
  const auto c = build_conv216();
  CHECK(c.taps()[0] == bits_from_string("1100111"));
  CHECK(c.taps()[1] == bits_from_string("1011101"));

  const auto e = build_example_312();
  CHECK(e.taps()[0] == bits_from_string("110"));
  CHECK(e.taps()[1] == bits_from_string("101"));
  CHECK(e.taps()[2] == bits_from_string("111"));

  CHECK_THROWS_AS(parse_octal_generators({"1632044", "1145734"}, 16), TapLengthError);
  CHECK_THROWS_AS(parse_octal_generators({"635"}, 6), TapLengthError);  // padding bit set
  CHECK_THROWS_AS(parse_octal_generators({"68"}, 6), DomainError);
  // short strings are zero padded on the right
  CHECK(parse_octal_generators({"6", "5"}, 4).taps()[0] == bits_from_string("11000"));
}

TEST_CASE("convolutional encoding", "[codes][conv]") {
  const auto e = build_example_312();
  CHECK(encode_conv(e, bits_from_string("11101")).to_string() == "111010001110100101011");
  CHECK(encode_conv(e, std::vector<std::uint8_t>(7, 0)).weight() == 0);

  const auto c = build_conv216();
  std::mt19937_64 eng(11);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_bits(eng, 30), b = random_bits(eng, 30);
    std::vector<std::uint8_t> ab(30);
    for (int i = 0; i < 30; ++i) ab[i] = a[i] ^ b[i];
    CHECK(encode_conv(c, ab) == (encode_conv(c, a) ^ encode_conv(c, b)));
    CHECK(encode_conv(c, a).size() == 2u * 36u);
  }

  // time invariance: a one-step delay of the input delays the output by one block
  const auto a = random_bits(eng, 20);
  std::vector<std::uint8_t> shifted{0};
  shifted.insert(shifted.end(), a.begin(), a.end());
  const auto x = encode_conv(c, a), y = encode_conv(c, shifted);
  for (std::size_t i = 0; i < 2 * 20; ++i) CHECK(y[i + 2] == x[i]);
  for (int i = 0; i < 2; ++i) CHECK(y[i] == 0);
}

TEST_CASE("ConvCode validation", "[codes][conv]") {
  CHECK_THROWS_AS(ConvCode("x", 2, {bits_from_string("011"), bits_from_string("001")}), DomainError);
  CHECK_THROWS_AS(ConvCode("x", 2, {bits_from_string("11")}), TapLengthError);
  CHECK_THROWS_AS(ConvCode("x", 2, {bits_from_string("111")}, 2), ConfigError);
  const auto big = build_conv2116();
  CHECK(big.m() == 16);
  CHECK(big.n_out() == 2);
}
