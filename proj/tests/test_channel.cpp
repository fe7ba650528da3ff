#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "seqdec/channel.hpp"
#include "seqdec/decoders.hpp"

using namespace seqdec;
using Catch::Approx;

TEST_CASE("SNR bookkeeping", "[channel]") {
  const auto b = ChannelConfig::block(3.0, 12, 24);
  CHECK(db_to_linear(3.0) == Approx(2.0 * b.gamma()).epsilon(1e-15));
  CHECK(b.n0() == Approx(1.0 / b.gamma()));
  CHECK(b.noise_stddev() == Approx(std::sqrt(1.0 / (2.0 * b.gamma()))));

  for (auto [L, m] : {std::pair{100, 6}, {60, 6}, {100, 16}, {60, 16}}) {
    const int N = 2 * (L + m);
    const auto c = ChannelConfig::conv(4.0, 1, L, N);
    CHECK(c.gamma() == Approx(0.5 * db_to_linear(4.0) * L / (L + m)).epsilon(1e-14));
    CHECK(c.gamma() < 0.5 * db_to_linear(4.0));
  }
  CHECK_THROWS_AS(ChannelConfig::block(3.0, 0, 24), DomainError);
}

TEST_CASE("transmit", "[channel]") {
  const auto cfg = ChannelConfig::block(0.0, 1, 2);
  Codeword zero{std::vector<std::uint8_t>(1000000, 0)};
  RngStream rng(3);
  const auto rx = transmit(zero, cfg, rng);
  double s = 0.0;
  for (double r : rx.r) s += r;
  const double mean = s / rx.r.size();
  CHECK(std::abs(mean - 1.0) < 4.0 * cfg.noise_stddev() / 1000.0);

  const auto clean = transmit_noiseless(Codeword{{0, 1, 1, 0}}, cfg);
  CHECK(clean.r == std::vector<double>{1.0, -1.0, -1.0, 1.0});

  // complementing the word flips the signal part for the same noise
  Codeword x{{0, 1, 0, 1, 1}}, xc{{1, 0, 1, 0, 0}};
  RngStream a(8), b(8);
  const auto ra = transmit(x, cfg, a), rb = transmit(xc, cfg, b);
  for (std::size_t j = 0; j < 5; ++j) CHECK(ra.r[j] - (x[j] ? -1.0 : 1.0) == Approx(rb.r[j] - (xc[j] ? -1.0 : 1.0)));
}

TEST_CASE("llr and hard decisions", "[channel]") {
  const auto cfg = ChannelConfig::block(2.0, 1, 2);
  const auto l = llr(ReceivedVector{{0.0, 0.5, -0.25}}, cfg);
  CHECK(l.phi[0] == 0.0);
  CHECK(l.phi[1] == Approx(4.0 * 0.5 * cfg.gamma()));
  CHECK(l.phi[2] < 0.0);

  CHECK(hard_decision(LlrVector{{2.0, -3.0, 0.0}}) == std::vector<std::uint8_t>{0, 1, 0});
  const LlrVector v{{1.5, -0.2, 3.0, -7.0}};
  LlrVector neg{v.phi};
  for (auto& p : neg.phi) p = -p;
  const auto y = hard_decision(v), yn = hard_decision(neg);
  for (std::size_t j = 0; j < y.size(); ++j) CHECK(y[j] != yn[j]);
}

TEST_CASE("decoders are invariant to positive LLR scaling", "[channel][decoders]") {
  const auto g = build_extended_golay();
  const auto t = build_trellis(build_conv216(), 20);
  const auto cg = ChannelConfig::block(2.0, 12, 24);
  const auto cc = ChannelConfig::conv(2.0, 1, 20, t.code_length());
  RngStream rng(17);
  std::vector<std::uint8_t> info(12), cinfo(20);
  for (int trial = 0; trial < 1000; ++trial) {
    for (auto& b : info) b = static_cast<std::uint8_t>(rng.bit());
    for (auto& b : cinfo) b = static_cast<std::uint8_t>(rng.bit());
    const auto lb = llr(transmit(encode_block(g, info), cg, rng), cg);
    const auto lc = llr(transmit(encode_conv(t.code(), cinfo), cc, rng), cc);
    LlrVector lc2{lc.phi};
    for (auto& p : lc2.phi) p *= 2.0;
    const auto m1 = mlsda_decode(t, lc), m2 = mlsda_decode(t, lc2);
    CHECK(m1.decoded == m2.decoded);
    CHECK(m1.branch_computations == m2.branch_computations);
    // GDA ordering is not scale free in general; its ML decision is
    LlrVector lb2{lb.phi};
    for (auto& p : lb2.phi) p *= 2.0;
    CHECK(brute_force_ml_block(g, lb) == brute_force_ml_block(g, lb2));
    CHECK(gda_decode(g, lb2).decoded == brute_force_ml_block(g, lb2));
  }
}
