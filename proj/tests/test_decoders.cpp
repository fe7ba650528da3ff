#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "seqdec/channel.hpp"
#include "seqdec/decoders.hpp"

using namespace seqdec;
using Catch::Approx;

namespace {

// min zeta over all 2^L inputs by direct enumeration
double exhaustive_zeta(const Trellis& t, const LlrVector& l) {
  double best = 1e300;
  std::vector<std::uint8_t> info(t.L());
  for (std::uint64_t s = 0; s < (1ULL << t.L()); ++s) {
    for (int i = 0; i < t.L(); ++i) info[i] = (s >> i) & 1;
    best = std::min(best, zeta_metric(l, encode_conv(t.code(), info)));
  }
  return best;
}

double gda_offset(const LlrVector& l) {
  double s = 0.0;
  for (double p : l.phi) s += (std::abs(p) - 1.0) * (std::abs(p) - 1.0);
  return s;
}

}  // namespace

TEST_CASE("GDA noiseless decoding hits the minimum count", "[decoders][gda]") {
  for (const auto& code : {build_extended_golay(), build_extended_qr48()}) {
    const auto cfg = ChannelConfig::block(3.0, code.k(), code.n());
    const auto x = encode_block(code, std::vector<std::uint8_t>(code.k(), 0));
    const auto out = gda_decode(code, llr(transmit_noiseless(x, cfg), cfg));
    CHECK(out.decoded == x);
    CHECK(out.branch_computations == 2u * code.k());
    CHECK(out.branch_computations_total == 2u * code.k() + (code.n() - code.k()));
    CHECK(out.extensions == static_cast<std::uint64_t>(code.n()));
  }
}

TEST_CASE("GDA equals exhaustive ML decoding", "[decoders][gda]") {
  const auto g = build_extended_golay();
  RngStream rng(31);
  GdaDecoder dec(g);
  std::vector<std::uint8_t> info(12);
  for (double snr : {0.0, 2.0, 4.0}) {
    const auto cfg = ChannelConfig::block(snr, 12, 24);
    for (int i = 0; i < 300; ++i) {
      for (auto& b : info) b = static_cast<std::uint8_t>(rng.bit());
      const auto l = llr(transmit(encode_block(g, info), cfg, rng), cfg);
      const auto out = dec.decode(l);
      const auto ml = brute_force_ml_block(g, l);
      CHECK(out.decoded == ml);
      // the differential metric is the squared distance less a constant
      CHECK(out.metric + gda_offset(l) == Approx(squared_distance(l, ml)).epsilon(1e-9));
      // no extended path scores worse than the ML path
      CHECK(out.max_extended_metric <= out.metric + 1e-9);
      CHECK(out.branch_computations >= 24u);
      CHECK(out.branch_computations % 2 == 0);
    }
  }
}

TEST_CASE("GDA is deterministic and honours the extension cap", "[decoders][gda]") {
  const auto q = build_extended_qr48();
  const auto cfg = ChannelConfig::block(0.0, 24, 48);
  RngStream rng(4);
  const auto l = llr(transmit(encode_block(q, std::vector<std::uint8_t>(24, 0)), cfg, rng), cfg);
  const auto a = gda_decode(q, l), b = gda_decode(q, l);
  CHECK(a.decoded == b.decoded);
  CHECK(a.branch_computations == b.branch_computations);

  const auto capped = gda_decode(q, l, 10);
  CHECK(capped.overflow);
  CHECK(capped.extensions == 10u);
  CHECK(capped.decoded.size() == 0u);
}

TEST_CASE("GDA tie-breaking is FIFO", "[decoders][gda]") {
  // all-zero LLRs make every codeword equally likely; FIFO order then
  // follows the first-inserted branch at every level
  const auto g = build_extended_golay();
  const auto out = gda_decode(g, LlrVector{std::vector<double>(24, 0.0)});
  CHECK(out.decoded == encode_block(g, std::vector<std::uint8_t>(12, 0)));
}

TEST_CASE("brute force ML", "[decoders]") {
  const auto g = build_extended_golay();
  const auto cfg = ChannelConfig::block(1.0, 12, 24);
  std::vector<std::uint8_t> info{1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 1, 1};
  const auto x = encode_block(g, info);
  CHECK(brute_force_ml_block(g, llr(transmit_noiseless(x, cfg), cfg)) == x);

  // the same argmin as max correlation
  RngStream rng(2);
  for (int i = 0; i < 50; ++i) {
    const auto l = llr(transmit(x, cfg, rng), cfg);
    double best = -1e300;
    Codeword arg;
    for (std::uint64_t u = 0; u < 4096; ++u) {
      const auto c = g.unpack(g.encode_packed(u));
      double corr = 0.0;
      for (int j = 0; j < 24; ++j) corr += l.phi[j] * (c[j] ? -1.0 : 1.0);
      if (corr > best) {
        best = corr;
        arg = c;
      }
    }
    CHECK(squared_distance(l, brute_force_ml_block(g, l)) == Approx(squared_distance(l, arg)).epsilon(1e-12));
  }
  // single parity check on 25 information bits is past the exhaustive limit
  std::vector<std::uint64_t> rows;
  for (int i = 0; i < 25; ++i) rows.push_back((1ULL << i) | (1ULL << 25));
  const BlockCode spc("spc26", 26, 25, rows);
  CHECK_THROWS_AS(brute_force_ml_block(spc, LlrVector{std::vector<double>(26, 1.0)}), SizeError);
}

TEST_CASE("MLSDA noiseless plateau", "[decoders][mlsda]") {
  const auto t = build_trellis(build_conv216(), 100);
  const auto cfg = ChannelConfig::conv(5.0, 1, 100, t.code_length());
  const auto x = encode_conv(t.code(), std::vector<std::uint8_t>(100, 0));
  const auto out = mlsda_decode(t, llr(transmit_noiseless(x, cfg), cfg));
  CHECK(out.decoded == x);
  CHECK(out.branch_computations == 200u);
  CHECK(out.branch_computations_total == 206u);
  CHECK(out.metric == 0.0);
}

TEST_CASE("MLSDA matches Viterbi and exhaustive search", "[decoders][mlsda]") {
  for (const auto& t : {build_trellis(build_example_312(), 5), build_trellis(build_conv216(), 10)}) {
    MlsdaDecoder dec(t);
    RngStream rng(12);
    std::vector<std::uint8_t> info(t.L());
    for (double snr : {0.0, 3.0}) {
      const auto cfg = ChannelConfig::conv(snr, 1, t.L(), t.code_length());
      for (int i = 0; i < 200; ++i) {
        for (auto& b : info) b = static_cast<std::uint8_t>(rng.bit());
        const auto l = llr(transmit(encode_conv(t.code(), info), cfg, rng), cfg);
        const auto out = dec.decode(l);
        const auto vit = viterbi_ml(t, l);
        CHECK(out.metric == Approx(vit.metric).epsilon(1e-12));
        CHECK(zeta_metric(l, out.decoded) == Approx(out.metric).epsilon(1e-12));
        CHECK(zeta_metric(l, vit.decoded) == Approx(vit.metric).epsilon(1e-12));
        CHECK(out.metric == Approx(exhaustive_zeta(t, l)).epsilon(1e-12));
        CHECK(out.branch_computations >= 2u * t.L());
        // each node is extended at most once
        std::uint64_t nodes = 0;
        for (int lv = 0; lv < t.num_levels(); ++lv) nodes += t.states_at(lv).size();
        CHECK(out.extensions <= nodes);
        CHECK(out.max_extended_metric <= out.metric);
      }
    }
  }
}

TEST_CASE("MLSDA discards successors of closed nodes", "[decoders][mlsda]") {
  // (3,1,2) code, L = 2. The all-zero prefix closes (3, s0) at metric 0,
  // the last branch is expensive, so the 0,1 branch is explored afterwards
  // and its successor into (3, s0) must be dropped.
  const auto t = build_trellis(build_example_312(), 2);
  LlrVector l{{1, 1, 1, 1, 1, 1, 1, 1, 1, -9, -9, -9}};
  const auto out = mlsda_decode(t, l);
  CHECK(out.closed_discards == 1u);
  CHECK(out.metric == 14.0);
  CHECK(out.decoded == encode_conv(t.code(), std::vector<std::uint8_t>{0, 1}));
  const auto vit = viterbi_ml(t, l);
  CHECK(vit.metric == 14.0);
  CHECK(vit.decoded == out.decoded);
}

TEST_CASE("Viterbi oracle basics", "[decoders][viterbi]") {
  const auto t = build_trellis(build_conv216(), 12);
  const auto cfg = ChannelConfig::conv(1.0, 1, 12, t.code_length());
  std::vector<std::uint8_t> info{1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0};
  const auto x = encode_conv(t.code(), info);
  const auto clean = viterbi_ml(t, llr(transmit_noiseless(x, cfg), cfg));
  CHECK(clean.decoded == x);
  CHECK(clean.metric == 0.0);

  RngStream rng(1);
  const auto l = llr(transmit(x, cfg, rng), cfg);
  double zero_path = 0.0;
  for (double p : l.phi) {
    if (p < 0.0) zero_path += std::abs(p);
  }
  CHECK(zeta_metric(l, Codeword{std::vector<std::uint8_t>(l.phi.size(), 0)}) == Approx(zero_path));
  CHECK(viterbi_ml(t, l).metric <= zero_path);
}
