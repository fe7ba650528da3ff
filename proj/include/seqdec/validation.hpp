#pragma once

// Cross-module self checks run by `seqdec validate`.

#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "seqdec/bounds.hpp"
#include "seqdec/channel.hpp"
#include "seqdec/codes.hpp"
#include "seqdec/decoders.hpp"
#include "seqdec/experiment.hpp"
#include "seqdec/trellis.hpp"

namespace seqdec {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }

  void print(std::ostream& os) const {
    for (const auto& c : checks) os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
};

struct ValidationOptions {
  std::uint64_t seed = 20240601;
  std::uint64_t dominance_samples = 200000;
  std::uint64_t monotonicity_samples = 1000000;
  std::uint64_t ml_trials = 200;
  bool corrupt_dstar = false;  // negative control for the d* oracle
};

/// Per-sample partial sums for the mixed Gaussian / clipped-Gaussian sum:
/// for each sample, prefix sums of d_max N(s,1) draws and of nd_max
/// min(N(s,1), 0) draws. Every (d, nd) cell reuses the same draws.
struct MixedSumTally {
  std::vector<std::vector<std::uint64_t>> hits;  // [d][nd] count of Y <= 0
  std::uint64_t samples = 0;

  double estimate(int d, int nd) const { return static_cast<double>(hits[d][nd]) / static_cast<double>(samples); }
  double std_error(int d, int nd) const {
    const double p = estimate(d, nd);
    return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(samples));
  }
};

inline MixedSumTally tally_mixed_sums(int d_max, int nd_max, double gamma, std::uint64_t samples, RngStream& rng,
                                      double scale = 1.0) {
  MixedSumTally t;
  t.samples = samples;
  t.hits.assign(d_max + 1, std::vector<std::uint64_t>(nd_max + 1, 0));
  const double mean = std::sqrt(2.0 * gamma) * scale;
  std::vector<double> g(d_max + 1), c(nd_max + 1);
  for (std::uint64_t i = 0; i < samples; ++i) {
    g[0] = 0.0;
    for (int d = 1; d <= d_max; ++d) g[d] = g[d - 1] + sample_gaussian(rng, mean, scale);
    c[0] = 0.0;
    for (int e = 1; e <= nd_max; ++e) c[e] = c[e - 1] + std::min(sample_gaussian(rng, mean, scale), 0.0);
    for (int d = 0; d <= d_max; ++d) {
      auto& row = t.hits[d];
      for (int e = 0; e <= nd_max; ++e) row[e] += (g[d] + c[e] <= 0.0) ? 1 : 0;
    }
  }
  return t;
}

/// Every (level, state) d* entry against exhaustive enumeration of input
/// sequences. Only feasible for small L.
inline CheckResult check_dstar_oracle(const Trellis& t) {
  CheckResult r{"dstar-oracle", true, ""};
  const int L = t.L();
  if (L > 16) throw SizeError("check_dstar_oracle: L too large for enumeration");
  const int last = L + t.m();
  const std::uint32_t S = t.num_states();
  std::vector<int> best(static_cast<std::size_t>(t.num_levels()) * S, Trellis::kAbsent);
  for (std::uint64_t seq = 0; seq < (1ULL << L); ++seq) {
    std::uint32_t state = 0;
    int w = 0;
    best[t.index(0, 0)] = 0;
    for (int lv = 0; lv < last; ++lv) {
      const int u = lv < L ? static_cast<int>((seq >> lv) & 1ULL) : 0;
      const auto& tr = t.transition(state, u);
      w += tr.weight;
      state = tr.next_state;
      int& b = best[t.index(lv + 1, state)];
      if (b == Trellis::kAbsent || w < b) b = w;
    }
  }
  int mismatches = 0;
  for (int lv = 0; lv < t.num_levels(); ++lv) {
    for (std::uint32_t s = 0; s < S; ++s) {
      if (best[t.index(lv, s)] != t.dstar(lv, s)) ++mismatches;
    }
  }
  r.passed = mismatches == 0;
  r.detail = t.code().name() + " L=" + std::to_string(L) + ": " + std::to_string(mismatches) + " mismatching nodes";
  return r;
}

inline ValidationReport run_validation_suite(const ValidationOptions& opt = {}) {
  ValidationReport rep;
  auto add = [&](std::string name, bool ok, std::string detail) {
    rep.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  // encoder and trellis fixtures
  {
    const auto c = build_example_312();
    const auto info = bits_from_string("11101");
    const auto x = encode_conv(c, info).to_string();
    add("encoder-fixture", x == "111010001110100101011", "(3,1,2) info 11101 -> " + x);
    const auto t = build_trellis(c, 5);
    add("dstar-fixture", t.dstar(3, 3) == 4, "d*_3(3) = " + std::to_string(t.dstar(3, 3)));
  }

  // d* dynamic program against enumeration
  {
    auto t1 = build_trellis(build_example_312(), 6);
    auto t2 = build_trellis(build_conv216(), 8);
    if (opt.corrupt_dstar) t2.set_dstar(5, 3, t2.dstar(5, 3) + 1);
    for (const auto* t : {&t1, &t2}) {
      auto c = check_dstar_oracle(*t);
      rep.checks.push_back(std::move(c));
    }
  }

  // minimum distances
  {
    const int dg = minimum_distance(build_extended_golay());
    add("golay-min-distance", dg == 8, "d_min = " + std::to_string(dg));
    const int dq = minimum_distance(build_extended_qr48());
    add("qr48-min-distance", dq == 12, "d_min = " + std::to_string(dq));
  }

  // bound dominance and variant ordering
  {
    RngStream rng(splitmix64(opt.seed));
    int violations = 0;
    int order_violations = 0;
    double worst = -1e300;
    for (double gamma : {0.25, 0.5, 1.0, 2.0}) {
      const auto tally = tally_mixed_sums(10, 30, gamma, opt.dominance_samples, rng);
      for (int d = 0; d <= 10; ++d) {
        for (int nd = 0; nd <= 30; ++nd) {
          if (d + nd == 0) continue;
          const double be = lemma2_bound(d, nd, gamma, BoundVariant::berry_esseen());
          const double ch = lemma2_bound(d, nd, gamma, BoundVariant::chernoff());
          const double lower = tally.estimate(d, nd) - 4.0 * tally.std_error(d, nd);
          worst = std::max(worst, lower - be);
          if (be < lower || ch < lower) ++violations;
          if (be > ch) ++order_violations;
        }
      }
    }
    std::ostringstream os;
    os << violations << " cells below MC - 4 SE; max(MC - 4 SE - bound) = " << worst;
    add("bound-dominance", violations == 0, os.str());
    add("variant-ordering", order_violations == 0, std::to_string(order_violations) + " cells with BE > Chernoff");
  }

  // monotonicity of Pr{Y <= 0} in d
  {
    RngStream rng(splitmix64(opt.seed + 1));
    const auto tally = tally_mixed_sums(8, 10, 0.5, opt.monotonicity_samples, rng);
    bool ok = true;
    std::ostringstream os;
    for (int d = 1; d <= 8; ++d) {
      os << (d > 1 ? " " : "") << tally.estimate(d, 10);
      if (d > 1) {
        const double hi = tally.estimate(d, 10) + 1.96 * tally.std_error(d, 10);
        const double lo_prev = tally.estimate(d - 1, 10) - 1.96 * tally.std_error(d - 1, 10);
        if (!(hi < lo_prev)) ok = false;
      }
    }
    add("monotone-in-d", ok, os.str());
  }

  // ML equivalence
  {
    const auto golay = build_extended_golay();
    RngStream rng(splitmix64(opt.seed + 2));
    GdaDecoder gda(golay);
    int disagree = 0;
    std::vector<std::uint8_t> info(golay.k());
    for (double snr : {0.0, 2.0, 4.0}) {
      const auto ch = ChannelConfig::block(snr, golay.k(), golay.n());
      for (std::uint64_t i = 0; i < opt.ml_trials; ++i) {
        for (auto& b : info) b = static_cast<std::uint8_t>(rng.bit());
        const auto l = llr(transmit(encode_block(golay, info), ch, rng), ch);
        const auto a = gda.decode(l).decoded;
        const auto b = brute_force_ml_block(golay, l);
        if (std::abs(squared_distance(l, a) - squared_distance(l, b)) > 1e-9 * (1.0 + squared_distance(l, b))) {
          ++disagree;
        }
      }
    }
    add("gda-vs-exhaustive", disagree == 0, std::to_string(disagree) + " metric disagreements");

    int mdisagree = 0;
    for (const auto& t : {build_trellis(build_example_312(), 5), build_trellis(build_conv216(), 20)}) {
      MlsdaDecoder dec(t);
      std::vector<std::uint8_t> cinfo(t.L());
      for (double snr : {0.0, 2.0, 4.0}) {
        const auto ch = ChannelConfig::conv(snr, 1, t.L(), t.code_length());
        for (std::uint64_t i = 0; i < opt.ml_trials; ++i) {
          for (auto& b : cinfo) b = static_cast<std::uint8_t>(rng.bit());
          const auto l = llr(transmit(encode_conv(t.code(), cinfo), ch, rng), ch);
          const double zm = dec.decode(l).metric;
          const double zv = viterbi_ml(t, l).metric;
          if (std::abs(zm - zv) > 1e-9 * (1.0 + zv)) ++mdisagree;
        }
      }
    }
    add("mlsda-vs-viterbi", mdisagree == 0, std::to_string(mdisagree) + " metric disagreements");
  }
  return rep;
}

}  // namespace seqdec
