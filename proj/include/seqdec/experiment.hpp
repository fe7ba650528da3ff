#pragma once

// Bound curves, Monte Carlo complexity curves, the A-tilde table and CSV
// output.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "seqdec/bounds.hpp"
#include "seqdec/channel.hpp"
#include "seqdec/codes.hpp"
#include "seqdec/decoders.hpp"
#include "seqdec/numerics.hpp"
#include "seqdec/trellis.hpp"

namespace seqdec {

enum class VariantSelector { BerryEsseen, Chernoff, Both };
enum class Mode { Bound, Simulate, Both };

/// A block code, or a convolutional code already unrolled to its trellis.
using CodeRef = std::variant<BlockCode, Trellis>;

struct ExperimentConfig {
  std::optional<CodeRef> code;
  std::vector<double> snr_grid;  // gamma_b in dB
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  VariantSelector variant = VariantSelector::Both;
  BoundKind be_kind = BoundKind::BerryEsseen;
  Mode mode = Mode::Both;
  unsigned workers = 1;
  bool all_zero = false;
  std::uint64_t max_extensions = 0;  // GDA only; 0 = unlimited

  void validate() const {
    if (!code) throw ConfigError("config: no code given");
    if (snr_grid.empty()) throw ConfigError("config: empty SNR grid");
    for (std::size_t i = 0; i < snr_grid.size(); ++i) {
      if (!std::isfinite(snr_grid[i])) throw ConfigError("config: SNR values must be finite");
      if (i > 0 && !(snr_grid[i] > snr_grid[i - 1])) throw ConfigError("config: SNR grid must be strictly increasing");
    }
    if (trials < 1) throw ConfigError("config: trials must be >= 1");
    if (workers < 1) throw ConfigError("config: workers must be >= 1");
  }
};

struct CurvePoint {
  double gamma_b_db = 0.0;
  std::optional<double> bound_be;
  std::optional<double> bound_chernoff;
  std::optional<double> sim_mean;
  std::optional<double> sim_ci95_half;
  std::optional<std::uint64_t> trials;
  std::uint64_t overflow_trials = 0;  // excluded from the mean; not part of the CSV
};

/// start:stop:step in dB, inclusive of stop up to rounding.
inline std::vector<double> parse_snr_range(const std::string& spec) {
  std::vector<double> parts;
  std::size_t pos = 0;
  while (true) {
    const auto colon = spec.find(':', pos);
    const std::string tok = spec.substr(pos, colon == std::string::npos ? std::string::npos : colon - pos);
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("--snr: cannot parse '" + spec + "'");
    }
    if (colon == std::string::npos) break;
    pos = colon + 1;
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3) throw ConfigError("--snr: expected start:stop:step");
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0) || stop < start) throw ConfigError("--snr: need step > 0 and stop >= start");
  std::vector<double> grid;
  for (std::uint64_t i = 0;; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v > stop + 1e-9 * std::max(1.0, std::abs(step))) break;
    grid.push_back(v);
  }
  return grid;
}

inline double bound_for(const CodeRef& code, double gamma_b_db, const BoundVariant& v) {
  if (const auto* b = std::get_if<BlockCode>(&code)) return theorem1_bound(*b, gamma_b_db, v);
  return theorem2_bound(std::get<Trellis>(code), gamma_b_db, v);
}

inline std::vector<CurvePoint> run_bound_curve(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<CurvePoint> out;
  for (double g : cfg.snr_grid) {
    CurvePoint p;
    p.gamma_b_db = g;
    if (cfg.variant != VariantSelector::Chernoff) p.bound_be = bound_for(*cfg.code, g, {cfg.be_kind, 0.7655});
    if (cfg.variant != VariantSelector::BerryEsseen) p.bound_chernoff = bound_for(*cfg.code, g, BoundVariant::chernoff());
    out.push_back(p);
  }
  return out;
}

/// Seed of the stream owned by `worker` at grid point `point`.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t point, unsigned worker) {
  return splitmix64(seed + point) ^ static_cast<std::uint64_t>(worker);
}

struct TrialResult {
  std::uint64_t count = 0;
  bool overflow = false;
};

namespace detail {

// One trial on a reusable decoder: draw info, encode, send, decode.
struct BlockTrial {
  const BlockCode& code;
  GdaDecoder dec;
  std::vector<std::uint8_t> info;

  BlockTrial(const BlockCode& c, std::uint64_t cap) : code(c), dec(c, cap), info(c.k(), 0) {}

  TrialResult run(const ChannelConfig& ch, RngStream& rng, bool all_zero) {
    for (auto& b : info) b = all_zero ? 0 : static_cast<std::uint8_t>(rng.bit());
    const auto x = encode_block(code, info);
    const auto res = dec.decode(llr(transmit(x, ch, rng), ch));
    return {res.branch_computations, res.overflow};
  }
};

struct ConvTrial {
  const Trellis& trellis;
  MlsdaDecoder dec;
  std::vector<std::uint8_t> info;

  explicit ConvTrial(const Trellis& t) : trellis(t), dec(t), info(t.L(), 0) {}

  TrialResult run(const ChannelConfig& ch, RngStream& rng, bool all_zero) {
    for (auto& b : info) b = all_zero ? 0 : static_cast<std::uint8_t>(rng.bit());
    const auto x = encode_conv(trellis.code(), info);
    const auto res = dec.decode(llr(transmit(x, ch, rng), ch));
    return {res.branch_computations, false};
  }
};

inline ChannelConfig channel_for(const CodeRef& code, double gamma_b_db) {
  if (const auto* b = std::get_if<BlockCode>(&code)) return ChannelConfig::block(gamma_b_db, b->k(), b->n());
  const auto& t = std::get<Trellis>(code);
  return ChannelConfig::conv(gamma_b_db, t.code().k_in(), t.L(), t.code_length());
}

}  // namespace detail

/// Branch-computation counts of every trial at one SNR, in trial order.
/// Worker w runs trials w, w + W, w + 2W, ... on its own stream.
inline std::vector<TrialResult> simulate_point(const CodeRef& code, double gamma_b_db, std::uint64_t trials,
                                               std::uint64_t seed, std::uint64_t point, unsigned workers,
                                               bool all_zero, std::uint64_t max_extensions) {
  const ChannelConfig ch = detail::channel_for(code, gamma_b_db);
  std::vector<TrialResult> results(trials);
  auto work = [&](unsigned w) {
    RngStream rng(stream_seed(seed, point, w));
    auto loop = [&](auto& trial) {
      for (std::uint64_t i = w; i < trials; i += workers) results[i] = trial.run(ch, rng, all_zero);
    };
    if (const auto* b = std::get_if<BlockCode>(&code)) {
      detail::BlockTrial t(*b, max_extensions);
      loop(t);
    } else {
      detail::ConvTrial t(std::get<Trellis>(code));
      loop(t);
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return results;
}

struct SampleSummary {
  double mean = 0.0;
  double ci95_half = 0.0;
  std::uint64_t used = 0;
  std::uint64_t overflow = 0;
};

/// Mean and normal-approximation 95% half-width over non-overflow trials.
inline SampleSummary summarize(const std::vector<TrialResult>& results) {
  SampleSummary s;
  double sum = 0.0;
  for (const auto& r : results) {
    if (r.overflow) {
      ++s.overflow;
      continue;
    }
    sum += static_cast<double>(r.count);
    ++s.used;
  }
  if (s.used == 0) return s;
  s.mean = sum / static_cast<double>(s.used);
  if (s.used > 1) {
    double ss = 0.0;
    for (const auto& r : results) {
      if (r.overflow) continue;
      const double d = static_cast<double>(r.count) - s.mean;
      ss += d * d;
    }
    s.ci95_half = 1.96 * std::sqrt(ss / static_cast<double>(s.used - 1) / static_cast<double>(s.used));
  }
  return s;
}

inline std::vector<CurvePoint> run_simulation_curve(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<CurvePoint> out;
  for (std::size_t p = 0; p < cfg.snr_grid.size(); ++p) {
    const auto results = simulate_point(*cfg.code, cfg.snr_grid[p], cfg.trials, cfg.seed, p, cfg.workers,
                                        cfg.all_zero, cfg.max_extensions);
    const auto s = summarize(results);
    CurvePoint c;
    c.gamma_b_db = cfg.snr_grid[p];
    if (s.used > 0) {
      c.sim_mean = s.mean;
      c.sim_ci95_half = s.ci95_half;
    }
    c.trials = s.used;
    c.overflow_trials = s.overflow;
    out.push_back(c);
  }
  return out;
}

/// Bound and/or simulation columns according to cfg.mode.
inline std::vector<CurvePoint> run_curve(const ExperimentConfig& cfg) {
  std::vector<CurvePoint> out;
  if (cfg.mode != Mode::Simulate) out = run_bound_curve(cfg);
  if (cfg.mode != Mode::Bound) {
    auto sim = run_simulation_curve(cfg);
    if (out.empty()) return sim;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i].sim_mean = sim[i].sim_mean;
      out[i].sim_ci95_half = sim[i].sim_ci95_half;
      out[i].trials = sim[i].trials;
      out[i].overflow_trials = sim[i].overflow_trials;
    }
  }
  return out;
}

struct ATildeRow {
  std::uint64_t n;
  std::uint64_t d;
  double atilde;
  bool degenerate;
};

/// A-tilde over a grid of total sample counts with d = round(ratio n).
/// Outside the tilted case (d = 0, d = n, failed threshold, no root) the
/// factor is reported as 1.
inline std::vector<ATildeRow> run_atilde_table(double d_over_n, double gamma_db, const std::vector<std::uint64_t>& n_grid,
                                               const BoundVariant& variant = BoundVariant::berry_esseen()) {
  if (!(d_over_n > 0.0 && d_over_n < 1.0)) throw DomainError("run_atilde_table: d/n must be in (0, 1)");
  const double gamma = db_to_linear(gamma_db);
  std::vector<ATildeRow> rows;
  for (std::uint64_t n : n_grid) {
    if (n < 1) throw DomainError("run_atilde_table: n must be positive");
    const auto d = static_cast<std::uint64_t>(std::llround(d_over_n * static_cast<double>(n)));
    ATildeRow row{n, d, 1.0, false};
    if (d >= 1 && d < n && static_cast<double>(d) / n >= mean_positivity_threshold(gamma)) {
      try {
        const double lambda = solve_lambda(d, n, gamma);
        const auto at = compute_a_tilde(d, n - d, gamma, lambda, variant);
        row.atilde = at.value;
        row.degenerate = at.degenerate;
      } catch (const NoRoot&) {
      }
    }
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const char* kCurveHeader = "gamma_b_db,bound_be,bound_chernoff,sim_mean,sim_ci95_half,trials";

inline void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& pts) {
  auto opt = [](const std::optional<double>& v) { return v ? format_g17(*v) : std::string(); };
  os << kCurveHeader << '\n';
  for (const auto& p : pts) {
    os << format_g17(p.gamma_b_db) << ',' << opt(p.bound_be) << ',' << opt(p.bound_chernoff) << ','
       << opt(p.sim_mean) << ',' << opt(p.sim_ci95_half) << ',' << (p.trials ? std::to_string(*p.trials) : "")
       << '\n';
  }
}

inline void write_atilde_csv(std::ostream& os, const std::vector<ATildeRow>& rows) {
  os << "n,d,atilde\n";
  for (const auto& r : rows) os << r.n << ',' << r.d << ',' << format_g17(r.atilde) << '\n';
}

inline void write_dstar_csv(std::ostream& os, const Trellis& t) {
  os << "level,state,dstar\n";
  for (int lv = 0; lv < t.num_levels(); ++lv) {
    for (std::uint32_t s = 0; s < t.num_states(); ++s) {
      if (t.reachable(lv, s)) os << lv << ',' << s << ',' << t.dstar(lv, s) << '\n';
    }
  }
}

}  // namespace seqdec
