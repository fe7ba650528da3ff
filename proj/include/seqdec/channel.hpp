#pragma once

// Antipodal signalling over AWGN with E = 1, and the matching LLRs.

#include <cmath>
#include <vector>

#include "seqdec/codes.hpp"
#include "seqdec/numerics.hpp"

namespace seqdec {

struct ReceivedVector {
  std::vector<double> r;
};

struct LlrVector {
  std::vector<double> phi;
};

class ChannelConfig {
 public:
  /// Block code: gamma = (k/n) gamma_b.
  static ChannelConfig block(double gamma_b_db, int k, int n) {
    if (k < 1 || n < k) throw DomainError("ChannelConfig: bad block rate");
    return ChannelConfig(gamma_b_db, static_cast<double>(k) / n);
  }

  /// Terminated convolutional code: gamma = k L gamma_b / N.
  static ChannelConfig conv(double gamma_b_db, int k, int L, int N) {
    if (k < 1 || L < 1 || N < k * L) throw DomainError("ChannelConfig: bad convolutional rate");
    return ChannelConfig(gamma_b_db, static_cast<double>(k) * L / N);
  }

  double gamma_b_db() const { return gamma_b_db_; }
  double e_signal() const { return 1.0; }
  /// gamma = E / N0, linear.
  double gamma() const { return gamma_; }
  double n0() const { return e_signal() / gamma_; }
  double noise_stddev() const { return std::sqrt(n0() / 2.0); }

 private:
  ChannelConfig(double gamma_b_db, double effective_rate)
      : gamma_b_db_(gamma_b_db), gamma_(effective_rate * db_to_linear(gamma_b_db)) {
    if (!std::isfinite(gamma_) || !(gamma_ > 0.0)) throw DomainError("ChannelConfig: SNR out of range");
  }

  double gamma_b_db_;
  double gamma_;
};

/// r_j = (-1)^{x_j} sqrt(E) + e_j, e_j ~ N(0, N0/2).
inline ReceivedVector transmit(const Codeword& x, const ChannelConfig& cfg, RngStream& rng) {
  ReceivedVector out;
  out.r.resize(x.size());
  const double amp = std::sqrt(cfg.e_signal());
  const double sd = cfg.noise_stddev();
  for (std::size_t j = 0; j < x.size(); ++j) {
    out.r[j] = (x[j] ? -amp : amp) + sample_gaussian(rng, 0.0, sd);
  }
  return out;
}

/// Noise-free channel output.
inline ReceivedVector transmit_noiseless(const Codeword& x, const ChannelConfig& cfg) {
  ReceivedVector out;
  out.r.resize(x.size());
  const double amp = std::sqrt(cfg.e_signal());
  for (std::size_t j = 0; j < x.size(); ++j) out.r[j] = x[j] ? -amp : amp;
  return out;
}

/// phi_j = 4 sqrt(E) r_j / N0.
inline LlrVector llr(const ReceivedVector& rx, const ChannelConfig& cfg) {
  LlrVector out;
  out.phi.resize(rx.r.size());
  const double scale = 4.0 * std::sqrt(cfg.e_signal()) / cfg.n0();
  for (std::size_t j = 0; j < rx.r.size(); ++j) out.phi[j] = scale * rx.r[j];
  return out;
}

/// y_j = 1 iff phi_j < 0; zero maps to 0.
inline std::vector<std::uint8_t> hard_decision(const LlrVector& l) {
  std::vector<std::uint8_t> y(l.phi.size());
  for (std::size_t j = 0; j < y.size(); ++j) y[j] = l.phi[j] < 0.0 ? 1 : 0;
  return y;
}

}  // namespace seqdec
