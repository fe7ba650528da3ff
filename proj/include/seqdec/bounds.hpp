#pragma once

// Tail-probability bounds for sums of i.i.d. variables (a tilted Chernoff
// bound with a Berry-Esseen correction) and the decoding-complexity bounds
// built from them for the GDA and the MLSDA.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "seqdec/codes.hpp"
#include "seqdec/numerics.hpp"
#include "seqdec/trellis.hpp"

namespace seqdec {

/// Moments of the tilted ("twisted") distribution at a fixed theta.
struct TiltedMoments {
  double m;       // M(theta) = E[exp(theta X)]
  double mu;      // mean of the tilted variable
  double sigma2;  // its variance
  double rho;     // its absolute central third moment
};

enum class BoundKind {
  BerryEsseen,          // subexponential factor from the Berry-Esseen term only
  BerryEsseenComplete,  // both terms of the Berry-Esseen factor
  Chernoff,             // factor fixed at 1
};

struct BoundVariant {
  BoundKind kind = BoundKind::BerryEsseen;
  double c = 0.7655;  // Berry-Esseen constant

  static BoundVariant berry_esseen() { return {BoundKind::BerryEsseen, 0.7655}; }
  static BoundVariant berry_esseen_complete() { return {BoundKind::BerryEsseenComplete, 0.7655}; }
  static BoundVariant chernoff() { return {BoundKind::Chernoff, 0.7655}; }

  bool is_chernoff() const { return kind == BoundKind::Chernoff; }
};

inline const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::BerryEsseen: return "be";
    case BoundKind::BerryEsseenComplete: return "be-complete";
    case BoundKind::Chernoff: return "chernoff";
  }
  return "?";
}

/// Pr{Y_n <= -n alpha} <= A_n e^{theta alpha n} M^n with A_n = min(B_n, 1).
/// Both Berry-Esseen kinds use the full two-case B_n here.
inline double lemma1_tail_bound(const TiltedMoments& mom, std::uint64_t n, double alpha, double theta,
                                const BoundVariant& variant) {
  if (!(theta < 0.0)) throw DomainError("lemma1_tail_bound: theta must be negative");
  if (n == 0) throw DomainError("lemma1_tail_bound: n must be positive");
  if (!(mom.m > 0.0)) throw DomainError("lemma1_tail_bound: M(theta) must be positive");
  const double nn = static_cast<double>(n);
  const double log_chernoff = theta * alpha * nn + nn * std::log(mom.m);
  double log_a = 0.0;
  if (!variant.is_chernoff()) {
    if (!(mom.sigma2 > 0.0)) throw DomainError("lemma1_tail_bound: sigma2 must be positive");
    const double sigma = std::sqrt(mom.sigma2);
    const double be = 2.0 * variant.c * mom.rho / (mom.sigma2 * sigma * std::sqrt(nn));
    const double shift = mom.mu + alpha;
    double b;
    if (alpha > theta * mom.sigma2 - mom.mu) {
      b = sigma / (std::sqrt(2.0 * std::numbers::pi * nn) * (shift - theta * mom.sigma2)) *
              std::exp(-shift * shift * nn / (2.0 * mom.sigma2)) +
          be;
    } else {
      b = std::exp(theta * (theta * mom.sigma2 - 2.0 * shift) * nn / 2.0) + be;
    }
    log_a = std::log(std::min(b, 1.0));
  }
  return std::clamp(std::exp(std::min(log_a + log_chernoff, 0.0)), 0.0, 1.0);
}

/// E[min(N(sqrt(2 gamma), 1), 0)].
inline double mu_hat(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("mu_hat: gamma must be positive");
  const double s = std::sqrt(2.0 * gamma);
  return -std::exp(-gamma) / std::sqrt(2.0 * std::numbers::pi) + s * std_normal_cdf(-s);
}

/// Smallest d/n for which the mixed sum has positive mean.
inline double mean_positivity_threshold(double gamma) {
  const double s = std::sqrt(2.0 * gamma);
  const double q = std::sqrt(4.0 * std::numbers::pi * gamma) * std::exp(gamma);
  return 1.0 - q / (1.0 + q * std_normal_cdf(s));
}

/// Residual of the stationarity equation for lambda.
inline double lambda_residual(double lambda, double ratio, double gamma) {
  const double s = std::sqrt(2.0 * gamma);
  return lambda * std::exp(0.5 * lambda * lambda) * std_normal_cdf(-lambda) -
         (1.0 - ratio) / std::sqrt(2.0 * std::numbers::pi) +
         ratio * std::exp(gamma) * std_normal_cdf(s) * lambda;
}

/// Root of the lambda equation on [0, sqrt(2 gamma) - 1e-9].
inline double solve_lambda(std::uint64_t d, std::uint64_t n, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("solve_lambda: gamma must be positive");
  if (d < 1 || d >= n) throw DomainError("solve_lambda: need 1 <= d < n");
  const double ratio = static_cast<double>(d) / static_cast<double>(n);
  const double hi = std::sqrt(2.0 * gamma) - 1e-9;
  try {
    return bisect_root([&](double l) { return lambda_residual(l, ratio, gamma); }, 0.0, hi, 1e-12);
  } catch (const NoSignChange&) {
    throw NoRoot("solve_lambda: no root in [0, sqrt(2 gamma))");
  }
}

/// Closed-form mean, variance and third absolute moment of the tilted
/// per-sample variable, normalized by nd.
struct ClippedTilt {
  double mu;
  double sigma2;
  double rho;
};

inline ClippedTilt clipped_tilted_moments(std::uint64_t d, std::uint64_t nd, double gamma, double lambda) {
  const double dd = static_cast<double>(d);
  const double m = static_cast<double>(nd);
  const double n = dd + m;
  const double s = std::sqrt(2.0 * gamma);
  const double l2 = lambda * lambda;
  const double k = std::exp(gamma) * std_normal_cdf(s);
  const double root2pi = std::sqrt(2.0 * std::numbers::pi);
  const double den = 1.0 + root2pi * lambda * k;

  ClippedTilt t{};
  t.mu = -dd * lambda / m;
  t.sigma2 = -dd / m - n * dd * l2 / (m * m) + (n / m) / den;
  const double inner = 1.0 - dd * (n + dd) / (m * m) * l2 +
                       2.0 * (n * n / (m * m) * l2 + 2.0) * std::exp(-dd * (2.0 * n - dd) * l2 / (2.0 * m * m)) -
                       (dd / m) * ((n + dd) / m * l2 + 3.0) * root2pi * lambda * k -
                       (2.0 * n / m) * (n * n / (m * m) * l2 + 3.0) * root2pi * lambda * std::exp(0.5 * l2) *
                           std_normal_cdf(-n * lambda / m);
  t.rho = (n / m) * (lambda / den) * inner;
  return t;
}

struct ATilde {
  double value = 1.0;
  bool degenerate = false;  // tilted variance or third moment not positive; value forced to 1
  double a = 0.0;
};

/// Subexponential factor of the mixed-sum bound.
inline ATilde compute_a_tilde(std::uint64_t d, std::uint64_t nd, double gamma, double lambda,
                              const BoundVariant& variant) {
  if (nd < 1) throw DomainError("compute_a_tilde: nd must be positive");
  ATilde out;
  if (variant.is_chernoff()) return out;
  const auto t = clipped_tilted_moments(d, nd, gamma, lambda);
  const double s = std::sqrt(2.0 * gamma);
  out.a = -mu_hat(gamma) + (s - lambda) * t.sigma2 + t.mu;
  if (!(t.sigma2 > 0.0) || t.rho < 0.0) {
    out.degenerate = true;
    return out;
  }
  if (!(out.a > 0.0)) return out;
  const double m = static_cast<double>(nd);
  const double sigma = std::sqrt(t.sigma2);
  const double be_term = 2.0 * variant.c * t.rho / (t.sigma2 * sigma * std::sqrt(m));
  double v = be_term;
  if (variant.kind == BoundKind::BerryEsseenComplete) {
    v += sigma / (out.a * std::sqrt(2.0 * std::numbers::pi * m));
  }
  out.value = std::min(v, 1.0);
  return out;
}

enum class Lemma2Case { AllGaussian, NoGaussian, Tilted, Trivial };

struct Lemma2Result {
  LogProb log_value = LogProb::one();
  Lemma2Case which = Lemma2Case::Trivial;
  double lambda = 0.0;
  ATilde atilde{};

  double prob() const { return std::clamp(log_value.prob(), 0.0, 1.0); }
};

/// Bound on Pr{sum of d N(s,1) and nd min(N(s,1),0) <= 0}, s = sqrt(2 gamma).
inline Lemma2Result lemma2_evaluate(std::uint64_t d, std::uint64_t nd, double gamma, const BoundVariant& variant) {
  if (!(gamma > 0.0)) throw DomainError("lemma2_bound: gamma must be positive");
  if (d + nd == 0) throw DomainError("lemma2_bound: d + nd must be positive");
  Lemma2Result r;
  const double s = std::sqrt(2.0 * gamma);
  if (nd == 0) {
    r.which = Lemma2Case::AllGaussian;
    r.log_value = log_std_normal_cdf(-std::sqrt(2.0 * gamma * static_cast<double>(d)));
    return r;
  }
  if (d == 0) {
    r.which = Lemma2Case::NoGaussian;
    return r;
  }
  const std::uint64_t n = d + nd;
  const double ratio = static_cast<double>(d) / static_cast<double>(n);
  if (!(ratio >= mean_positivity_threshold(gamma))) return r;

  double lambda;
  try {
    lambda = solve_lambda(d, n, gamma);
  } catch (const NoRoot&) {
    return r;
  }
  const double dd = static_cast<double>(d);
  const double m = static_cast<double>(nd);
  const double muh = mu_hat(gamma);
  const ATilde at = compute_a_tilde(d, nd, gamma, lambda, variant);

  const double log_mgf = std::log(std_normal_cdf(-lambda) * std::exp(-gamma + 0.5 * lambda * lambda) +
                                  std_normal_cdf(s));
  const LogProb first = log_std_normal_cdf(-(m * muh + dd * s) / std::sqrt(dd));
  const LogProb second{std::log(at.value) + m * log_mgf + dd * (-gamma + 0.5 * lambda * lambda) +
                       log_std_normal_cdf((m * muh + lambda * dd) / std::sqrt(dd)).value};
  r.which = Lemma2Case::Tilted;
  r.lambda = lambda;
  r.atilde = at;
  r.log_value = LogProb{std::min(log_add(first, second).value, 0.0)};
  return r;
}

inline LogProb lemma2_log_bound(std::uint64_t d, std::uint64_t nd, double gamma, const BoundVariant& variant) {
  return lemma2_evaluate(d, nd, gamma, variant).log_value;
}

inline double lemma2_bound(std::uint64_t d, std::uint64_t nd, double gamma, const BoundVariant& variant) {
  return lemma2_evaluate(d, nd, gamma, variant).prob();
}

namespace detail {

constexpr double kNegligibleLog = -700.0;

inline double add_term(double acc, double log_term) {
  return log_term < kNegligibleLog ? acc : acc + std::exp(log_term);
}

}  // namespace detail

/// Bound on the mean number of branch metric computations of the GDA.
inline double theorem1_bound(const BlockCode& code, double gamma_b_db, const BoundVariant& variant) {
  const double gamma = code.rate() * db_to_linear(gamma_b_db);
  const auto n = static_cast<std::uint64_t>(code.n());
  double sum = 0.0;
  for (std::uint64_t l = 0; l < static_cast<std::uint64_t>(code.k()); ++l) {
    for (std::uint64_t d = 0; d <= l; ++d) {
      sum = detail::add_term(sum, log_binomial(l, d) + lemma2_log_bound(d, n - l, gamma, variant).value);
    }
  }
  return 2.0 * sum;
}

/// Bound on the mean number of branch metric computations of the MLSDA.
inline double theorem2_bound(const Trellis& trellis, double gamma_b_db, const BoundVariant& variant) {
  const int k = trellis.code().k_in();
  const auto N = static_cast<std::uint64_t>(trellis.code_length());
  const double gamma = static_cast<double>(k) * trellis.L() * db_to_linear(gamma_b_db) / static_cast<double>(N);
  std::unordered_map<std::uint64_t, double> cache;
  double sum = 0.0;
  for (int l = 0; l < trellis.L(); ++l) {
    const std::uint64_t nd = N - static_cast<std::uint64_t>(l) * trellis.n_out();
    for (std::uint32_t j = 0; j < trellis.num_states(); ++j) {
      const int ds = trellis.dstar(l, j);
      if (ds == Trellis::kAbsent) continue;
      const std::uint64_t key = (nd << 32) | static_cast<std::uint64_t>(ds);
      auto it = cache.find(key);
      if (it == cache.end()) {
        it = cache.emplace(key, lemma2_log_bound(static_cast<std::uint64_t>(ds), nd, gamma, variant).value).first;
      }
      sum = detail::add_term(sum, it->second);
    }
  }
  return std::ldexp(sum, k);
}

}  // namespace seqdec
