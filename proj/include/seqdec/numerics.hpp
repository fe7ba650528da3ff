#pragma once

// Special functions, log-domain helpers, bracketed root finding and the
// seeded Gaussian source shared by every other module.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "seqdec/errors.hpp"

namespace seqdec {

/// Natural-log-domain real. Holds ln(p) when it represents a probability.
struct LogProb {
  double value = 0.0;

  static LogProb zero() { return {-std::numeric_limits<double>::infinity()}; }
  static LogProb one() { return {0.0}; }
  static LogProb from_prob(double p) { return {std::log(p)}; }

  double prob() const { return std::exp(value); }

  friend LogProb operator*(LogProb a, LogProb b) { return {a.value + b.value}; }
  friend bool operator<(LogProb a, LogProb b) { return a.value < b.value; }
};

/// ln(exp(a) + exp(b)) without overflow or premature underflow.
inline LogProb log_add(LogProb a, LogProb b) {
  if (a.value < b.value) std::swap(a, b);
  if (a.value == -std::numeric_limits<double>::infinity()) return a;
  return {a.value + std::log1p(std::exp(b.value - a.value))};
}

inline double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Phi(x) through erfc; saturates to 0 or 1 in the far tails.
inline double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace detail {

// exp(y^2) erfc(y) for y >= 3.5 by backward evaluation of the Laplace
// continued fraction erfc(y) = exp(-y^2)/sqrt(pi) / (y + (1/2)/(y + 1/(y + ...))).
inline double erfcx_large(double y) {
  double t = y;
  for (int j = 160; j >= 1; --j) t = y + 0.5 * j / t;
  return 1.0 / (std::sqrt(std::numbers::pi) * t);
}

}  // namespace detail

/// exp(y^2) erfc(y), the scaled complementary error function.
inline double erfcx(double y) {
  if (y >= 3.5) return detail::erfcx_large(y);
  return std::exp(y * y) * std::erfc(y);
}

/// ln Phi(x). Finite for any finite x; the lower tail goes through erfcx.
inline LogProb log_std_normal_cdf(double x) {
  if (x < -5.0) {
    const double y = -x / std::numbers::sqrt2;
    return {std::log(0.5 * detail::erfcx_large(y)) - y * y};
  }
  if (x > 0.0) return {std::log1p(-0.5 * std::erfc(x / std::numbers::sqrt2))};
  return {std::log(std_normal_cdf(x))};
}

/// Bisection on [lo, hi]. Stops once the bracket is no wider than `tol`
/// or f hits zero exactly. Throws NoSignChange when f(lo) f(hi) > 0.
template <class F>
double bisect_root(F&& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw DomainError("bisect_root: tol must be positive");
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw NoSignChange("bisect_root: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace detail {

inline const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(4097);
    t[0] = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  return table;
}

inline double log_factorial(std::uint64_t n) {
  const auto& t = log_factorial_table();
  if (n < t.size()) return t[n];
  // lgamma is not reentrant in glibc (signgam); only reached for huge n.
  return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace detail

/// ln C(n, d).
inline double log_binomial(std::uint64_t n, std::uint64_t d) {
  if (d > n) throw DomainError("log_binomial: d > n");
  if (d == 0 || d == n) return 0.0;
  return detail::log_factorial(n) - detail::log_factorial(d) - detail::log_factorial(n - d);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// splitmix64 finalizer, used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seeded, single-owner random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Uniforms take the top 53 bits of one engine word; Gaussians use
/// the Box-Muller transform on a pair of uniforms and hand out both outputs
/// before drawing a new pair. `position()` counts engine words consumed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return position_; }

  std::uint64_t next_u64() {
    ++position_;
    return engine_();
  }

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  int bit() { return static_cast<int>(next_u64() >> 63); }

  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t position_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline double sample_gaussian(RngStream& rng, double mean, double stddev) {
  if (!(stddev > 0.0)) throw DomainError("sample_gaussian: stddev must be positive");
  return mean + stddev * rng.standard_normal();
}

}  // namespace seqdec
