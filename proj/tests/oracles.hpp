// Independent reference implementations used only by tests. Each oracle is
// deliberately written against a different formulation than the library code
// it checks.
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace oracles {

// Reflecting-boundary location as a period-2 triangle wave of the unwrapped
// position u = s + t*v: u mod 2 in (0,1) passes through, in (1,2) reflects,
// integers map to 1. Uses the same 1e-12 integer snap as the library.
inline double triangle_wave_locate(double s, double v, double t) {
  const double u = s + t * v;
  if (std::abs(u - std::round(u)) <= 1e-12) return 1.0;
  double m = u - 2.0 * std::floor(u / 2.0);  // u mod 2 in [0,2)
  if (m > 0.0 && m < 1.0) return m;
  return 2.0 - m;
}

inline double binary_entropy(double e) {
  if (e <= 0.0 || e >= 1.0) return 0.0;
  return -e * std::log(e) - (1.0 - e) * std::log(1.0 - e);
}

// Standard BSC with crossover e and input Bern(p), closed forms (nats).
inline double bsc_mutual_info(double p, double e) {
  const double py1 = p * (1.0 - e) + (1.0 - p) * e;
  return binary_entropy(py1) - binary_entropy(e);
}

inline double bsc_capacity(double e) { return std::log(2.0) - binary_entropy(e); }

// Dispersion of the standard BSC at p = 1/2.
inline double bsc_dispersion(double e) {
  if (e <= 0.0 || e >= 1.0) return 0.0;
  const double lr = std::log((1.0 - e) / e);
  return e * (1.0 - e) * lr * lr;
}

// Standard Gaussian CDF by composite Simpson integration of the density from
// 0 to x (|x| <= 8 covers every eps in (1e-12, 1-1e-12)); independent of any
// erf/erfc implementation.
inline double normal_cdf_simpson(double x) {
  const double limit = std::clamp(x, -8.5, 8.5);
  const int panels = 4096;  // even
  const double h = limit / panels;
  auto density = [](double t) {
    return 0.3989422804014327 * std::exp(-0.5 * t * t);
  };
  double sum = density(0.0) + density(limit);
  for (int i = 1; i < panels; ++i) {
    sum += density(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  const double integral = sum * h / 3.0;
  if (x > 8.5) return 1.0;
  if (x < -8.5) return 0.0;
  return 0.5 + integral;
}

// Wilson interval found by solving |p_hat - p| = z sqrt(p(1-p)/n) for p
// directly with the quadratic formula (rather than the centered form).
struct WilsonInterval {
  double lo, hi;
};
inline WilsonInterval wilson_by_quadratic(long long k, long long n, double z) {
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(k) / nn;
  const double a = 1.0 + z * z / nn;
  const double b = -(2.0 * ph + z * z / nn);
  const double c = ph * ph;
  const double disc = std::sqrt(b * b - 4.0 * a * c);
  return {(-b - disc) / (2.0 * a), (-b + disc) / (2.0 * a)};
}

// Exhaustive posterior maximization over hypotheses with a uniform prior:
// argmax_j prod_t W_{q_t}(y_t | x_t(j)), accumulated in log space. Ties go to
// the smaller index. crossovers[t] = zeta * q_t.
inline long long posterior_max_decode(
    const std::vector<std::vector<std::uint8_t>>& codewords,
    std::span<const std::uint8_t> y, std::span<const double> crossovers) {
  long long best = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < codewords.size(); ++j) {
    double ll = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
      const double e = crossovers[t];
      const double w = codewords[j][t] == y[t] ? 1.0 - e : e;
      ll += w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity();
    }
    if (ll > best_ll) {
      best_ll = ll;
      best = static_cast<long long>(j);
    }
  }
  return best;
}

}  // namespace oracles
