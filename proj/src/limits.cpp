#include "qtrack/limits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtrack {

const char* to_string(VelocityRegime r) {
  switch (r) {
    case VelocityRegime::kStrong: return "strong";
    case VelocityRegime::kWeak: return "weak";
    case VelocityRegime::kOutOfScope: return "out-of-scope";
  }
  return "unknown";
}

RegimeReport velocity_regime(int n, double v_max) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(v_max >= 0.0)) throw std::invalid_argument("v_max must be >= 0");
  const double travel = static_cast<double>(n) * v_max;
  RegimeReport r;
  if (travel <= std::sqrt(static_cast<double>(n))) {
    r.regime = VelocityRegime::kStrong;
    r.caveat = "remainder O(max{n*v_max, log n}) dropped";
  } else if (travel < static_cast<double>(n)) {
    r.regime = VelocityRegime::kWeak;
    r.caveat = "remainder O(n*v_max) dropped; no sqrt(n) dispersion term applies";
  } else {
    r.regime = VelocityRegime::kOutOfScope;
    r.caveat = "total travel n*v_max is not sublinear in n; approximation invalid";
  }
  return r;
}

namespace {

void check_nd(int n, int d) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (d < 1) throw std::invalid_argument("d must be >= 1");
}

double variance_for_branch(const ChannelStats& stats, bool below_half) {
  if (stats.V_at_pca.empty()) {
    throw std::logic_error("channel stats carry no dispersion values");
  }
  return below_half
             ? *std::max_element(stats.V_at_pca.begin(), stats.V_at_pca.end())
             : *std::min_element(stats.V_at_pca.begin(), stats.V_at_pca.end());
}

}  // namespace

double resolution_approx(int n, int d, double eps, const ChannelStats& stats) {
  check_nd(n, d);
  const double phi_inv = gaussian_icdf(eps);
  const double v = v_eps(stats, eps);
  const double exponent =
      (static_cast<double>(n) * stats.C + std::sqrt(static_cast<double>(n) * v) * phi_inv) /
      (2.0 * d);
  return std::exp(-exponent);
}

namespace {

double excess_prob_from_log_delta(int n, int d, double log_delta,
                                  const ChannelStats& stats, bool two_d_factor) {
  const double coeff = two_d_factor ? 2.0 * d : static_cast<double>(d);
  const double numerator = -coeff * log_delta - static_cast<double>(n) * stats.C;
  const double v = variance_for_branch(stats, numerator <= 0.0);
  if (v <= 0.0) {
    // Deterministic channel: step function at the critical rate.
    return numerator < 0.0 ? 0.0 : (numerator > 0.0 ? 1.0 : 0.5);
  }
  return gaussian_cdf(numerator / std::sqrt(static_cast<double>(n) * v));
}

}  // namespace

double excess_prob_approx(int n, int d, double delta, const ChannelStats& stats,
                          bool two_d_factor) {
  check_nd(n, d);
  if (!(delta > 0.0)) throw std::domain_error("delta must be positive");
  return excess_prob_from_log_delta(n, d, std::log(delta), stats, two_d_factor);
}

double critical_rate(int d, const ChannelStats& stats) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  return stats.C / (2.0 * d);
}

std::vector<PhasePoint> phase_curve(int n, int d, const ChannelStats& stats,
                                    double rate_min, double rate_max, int points,
                                    bool two_d_factor) {
  check_nd(n, d);
  if (!(rate_min > 0.0 && rate_min < rate_max)) {
    throw std::invalid_argument("need 0 < rate_min < rate_max");
  }
  if (points < 2) throw std::invalid_argument("need at least 2 curve points");

  std::vector<double> rates;
  rates.reserve(points + 1);
  for (int i = 0; i < points; ++i) {
    rates.push_back(rate_min + (rate_max - rate_min) * i / (points - 1));
  }
  const double rc = two_d_factor ? critical_rate(d, stats) : stats.C / d;
  if (rc > rate_min && rc < rate_max) rates.push_back(rc);
  std::sort(rates.begin(), rates.end());
  rates.erase(std::unique(rates.begin(), rates.end()), rates.end());

  std::vector<PhasePoint> curve;
  curve.reserve(rates.size());
  for (double r : rates) {
    PhasePoint pt;
    pt.rate = r;
    pt.critical = r == rc;
    // log(delta) = -r*n by construction; evaluating through it keeps the
    // curve well-defined when exp(-r*n) would underflow.
    pt.eps_hat = excess_prob_from_log_delta(n, d, -r * n, stats, two_d_factor);
    curve.push_back(pt);
  }
  return curve;
}

LimitReport make_limit_report(int n, int d, double eps, double v_max,
                              const ChannelStats& stats) {
  LimitReport rep;
  rep.n = n;
  rep.d = d;
  rep.eps = eps;
  rep.C = stats.C;
  rep.V_eps = v_eps(stats, eps);
  rep.delta_approx = resolution_approx(n, d, eps, stats);
  rep.critical_rate = critical_rate(d, stats);
  rep.regime = velocity_regime(n, v_max);
  return rep;
}

}  // namespace qtrack
