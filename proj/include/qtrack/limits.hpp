#pragma once

#include <string>
#include <vector>

#include "qtrack/info.hpp"

namespace qtrack {

enum class VelocityRegime { kStrong, kWeak, kOutOfScope };

struct RegimeReport {
  VelocityRegime regime = VelocityRegime::kStrong;
  std::string caveat;  // names the applicable remainder term
};

const char* to_string(VelocityRegime r);

/// Classifies (n, v_max) against the asymptotic velocity conditions:
/// strong when n*v_max <= sqrt(n), weak when sqrt(n) < n*v_max < n,
/// out-of-scope otherwise.
RegimeReport velocity_regime(int n, double v_max);

/// Second-order approximation to the minimal achievable resolution:
/// exp(-(n C + sqrt(n V_eps) * Phi^-1(eps)) / (2d)), remainder dropped.
/// Not clamped to (0,1); tiny n with small eps can push it past 1, which the
/// caller reports instead of hiding.
double resolution_approx(int n, int d, double eps, const ChannelStats& stats);

/// Gaussian approximation to the minimal excess-resolution probability at
/// resolution delta: Phi((-2d log delta - n C)/sqrt(n V)). The variance is
/// the max over p_ca below the 0.5 crossing and the min above (unambiguous
/// for singleton p_ca). two_d_factor=false evaluates the -d log delta variant
/// instead of -2d log delta.
double excess_prob_approx(int n, int d, double delta, const ChannelStats& stats,
                          bool two_d_factor = true);

/// The phase-transition threshold C/(2d) in nats per query.
double critical_rate(int d, const ChannelStats& stats);

struct PhasePoint {
  double rate = 0.0;
  double eps_hat = 0.0;
  bool critical = false;
};

/// Samples excess_prob_approx at `points` rates linearly spaced over
/// [rate_min, rate_max] (delta = exp(-rate*n)), with the critical rate
/// inserted and marked when it falls inside the range.
std::vector<PhasePoint> phase_curve(int n, int d, const ChannelStats& stats,
                                    double rate_min, double rate_max, int points,
                                    bool two_d_factor = true);

/// Everything the `limits` front end reports for one (channel, n, d, eps).
struct LimitReport {
  int n = 0;
  int d = 1;
  double eps = 0.0;
  double C = 0.0;
  double V_eps = 0.0;
  double delta_approx = 0.0;
  double critical_rate = 0.0;
  RegimeReport regime;
};

LimitReport make_limit_report(int n, int d, double eps, double v_max,
                              const ChannelStats& stats);

}  // namespace qtrack
