#include "qtrack/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qtrack {

SizeMap::SizeMap(double a, double b) : slope(a), intercept(b) {
  // f >= 0 on [0,1] <=> both endpoint values are nonnegative (affine).
  if (!(b >= 0.0) || !(a + b >= 0.0)) {
    throw std::invalid_argument(
        "size map must be nonnegative on [0,1]: need intercept >= 0 and "
        "slope + intercept >= 0, got slope=" +
        std::to_string(a) + " intercept=" + std::to_string(b));
  }
}

double SizeMap::operator()(double measure) const {
  if (!(measure >= 0.0 && measure <= 1.0)) {
    throw std::domain_error("query measure must lie in [0,1], got " +
                            std::to_string(measure));
  }
  return slope * measure + intercept;
}

double SizeMap::lipschitz() const { return std::abs(slope); }

double SizeMap::max_value() const { return std::max(intercept, slope + intercept); }

double SizeMap::min_value() const { return std::min(intercept, slope + intercept); }

double state_of_measure(const SizeMap& f, double measure) { return f(measure); }

ChannelSpec::ChannelSpec(double zeta_, SizeMap f) : zeta(zeta_), size_map(f) {
  if (!(zeta > 0.0 && zeta <= 1.0)) {
    throw std::invalid_argument("zeta must lie in (0,1], got " +
                                std::to_string(zeta));
  }
  if (zeta * size_map.max_value() > 1.0 + 1e-12) {
    throw std::invalid_argument(
        "invalid channel: zeta * max f = " +
        std::to_string(zeta * size_map.max_value()) +
        " > 1, transition probabilities would leave [0,1]");
  }
  // A crossover of 1/2 carries no information, so the reachable boundary
  // case counts as anti-informative too.
  anti_informative = zeta * size_map.max_value() >= 0.5 - 1e-12;
}

double ChannelSpec::crossover(double q) const {
  const double c = zeta * q;
  if (!(c >= 0.0 && c <= 1.0 + 1e-12)) {
    throw std::invalid_argument("zeta*q = " + std::to_string(c) +
                                " is not a valid crossover probability");
  }
  return std::min(c, 1.0);
}

TransitionMatrix ChannelSpec::transition(double q) const {
  const double c = crossover(q);
  return {{{1.0 - c, c}, {c, 1.0 - c}}};
}

TransitionMatrix transition_matrix(const ChannelSpec& channel, double q) {
  return channel.transition(q);
}

int sample_output(const ChannelSpec& channel, double q, int x, Rng& rng) {
  const double c = channel.crossover(q);
  const bool flip = rng.uniform() < c;
  return flip ? 1 - x : x;
}

namespace {

// || log(a/b) ||_inf over matched entries; entries that are both zero
// describe the same impossible transition and contribute nothing.
double log_ratio_inf_norm(const TransitionMatrix& a, const TransitionMatrix& b) {
  double worst = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const double pa = a[x][y];
      const double pb = b[x][y];
      if (pa == 0.0 && pb == 0.0) continue;
      if (pa == 0.0 || pb == 0.0) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, std::abs(std::log(pa / pb)));
    }
  }
  return worst;
}

}  // namespace

ContinuityCheck verify_continuity(const ChannelSpec& channel, double q, double xi) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::domain_error("continuity check needs q in (0,1), got " +
                            std::to_string(q));
  }
  if (!(xi > 0.0 && xi < std::min(q, 1.0 - q))) {
    throw std::domain_error("continuity check needs xi in (0, min(q,1-q)), got " +
                            std::to_string(xi));
  }

  const double s0 = channel.size_map(q);
  const double sp = channel.size_map(q + xi);
  const double sm = channel.size_map(q - xi);

  const TransitionMatrix w0 = channel.transition(s0);
  const TransitionMatrix wp = channel.transition(sp);
  const TransitionMatrix wm = channel.transition(sm);

  ContinuityCheck out;
  out.lhs = std::max(log_ratio_inf_norm(w0, wp), log_ratio_inf_norm(w0, wm));
  out.c_estimate = out.lhs / xi;

  // Derived bound for the MD-BSC: |log(zf(q)) - log(zf(q'))| <= K*xi / f_min
  // and |log(1-zf(q)) - log(1-zf(q'))| <= K*zeta*xi / (1 - z*f_max), with
  // f_min/f_max over the states spanned by [q-xi, q+xi] (affine => endpoints).
  const double k = channel.size_map.lipschitz();
  if (k == 0.0) {
    out.c_ref = 0.0;  // state-independent channel, lhs is identically 0
    out.ok = out.lhs <= 1e-15;
    return out;
  }
  const double state_min = std::min({s0, sp, sm});
  const double state_max = std::max({s0, sp, sm});
  const double term_flip = state_min > 0.0
                               ? 1.0 / state_min
                               : std::numeric_limits<double>::infinity();
  const double one_minus = 1.0 - channel.zeta * state_max;
  const double term_keep = one_minus > 0.0
                               ? channel.zeta / one_minus
                               : std::numeric_limits<double>::infinity();
  out.c_ref = k * std::max(term_flip, term_keep);
  out.ok = out.lhs <= out.c_ref * xi * (1.0 + 1e-9) + 1e-15;
  return out;
}

}  // namespace qtrack
