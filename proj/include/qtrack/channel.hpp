#pragma once

#include <array>
#include <cstdint>

#include "qtrack/rng.hpp"

namespace qtrack {

/// Affine size map f(q) = slope*q + intercept on the measure domain [0,1].
/// The channel state of a query is f(|A|) where |A| is the query's Lebesgue
/// measure; the affine family makes the Lipschitz constant exact (K = |slope|).
struct SizeMap {
  double slope = 0.0;
  double intercept = 0.0;

  SizeMap() = default;
  SizeMap(double a, double b);

  /// f(measure); throws std::domain_error when measure is outside [0,1].
  double operator()(double measure) const;

  double lipschitz() const;
  double max_value() const;  // max over [0,1], = max(intercept, slope+intercept)
  double min_value() const;
};

/// Channel state for a query of the given measure: q = f(measure).
double state_of_measure(const SizeMap& f, double measure);

using TransitionMatrix = std::array<std::array<double, 2>, 2>;

/// Binary-input channel family indexed by a scalar state q, with transition
/// law depending on the query only through its measure. The only kind in v1
/// is the measurement-dependent BSC: crossover probability zeta * q.
struct ChannelSpec {
  double zeta = 1.0;
  SizeMap size_map;
  static constexpr int kOutputAlphabetSize = 2;

  // true when some reachable state gives crossover > 1/2 (queries of that
  // size are anti-informative; legal but worth flagging)
  bool anti_informative = false;

  ChannelSpec() = default;
  ChannelSpec(double zeta_, SizeMap f);

  /// Crossover probability at state q. Throws std::invalid_argument when
  /// zeta*q is not a probability.
  double crossover(double q) const;

  /// Row-stochastic 2x2 matrix at state q; rows indexed by input bit.
  TransitionMatrix transition(double q) const;

  /// State reached by a query of the given measure.
  double state_for_measure(double measure) const { return size_map(measure); }
};

TransitionMatrix transition_matrix(const ChannelSpec& channel, double q);

/// One channel use: send bit x at state q, return the (possibly flipped)
/// output bit. Deterministic given the rng stream.
int sample_output(const ChannelSpec& channel, double q, int x, Rng& rng);

/// Result of the state-continuity check at (q, xi): lhs is the larger of the
/// two log-ratio infinity norms between the channels at states f(q) and
/// f(q +- xi); c_ref is the derived bound K * max(1/q', zeta/(1-zeta*q'))
/// maximized over the states spanned by the perturbation.
struct ContinuityCheck {
  double lhs = 0.0;
  double c_estimate = 0.0;  // lhs / xi
  double c_ref = 0.0;
  bool ok = false;          // lhs <= c_ref * xi
};

/// Checks channel continuity in the state argument around measure q.
/// Requires q in (0,1) and xi in (0, min(q, 1-q)); throws std::domain_error
/// otherwise.
ContinuityCheck verify_continuity(const ChannelSpec& channel, double q, double xi);

}  // namespace qtrack
