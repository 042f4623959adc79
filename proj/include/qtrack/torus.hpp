#pragma once

#include <vector>

namespace qtrack {

/// Initial location s in [0,1]^d and velocity v in [-v_max, v_max]^d.
struct TargetState {
  std::vector<double> s;
  std::vector<double> v;
  double v_max = 0.0;

  TargetState() = default;
  TargetState(std::vector<double> s_, std::vector<double> v_, double v_max_);

  int dim() const { return static_cast<int>(s.size()); }
};

/// Location of a target started at s_i with velocity v_i after time t, on the
/// unit interval with reflecting boundaries. The unwrapped position u = s+t*v
/// folds back into (0,1]: integer u maps to 1, u with even integer part maps
/// to its fractional part, odd integer part reflects (ceil(u) - u). Negative
/// u reflects at 0 the same way.
double locate_scalar(double s_i, double v_i, double t);

/// Componentwise locate_scalar.
std::vector<double> locate_vector(const TargetState& state, double t);

/// The unwrapped affine position s_i + t*v_i (may leave [0,1]); this is the
/// quantity the resolution criterion is scored on.
double unwrapped_position(double s_i, double v_i, double t);

}  // namespace qtrack
