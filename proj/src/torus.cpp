#include "qtrack/torus.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qtrack {

namespace {
// |u - round(u)| below this counts as an exact integer, so the boundary
// branch is robust to representation error in s + t*v.
constexpr double kIntegerTol = 1e-12;
}  // namespace

TargetState::TargetState(std::vector<double> s_, std::vector<double> v_,
                         double v_max_)
    : s(std::move(s_)), v(std::move(v_)), v_max(v_max_) {
  if (s.empty() || s.size() != v.size()) {
    throw std::invalid_argument("target state needs matching s/v of length d >= 1");
  }
  if (!(v_max >= 0.0)) {
    throw std::invalid_argument("v_max must be >= 0");
  }
  for (double si : s) {
    if (!(si >= 0.0 && si <= 1.0)) {
      throw std::invalid_argument("initial location coordinate " +
                                  std::to_string(si) + " outside [0,1]");
    }
  }
  for (double vi : v) {
    if (!(std::abs(vi) <= v_max + 1e-15)) {
      throw std::invalid_argument("velocity coordinate " + std::to_string(vi) +
                                  " outside [-v_max, v_max]");
    }
  }
}

double locate_scalar(double s_i, double v_i, double t) {
  const double u = s_i + t * v_i;
  const double nearest = std::round(u);
  if (std::abs(u - nearest) <= kIntegerTol) {
    return 1.0;  // integer unwrapped position sits on the boundary
  }
  const double fl = std::floor(u);
  const bool even_floor = std::fmod(fl, 2.0) == 0.0;
  if (even_floor) {
    return u - fl;            // u in [2h, 2h+1): keep the fractional part
  }
  return std::ceil(u) - u;    // u in [2h+1, 2h+2): reflect
}

std::vector<double> locate_vector(const TargetState& state, double t) {
  std::vector<double> out(state.s.size());
  for (std::size_t i = 0; i < state.s.size(); ++i) {
    out[i] = locate_scalar(state.s[i], state.v[i], t);
  }
  return out;
}

double unwrapped_position(double s_i, double v_i, double t) {
  return s_i + t * v_i;
}

}  // namespace qtrack
