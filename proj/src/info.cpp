#include "qtrack/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qtrack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_open_unit(double p, const char* name) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in (0,1), got " +
                            std::to_string(p));
  }
}

}  // namespace

InputParam::InputParam(double p_) : p(p_) { require_open_unit(p, "p"); }

std::array<double, 2> output_dist(double p, double q, const ChannelSpec& channel) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("input probability must lie in [0,1], got " +
                            std::to_string(p));
  }
  const TransitionMatrix w = channel.transition(q);
  return {(1.0 - p) * w[0][0] + p * w[1][0], (1.0 - p) * w[0][1] + p * w[1][1]};
}

double info_density(double p, double q, const ChannelSpec& channel, int x, int y) {
  const std::array<double, 2> py = output_dist(p, q, channel);
  if (py[y] <= 0.0) {
    throw std::domain_error("information density undefined: P_Y(" +
                            std::to_string(y) + ") = 0 at p=" + std::to_string(p) +
                            ", q=" + std::to_string(q));
  }
  const TransitionMatrix w = channel.transition(q);
  if (w[x][y] == 0.0) return -kInf;
  return std::log(w[x][y] / py[y]);
}

InfoDensityTable build_info_table(double p, double q, const ChannelSpec& channel) {
  InfoDensityTable t;
  t.p = p;
  t.q = q;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      t.iota[x][y] = info_density(p, q, channel, x, y);
    }
  }
  return t;
}

double empirical_info(double p, std::span<const double> q_seq,
                      std::span<const std::uint8_t> x,
                      std::span<const std::uint8_t> y,
                      const ChannelSpec& channel) {
  if (q_seq.size() != x.size() || x.size() != y.size()) {
    throw std::invalid_argument("empirical_info: q_seq, x, y lengths differ");
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    sum += info_density(p, q_seq[t], channel, x[t], y[t]);
  }
  return sum;
}

namespace {

// Joint p(x,y) and iota over the support; zero-probability pairs are skipped
// (0 * log 0 = 0 convention), so moments stay finite for noiseless channels.
template <typename F>
double expect_over_joint(double p, const ChannelSpec& channel, F&& term) {
  const double q = channel.size_map(p);
  const TransitionMatrix w = channel.transition(q);
  const std::array<double, 2> px = {1.0 - p, p};
  const std::array<double, 2> py = {(1.0 - p) * w[0][0] + p * w[1][0],
                                    (1.0 - p) * w[0][1] + p * w[1][1]};
  double sum = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const double joint = px[x] * w[x][y];
      if (joint <= 0.0) continue;
      sum += joint * term(std::log(w[x][y] / py[y]));
    }
  }
  return sum;
}

}  // namespace

double mutual_info(double p, const ChannelSpec& channel) {
  const InputParam checked(p);
  return expect_over_joint(checked.p, channel, [](double i) { return i; });
}

double dispersion(double p, const ChannelSpec& channel) {
  const InputParam checked(p);
  const double mean = mutual_info(checked.p, channel);
  return expect_over_joint(checked.p, channel,
                           [mean](double i) { return (i - mean) * (i - mean); });
}

double third_moment(double p, const ChannelSpec& channel) {
  const InputParam checked(p);
  const double mean = mutual_info(checked.p, channel);
  return expect_over_joint(checked.p, channel, [mean](double i) {
    const double c = std::abs(i - mean);
    return c * c * c;
  });
}

namespace {

// Golden-section maximization of mutual_info on [lo, hi].
double golden_refine(const ChannelSpec& channel, double lo, double hi,
                     double x_tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = mutual_info(c, channel);
  double fd = mutual_info(d, channel);
  while (b - a > x_tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = mutual_info(c, channel);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = mutual_info(d, channel);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ChannelStats capacity(const ChannelSpec& channel, double grid_step,
                      double refine_tol) {
  if (!(grid_step > 0.0 && grid_step <= 1e-3)) {
    throw std::invalid_argument("capacity grid_step must lie in (0, 1e-3]");
  }
  if (!(refine_tol > 0.0)) {
    throw std::invalid_argument("capacity refine_tol must be positive");
  }

  // Dense scan: mutual_info is not guaranteed unimodal (the state moves with
  // p), so every grid-local maximizer is refined.
  const int m = static_cast<int>(std::floor(1.0 / grid_step)) - 1;
  std::vector<double> grid_p(m), grid_i(m);
  for (int i = 0; i < m; ++i) {
    grid_p[i] = (i + 1) * grid_step;
    grid_i[i] = mutual_info(grid_p[i], channel);
  }

  std::vector<double> candidates;
  for (int i = 0; i < m; ++i) {
    const double left = i > 0 ? grid_i[i - 1] : -kInf;
    const double right = i + 1 < m ? grid_i[i + 1] : -kInf;
    if (grid_i[i] >= left && grid_i[i] >= right) {
      const double lo = i > 0 ? grid_p[i - 1] : grid_step * 0.5;
      const double hi = i + 1 < m ? grid_p[i + 1] : 1.0 - grid_step * 0.5;
      candidates.push_back(golden_refine(channel, lo, hi, 1e-12));
    }
  }

  ChannelStats stats;
  std::vector<std::pair<double, double>> refined;  // (p, I(p))
  for (double p : candidates) {
    refined.emplace_back(p, mutual_info(p, channel));
  }
  std::sort(refined.begin(), refined.end());
  for (const auto& entry : refined) {
    stats.C = std::max(stats.C, entry.second);
  }
  for (const auto& [p, value] : refined) {
    if (value < stats.C - refine_tol) continue;
    // Deduplicate maximizers that converged to the same point; the first
    // (smallest p) representative wins.
    if (!stats.p_ca.empty() && std::abs(p - stats.p_ca.back()) < 1e-7) continue;
    stats.p_ca.push_back(p);
  }
  for (double p : stats.p_ca) {
    stats.V_at_pca.push_back(dispersion(p, channel));
    stats.T_at_pca.push_back(third_moment(p, channel));
  }
  return stats;
}

double v_eps(const ChannelStats& stats, double eps) {
  require_open_unit(eps, "eps");
  if (stats.p_ca.empty() || stats.V_at_pca.empty()) {
    throw std::logic_error("v_eps called before capacity was computed");
  }
  if (eps <= 0.5) {
    return *std::max_element(stats.V_at_pca.begin(), stats.V_at_pca.end());
  }
  return *std::min_element(stats.V_at_pca.begin(), stats.V_at_pca.end());
}

double gaussian_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

namespace {

// Acklam's rational approximation to the probit function (relative error
// ~1e-9 before polishing).
double icdf_initial(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double gaussian_icdf(double eps) {
  require_open_unit(eps, "eps");
  if (eps == 0.5) return 0.0;
  double x = icdf_initial(eps);
  // Newton polish against the erfc-based CDF; two steps push the absolute
  // error to machine level everywhere the density is representable.
  constexpr double kInvSqrt2Pi = 0.3989422804014327;
  for (int iter = 0; iter < 3; ++iter) {
    const double err = gaussian_cdf(x) - eps;
    const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
    if (pdf <= 0.0) break;
    const double step = err / pdf;
    x -= step;
    if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

}  // namespace qtrack
