#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qtrack/channel.hpp"

namespace qtrack {

/// Bernoulli input probability, open interval (0,1). Doubles as the nominal
/// query measure: the coupled channel state is f(p).
struct InputParam {
  double p;
  explicit InputParam(double p_);
};

/// Information densities iota(x;y) = log(W(y|x) / P_Y(y)) for one (p,q) pair,
/// all logs natural. Entries with W(y|x) = 0 are -inf.
struct InfoDensityTable {
  double p = 0.0;
  double q = 0.0;
  std::array<std::array<double, 2>, 2> iota{};  // [x][y]

  double operator()(int x, int y) const { return iota[x][y]; }
};

/// Output marginal P_Y(y) = (1-p) W(y|0) + p W(y|1) at state q.
std::array<double, 2> output_dist(double p, double q, const ChannelSpec& channel);

/// iota_{p,q}(x;y) in nats. Throws std::domain_error when P_Y(y) = 0.
double info_density(double p, double q, const ChannelSpec& channel, int x, int y);

InfoDensityTable build_info_table(double p, double q, const ChannelSpec& channel);

/// Sum over t of iota_{p,q_t}(x_t; y_t): the empirical mutual information,
/// generalized to per-symbol states (the decoder scores with realized query
/// measures). Throws std::invalid_argument on length mismatch.
double empirical_info(double p, std::span<const double> q_seq,
                      std::span<const std::uint8_t> x,
                      std::span<const std::uint8_t> y,
                      const ChannelSpec& channel);

/// E[iota_{p,f(p)}(X;Y)] with (X,Y) ~ Bern(p) x W_{f(p)}, by exact summation.
double mutual_info(double p, const ChannelSpec& channel);

/// Capacity and the moments of the information density at every
/// capacity-achieving input probability. All values in nats.
struct ChannelStats {
  double C = 0.0;
  std::vector<double> p_ca;      // ascending
  std::vector<double> V_at_pca;  // dispersion at each p_ca entry
  std::vector<double> T_at_pca;  // centered third absolute moment
};

/// Maximizes mutual_info over p in (0,1): dense grid scan at grid_step, then
/// golden-section refinement around every local grid maximizer. p_ca collects
/// all refined maximizers within refine_tol of the best value (deduplicated,
/// ties resolved toward smaller p).
ChannelStats capacity(const ChannelSpec& channel, double grid_step = 1e-4,
                      double refine_tol = 1e-9);

/// Var[iota_{p,f(p)}(X;Y)], exact finite summation.
double dispersion(double p, const ChannelSpec& channel);

/// E|iota - E iota|^3, exact finite summation.
double third_moment(double p, const ChannelSpec& channel);

/// V_eps: max of V over p_ca when eps <= 0.5, min otherwise.
double v_eps(const ChannelStats& stats, double eps);

/// Standard Gaussian CDF via erfc (stable in both tails).
double gaussian_cdf(double x);

/// Inverse standard Gaussian CDF: rational initial guess polished with Newton
/// steps against gaussian_cdf; absolute error well under 1e-9 on
/// (1e-12, 1-1e-12). Throws std::domain_error outside (0,1).
double gaussian_icdf(double eps);

}  // namespace qtrack
