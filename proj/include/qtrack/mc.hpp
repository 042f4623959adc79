#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtrack/channel.hpp"
#include "qtrack/info.hpp"
#include "qtrack/scheme.hpp"
#include "qtrack/torus.hpp"

namespace qtrack {

enum class PriorKind { kUniformProduct, kWorstCaseGrid, kFixedState };

const char* to_string(PriorKind k);

/// How the start state of each trial is produced. The supremum over start
/// distributions is approximated either by uniform sampling or by cycling a
/// deterministic lattice of states that includes the interval endpoints (the
/// adversarial cell-edge positions).
struct Prior {
  PriorKind kind = PriorKind::kUniformProduct;
  int grid_points = 3;  // G, for worst-case-grid: G^(2d) states
  TargetState fixed;    // for fixed-state
};

/// Number of distinct start states the prior cycles through (1 when sampling).
long long prior_state_count(const Prior& prior, int d);

/// Start state for one trial. uniform-product draws s ~ U[0,1)^d and
/// v ~ U[-v_max, v_max]^d from rng; worst-case-grid returns lattice state
/// (trial_index mod G^(2d)), enumerated with the location digits first;
/// fixed-state returns the configured state.
TargetState sample_initial(const Prior& prior, int d, double v_max,
                           long long trial_index, Rng& rng);

struct ExperimentPlan {
  ChannelSpec channel;
  int n = 1;
  int d = 1;
  double v_max = 0.0;
  std::vector<double> deltas;
  long long trials = 2000;
  std::uint64_t master_seed = 0;
  Prior prior;
  std::optional<double> p_design;  // default: smallest capacity-achieving p
  long long hypothesis_budget = kDefaultHypothesisBudget;
  int threads = 1;
  bool fresh_codebook_per_trial = false;
  double ci_level = 0.95;
};

struct SummaryRow {
  double delta = 0.0;
  double rate = 0.0;  // -log(delta)/n
  long long trials = 0;
  long long excess = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double eps_gauss = 0.0;  // Gaussian approximation at (n, d, delta)
  std::string regime;
  std::string caveat;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for k successes in N trials at the given confidence
/// level.
Interval wilson_ci(long long k, long long N, double level);

/// Seeded Monte Carlo estimate of the excess-resolution probability, one row
/// per delta. Per-trial seeds are hash(master, delta index, trial index), so
/// results are bit-identical for any thread count. Under worst-case-grid the
/// reported p_hat is the maximum per-start-state excess frequency and the
/// trials/excess columns refer to that state.
std::vector<SummaryRow> estimate_excess_prob(const ExperimentPlan& plan);
std::vector<SummaryRow> estimate_excess_prob(const ExperimentPlan& plan,
                                             const ChannelStats& stats);

struct TheoryComparison {
  SummaryRow row;
  double eps_theory = 0.0;
  double abs_gap = 0.0;
};

/// Runs the plan and joins each row with the Gaussian approximation.
std::vector<TheoryComparison> compare_with_theory(const ExperimentPlan& plan);
std::vector<TheoryComparison> compare_with_theory(const ExperimentPlan& plan,
                                                  const ChannelStats& stats);

}  // namespace qtrack
