#include "qtrack/mc.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "qtrack/limits.hpp"

namespace qtrack {

const char* to_string(PriorKind k) {
  switch (k) {
    case PriorKind::kUniformProduct: return "uniform-product";
    case PriorKind::kWorstCaseGrid: return "worst-case-grid";
    case PriorKind::kFixedState: return "fixed-state";
  }
  return "unknown";
}

long long prior_state_count(const Prior& prior, int d) {
  if (prior.kind != PriorKind::kWorstCaseGrid) return 1;
  if (prior.grid_points < 1) {
    throw std::invalid_argument("worst-case-grid needs G >= 1");
  }
  long long count = 1;
  for (int i = 0; i < 2 * d; ++i) {
    count *= prior.grid_points;
    if (count > 1'000'000) {
      throw std::invalid_argument(
          "worst-case-grid lattice G^(2d) exceeds 1e6 states");
    }
  }
  return count;
}

namespace {

// g-th of G lattice points on [lo, hi], endpoints included (G = 1 -> midpoint).
double lattice_point(double lo, double hi, int g, int G) {
  if (G == 1) return 0.5 * (lo + hi);
  return lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(G - 1);
}

}  // namespace

TargetState sample_initial(const Prior& prior, int d, double v_max,
                           long long trial_index, Rng& rng) {
  switch (prior.kind) {
    case PriorKind::kFixedState: {
      if (prior.fixed.dim() != d) {
        throw std::invalid_argument("fixed-state prior has wrong dimension");
      }
      return prior.fixed;
    }
    case PriorKind::kUniformProduct: {
      std::vector<double> s(d), v(d);
      for (int i = 0; i < d; ++i) s[i] = rng.uniform();
      for (int i = 0; i < d; ++i) v[i] = rng.uniform_in(-v_max, v_max);
      return TargetState(std::move(s), std::move(v), v_max);
    }
    case PriorKind::kWorstCaseGrid: {
      const int G = prior.grid_points;
      long long code = trial_index % prior_state_count(prior, d);
      std::vector<double> s(d), v(d);
      for (int i = 0; i < d; ++i) {
        s[i] = lattice_point(0.0, 1.0, static_cast<int>(code % G), G);
        code /= G;
      }
      for (int i = 0; i < d; ++i) {
        v[i] = v_max == 0.0
                   ? 0.0
                   : lattice_point(-v_max, v_max, static_cast<int>(code % G), G);
        code /= G;
      }
      return TargetState(std::move(s), std::move(v), v_max);
    }
  }
  throw std::logic_error("unreachable prior kind");
}

Interval wilson_ci(long long k, long long N, double level) {
  if (N < 1 || k < 0 || k > N) {
    throw std::invalid_argument("wilson_ci needs 0 <= k <= N, N >= 1");
  }
  const double z = gaussian_icdf(1.0 - (1.0 - level) / 2.0);
  const double n = static_cast<double>(N);
  const double ph = static_cast<double>(k) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (ph + z2 / (2.0 * n)) / denom;
  const double half =
      z / denom * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n));
  Interval ci;
  ci.lo = std::max(0.0, center - half);
  ci.hi = std::min(1.0, center + half);
  return ci;
}

namespace {

// Trial seeds derive from (master, delta index, trial index) only, never from
// a shared sequential stream, so any partition of trials over threads counts
// the same excess events.
constexpr std::uint64_t kCodebookStream = 0xC0DEB00Cu;

struct DeltaOutcome {
  std::vector<long long> excess_by_state;
  std::vector<long long> trials_by_state;
};

DeltaOutcome run_trials(const ExperimentPlan& plan, const ChannelSpec& channel,
                        const HypothesisGrid& grid, double delta,
                        std::size_t delta_idx, double p_design) {
  const long long states = prior_state_count(plan.prior, plan.d);
  const std::uint64_t book_seed =
      derive_seed(plan.master_seed, kCodebookStream, delta_idx);

  std::optional<PreparedScheme> shared;
  if (!plan.fresh_codebook_per_trial) {
    shared.emplace(channel, grid, draw_codebook(grid, p_design, book_seed));
  }

  const int workers = std::max(1, plan.threads);
  std::vector<DeltaOutcome> partial(workers);
  std::vector<std::exception_ptr> errors(workers);

  auto work = [&](int w) {
    try {
      DeltaOutcome local;
      local.excess_by_state.assign(states, 0);
      local.trials_by_state.assign(states, 0);
      for (long long k = w; k < plan.trials; k += workers) {
        Rng rng(derive_seed(plan.master_seed, delta_idx, static_cast<std::uint64_t>(k)));
        const TargetState state =
            sample_initial(plan.prior, plan.d, plan.v_max, k, rng);
        TrialResult res;
        if (plan.fresh_codebook_per_trial) {
          const std::uint64_t trial_book_seed =
              derive_seed(book_seed, 1, static_cast<std::uint64_t>(k));
          const Codebook book = draw_codebook(grid, p_design, trial_book_seed);
          res = run_episode(channel, grid, book, state, delta, rng);
        } else {
          res = run_episode(channel, *shared, state, delta, rng);
        }
        const long long slot = states == 1 ? 0 : k % states;
        local.trials_by_state[slot] += 1;
        if (res.excess) local.excess_by_state[slot] += 1;
      }
      partial[w] = std::move(local);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  DeltaOutcome total;
  total.excess_by_state.assign(states, 0);
  total.trials_by_state.assign(states, 0);
  for (const auto& part : partial) {
    if (part.excess_by_state.empty()) continue;
    for (long long s = 0; s < states; ++s) {
      total.excess_by_state[s] += part.excess_by_state[s];
      total.trials_by_state[s] += part.trials_by_state[s];
    }
  }
  return total;
}

}  // namespace

std::vector<SummaryRow> estimate_excess_prob(const ExperimentPlan& plan,
                                             const ChannelStats& stats) {
  if (plan.trials < 1) throw std::invalid_argument("need trials >= 1");
  for (double delta : plan.deltas) {
    if (!(delta > 0.0 && delta < 1.0)) {
      throw std::invalid_argument("every delta must lie in (0,1)");
    }
  }
  if (stats.p_ca.empty()) throw std::logic_error("channel stats are empty");
  const double p_design = plan.p_design.value_or(stats.p_ca.front());

  const RegimeReport regime = velocity_regime(plan.n, plan.v_max);

  std::vector<SummaryRow> rows;
  rows.reserve(plan.deltas.size());
  for (std::size_t di = 0; di < plan.deltas.size(); ++di) {
    const double delta = plan.deltas[di];
    HypothesisGrid grid;
    try {
      grid = plan_grid(delta, plan.n, plan.d, plan.v_max, plan.hypothesis_budget);
    } catch (const BudgetError& e) {
      char ctx[80];
      std::snprintf(ctx, sizeof(ctx), "delta %.6g (sweep index %zu)", delta, di);
      throw BudgetError(e.hypotheses, plan.hypothesis_budget, ctx);
    }

    const DeltaOutcome outcome =
        run_trials(plan, plan.channel, grid, delta, di, p_design);

    // Under worst-case-grid report the worst start state (sup surrogate),
    // ties toward the smaller state index.
    std::size_t worst = 0;
    double worst_freq = -1.0;
    for (std::size_t s = 0; s < outcome.excess_by_state.size(); ++s) {
      if (outcome.trials_by_state[s] == 0) continue;
      const double freq = static_cast<double>(outcome.excess_by_state[s]) /
                          static_cast<double>(outcome.trials_by_state[s]);
      if (freq > worst_freq) {
        worst_freq = freq;
        worst = s;
      }
    }

    SummaryRow row;
    row.delta = delta;
    row.rate = -std::log(delta) / plan.n;
    row.trials = outcome.trials_by_state[worst];
    row.excess = outcome.excess_by_state[worst];
    row.p_hat = worst_freq;
    const Interval ci = wilson_ci(row.excess, row.trials, plan.ci_level);
    row.ci_lo = ci.lo;
    row.ci_hi = ci.hi;
    row.eps_gauss = excess_prob_approx(plan.n, plan.d, delta, stats);
    row.regime = to_string(regime.regime);
    row.caveat = regime.caveat;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SummaryRow> estimate_excess_prob(const ExperimentPlan& plan) {
  return estimate_excess_prob(plan, capacity(plan.channel));
}

std::vector<TheoryComparison> compare_with_theory(const ExperimentPlan& plan,
                                                  const ChannelStats& stats) {
  std::vector<SummaryRow> rows = estimate_excess_prob(plan, stats);
  std::vector<TheoryComparison> out;
  out.reserve(rows.size());
  for (auto& row : rows) {
    TheoryComparison cmp;
    cmp.eps_theory = row.eps_gauss;
    cmp.abs_gap = std::abs(row.p_hat - row.eps_gauss);
    cmp.row = std::move(row);
    out.push_back(std::move(cmp));
  }
  return out;
}

std::vector<TheoryComparison> compare_with_theory(const ExperimentPlan& plan) {
  return compare_with_theory(plan, capacity(plan.channel));
}

}  // namespace qtrack
