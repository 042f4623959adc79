#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtrack/channel.hpp"
#include "qtrack/info.hpp"
#include "qtrack/rng.hpp"
#include "qtrack/torus.hpp"

namespace qtrack {

inline constexpr long long kDefaultHypothesisBudget = 10'000'000;

/// Thrown when a planned grid would enumerate more hypotheses than the
/// configured budget allows. Carries the offending count.
struct BudgetError : std::runtime_error {
  double hypotheses;
  BudgetError(double j, long long budget, const std::string& context = "");
};

/// Quantization of (location, velocity) space: M_s location cells per
/// dimension of width delta_s = 1/M_s, M_v velocity cells of width
/// delta_v = 2 v_max / M_v (M_v = 1, delta_v = 0 for a stationary target).
/// Cell representatives satisfy delta_s/2 + n*delta_v/2 <= delta_target.
struct HypothesisGrid {
  int d = 1;
  int n = 1;
  long long M_s = 2;
  long long M_v = 1;
  double v_max = 0.0;
  double delta_s = 0.5;
  double delta_v = 0.0;

  long long cells() const;           // M_s^d
  long long num_hypotheses() const;  // (M_s * M_v)^d
};

/// Sizes the grid for a target resolution: M_s = ceil(1/delta),
/// M_v = max(1, ceil(2 v_max n / delta)). Throws BudgetError when the
/// hypothesis count exceeds the budget.
HypothesisGrid plan_grid(double delta_target, int n, int d, double v_max,
                         long long budget = kDefaultHypothesisBudget);

/// Random query codebook: one Bernoulli(p) bit per (time, location cell),
/// bit-packed row-major. Reconstructible bit-exactly from (dimensions, p,
/// seed); rows are drawn in time order, cells ascending within a row.
struct Codebook {
  int n = 0;
  long long cells = 0;
  double p = 0.5;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> bits;
  std::vector<long long> row_ones;

  int bit(int t, long long cell) const {  // t in [1:n]
    const std::size_t w = static_cast<std::size_t>(t - 1) * words_per_row() +
                          static_cast<std::size_t>(cell >> 6);
    return static_cast<int>((bits[w] >> (cell & 63)) & 1u);
  }
  std::size_t words_per_row() const {
    return static_cast<std::size_t>((cells + 63) / 64);
  }
  double row_measure(int t) const {
    return static_cast<double>(row_ones[t - 1]) / static_cast<double>(cells);
  }
};

/// Draws the codebook; p in (0,1] (p = 1 queries everything, p = 0 is
/// rejected).
Codebook draw_codebook(const HypothesisGrid& grid, double p, std::uint64_t seed);

/// One query: the set of location cells whose bit is 1 at time t, and its
/// exact Lebesgue measure |cells| / M_s^d.
struct Query {
  std::vector<long long> cells;
  double measure = 0.0;
};

Query query_at(const Codebook& book, const HypothesisGrid& grid, int t);

/// Per-dimension cell index of a coordinate u in (0,1]: ceil(u*M_s) - 1.
/// Cells are the half-open intervals (k/M_s, (k+1)/M_s].
long long cell_index(double u, long long M_s);

/// Componentwise cell_index; throws std::domain_error outside (0,1]^d.
std::vector<long long> cell_of(std::span<const double> location, long long M_s);

/// Flat (mixed-radix, dimension 0 least significant) index of a location.
long long flat_cell_of(std::span<const double> location, long long M_s);

/// The oracle's noiseless answer at time t: the codebook bit of the cell
/// containing the target's (wrapped) location.
int oracle_answer(const Codebook& book, const HypothesisGrid& grid,
                  const TargetState& true_state, int t);

/// Cell-center representative (s_hat, v_hat) of hypothesis j; j enumerates
/// per-dimension (location cell, velocity cell) pairs in mixed radix with
/// dimension 0 least significant and the velocity cell as the inner digit.
struct Hypothesis {
  std::vector<double> s_rep;
  std::vector<double> v_rep;
};

Hypothesis representative(const HypothesisGrid& grid, long long j);

/// Bit sequence hypothesis j induces: at each time the codebook bit of the
/// location cell its representative trajectory occupies.
std::vector<std::uint8_t> trajectory_codeword(const Codebook& book,
                                              const HypothesisGrid& grid,
                                              long long j);

struct DecodeResult {
  long long j = 0;
  std::vector<double> s_hat;
  std::vector<double> v_hat;
  double score = 0.0;
};

/// Maximum empirical-information-density decoding over all trajectory
/// codewords, ties broken toward the smallest hypothesis index. q_seq holds
/// the realized per-query channel states.
DecodeResult decode(const Codebook& book, const HypothesisGrid& grid,
                    std::span<const std::uint8_t> y,
                    std::span<const double> q_seq, double p,
                    const ChannelSpec& channel);

/// Grid + codebook with everything reusable across episodes precomputed:
/// realized measures and states, info-density tables (memoized per distinct
/// row popcount), and all J trajectory codewords bit-packed hypothesis-major.
class PreparedScheme {
 public:
  PreparedScheme(const ChannelSpec& channel, HypothesisGrid grid, Codebook book);

  const HypothesisGrid& grid() const { return grid_; }
  const Codebook& codebook() const { return book_; }
  const std::vector<double>& measures() const { return measures_; }
  const std::vector<double>& states() const { return states_; }

  DecodeResult decode(std::span<const std::uint8_t> y) const;

 private:
  HypothesisGrid grid_;
  Codebook book_;
  std::vector<double> measures_;  // per t
  std::vector<double> states_;    // q_t = f(measure_t)
  std::vector<std::array<std::array<double, 2>, 2>> iota_per_t_;
  bool has_infinite_density_ = false;
  std::size_t words_per_codeword_ = 0;
  std::vector<std::uint64_t> codewords_;  // hypothesis-major

  int codeword_bit(long long j, int t) const {
    const std::size_t w = static_cast<std::size_t>(j) * words_per_codeword_ +
                          static_cast<std::size_t>((t - 1) >> 6);
    return static_cast<int>((codewords_[w] >> ((t - 1) & 63)) & 1u);
  }
};

/// Per-episode trace for the `track` front end.
struct EpisodeTrace {
  std::vector<double> measures;
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> y;
};

struct TrialResult {
  long long j = 0;
  std::vector<double> s_hat;
  std::vector<double> v_hat;
  double score = 0.0;
  bool excess = false;
  double max_unwrapped_error = 0.0;
};

/// One full episode: query, corrupt through the channel, decode, score the
/// excess event. The per-dimension unwrapped error is affine in t, so its
/// maximum over [0:n] is evaluated at the endpoints t = 0 and t = n.
TrialResult run_episode(const ChannelSpec& channel, const PreparedScheme& scheme,
                        const TargetState& true_state, double delta_target,
                        Rng& rng, EpisodeTrace* trace = nullptr);

/// Convenience overload that prepares the scheme first (small instances).
TrialResult run_episode(const ChannelSpec& channel, const HypothesisGrid& grid,
                        const Codebook& book, const TargetState& true_state,
                        double delta_target, Rng& rng,
                        EpisodeTrace* trace = nullptr);

}  // namespace qtrack
