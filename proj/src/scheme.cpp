#include "qtrack/scheme.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace qtrack {

namespace {

std::string budget_message(double j, long long budget, const std::string& context) {
  std::ostringstream oss;
  if (!context.empty()) oss << context << ": ";
  oss << "hypothesis count J = " << j << " exceeds the budget of " << budget
      << "; lower n, raise delta, or raise the budget";
  return oss.str();
}

}  // namespace

BudgetError::BudgetError(double j, long long budget, const std::string& context)
    : std::runtime_error(budget_message(j, budget, context)), hypotheses(j) {}

long long HypothesisGrid::cells() const {
  long long c = 1;
  for (int i = 0; i < d; ++i) c *= M_s;
  return c;
}

long long HypothesisGrid::num_hypotheses() const {
  long long j = 1;
  for (int i = 0; i < d; ++i) j *= M_s * M_v;
  return j;
}

HypothesisGrid plan_grid(double delta_target, int n, int d, double v_max,
                         long long budget) {
  if (!(delta_target > 0.0 && delta_target < 0.5)) {
    throw std::domain_error("delta_target must lie in (0, 1/2), got " +
                            std::to_string(delta_target));
  }
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (!(v_max >= 0.0)) throw std::invalid_argument("v_max must be >= 0");
  if (budget < 1) throw std::invalid_argument("hypothesis budget must be >= 1");

  const double ms = std::ceil(1.0 / delta_target);
  const double mv =
      v_max == 0.0 ? 1.0 : std::max(1.0, std::ceil(2.0 * v_max * n / delta_target));
  const double j = std::pow(ms * mv, d);
  if (!(j <= static_cast<double>(budget))) {
    throw BudgetError(j, budget);
  }

  HypothesisGrid grid;
  grid.d = d;
  grid.n = n;
  grid.M_s = static_cast<long long>(ms);
  grid.M_v = static_cast<long long>(mv);
  grid.v_max = v_max;
  grid.delta_s = 1.0 / static_cast<double>(grid.M_s);
  grid.delta_v = v_max == 0.0 ? 0.0 : 2.0 * v_max / static_cast<double>(grid.M_v);
  return grid;
}

Codebook draw_codebook(const HypothesisGrid& grid, double p, std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::domain_error("codebook design p must lie in (0,1], got " +
                            std::to_string(p));
  }
  Codebook book;
  book.n = grid.n;
  book.cells = grid.cells();
  book.p = p;
  book.seed = seed;
  const std::size_t wpr = book.words_per_row();
  book.bits.assign(static_cast<std::size_t>(grid.n) * wpr, 0);
  book.row_ones.assign(grid.n, 0);

  Rng rng(seed);
  for (int t = 0; t < grid.n; ++t) {
    std::uint64_t* row = book.bits.data() + static_cast<std::size_t>(t) * wpr;
    long long ones = 0;
    for (long long c = 0; c < book.cells; ++c) {
      if (rng.uniform() < p) {
        row[c >> 6] |= std::uint64_t{1} << (c & 63);
        ++ones;
      }
    }
    book.row_ones[t] = ones;
  }
  return book;
}

Query query_at(const Codebook& book, const HypothesisGrid& grid, int t) {
  if (t < 1 || t > grid.n) {
    throw std::domain_error("query time t must lie in [1:n]");
  }
  Query q;
  q.cells.reserve(static_cast<std::size_t>(book.row_ones[t - 1]));
  for (long long c = 0; c < book.cells; ++c) {
    if (book.bit(t, c)) q.cells.push_back(c);
  }
  q.measure = static_cast<double>(q.cells.size()) / static_cast<double>(book.cells);
  return q;
}

long long cell_index(double u, long long M_s) {
  if (!(u > 0.0 && u <= 1.0)) {
    throw std::domain_error("coordinate " + std::to_string(u) +
                            " outside the location range (0,1]");
  }
  const long long k =
      static_cast<long long>(std::ceil(u * static_cast<double>(M_s))) - 1;
  return std::clamp(k, 0LL, M_s - 1);
}

std::vector<long long> cell_of(std::span<const double> location, long long M_s) {
  std::vector<long long> idx(location.size());
  for (std::size_t i = 0; i < location.size(); ++i) {
    idx[i] = cell_index(location[i], M_s);
  }
  return idx;
}

long long flat_cell_of(std::span<const double> location, long long M_s) {
  long long flat = 0;
  long long radix = 1;
  for (std::size_t i = 0; i < location.size(); ++i) {
    flat += cell_index(location[i], M_s) * radix;
    radix *= M_s;
  }
  return flat;
}

int oracle_answer(const Codebook& book, const HypothesisGrid& grid,
                  const TargetState& true_state, int t) {
  if (t < 1 || t > grid.n) {
    throw std::domain_error("query time t must lie in [1:n]");
  }
  const std::vector<double> loc = locate_vector(true_state, t);
  return book.bit(t, flat_cell_of(loc, grid.M_s));
}

Hypothesis representative(const HypothesisGrid& grid, long long j) {
  if (j < 0 || j >= grid.num_hypotheses()) {
    throw std::domain_error("hypothesis index out of range");
  }
  Hypothesis h;
  h.s_rep.resize(grid.d);
  h.v_rep.resize(grid.d);
  const long long base = grid.M_s * grid.M_v;
  for (int i = 0; i < grid.d; ++i) {
    const long long digit = j % base;
    j /= base;
    const long long k = digit / grid.M_v;
    const long long m = digit % grid.M_v;
    h.s_rep[i] = (static_cast<double>(k) + 0.5) * grid.delta_s;
    h.v_rep[i] = grid.M_v == 1 && grid.v_max == 0.0
                     ? 0.0
                     : -grid.v_max + (static_cast<double>(m) + 0.5) * grid.delta_v;
  }
  return h;
}

std::vector<std::uint8_t> trajectory_codeword(const Codebook& book,
                                              const HypothesisGrid& grid,
                                              long long j) {
  const Hypothesis h = representative(grid, j);
  const TargetState rep(h.s_rep, h.v_rep, std::max(grid.v_max, 0.0));
  std::vector<std::uint8_t> x(grid.n);
  for (int t = 1; t <= grid.n; ++t) {
    const std::vector<double> loc = locate_vector(rep, t);
    x[t - 1] = static_cast<std::uint8_t>(book.bit(t, flat_cell_of(loc, grid.M_s)));
  }
  return x;
}

DecodeResult decode(const Codebook& book, const HypothesisGrid& grid,
                    std::span<const std::uint8_t> y,
                    std::span<const double> q_seq, double p,
                    const ChannelSpec& channel) {
  if (static_cast<int>(y.size()) != grid.n ||
      static_cast<int>(q_seq.size()) != grid.n) {
    throw std::invalid_argument("decode: y and q_seq must have length n");
  }
  std::vector<InfoDensityTable> tables(grid.n);
  for (int t = 0; t < grid.n; ++t) {
    tables[t] = build_info_table(p, q_seq[t], channel);
  }

  const long long total = grid.num_hypotheses();
  long long best_j = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (long long j = 0; j < total; ++j) {
    const std::vector<std::uint8_t> x = trajectory_codeword(book, grid, j);
    double score = 0.0;
    for (int t = 0; t < grid.n; ++t) {
      score += tables[t].iota[x[t]][y[t]];
    }
    if (score > best) {
      best = score;
      best_j = j;
    }
  }

  DecodeResult out;
  out.j = best_j;
  Hypothesis h = representative(grid, best_j);
  out.s_hat = std::move(h.s_rep);
  out.v_hat = std::move(h.v_rep);
  out.score = best;
  return out;
}

PreparedScheme::PreparedScheme(const ChannelSpec& channel, HypothesisGrid grid,
                               Codebook book)
    : grid_(grid), book_(std::move(book)) {
  if (book_.n != grid_.n || book_.cells != grid_.cells()) {
    throw std::invalid_argument("codebook dimensions do not match the grid");
  }

  measures_.resize(grid_.n);
  states_.resize(grid_.n);
  iota_per_t_.resize(grid_.n);
  // At most cells+1 distinct row popcounts; memoize the density tables.
  std::map<long long, InfoDensityTable> memo;
  for (int t = 1; t <= grid_.n; ++t) {
    measures_[t - 1] = book_.row_measure(t);
    states_[t - 1] = channel.state_for_measure(measures_[t - 1]);
    auto [it, inserted] = memo.try_emplace(book_.row_ones[t - 1]);
    if (inserted) {
      it->second = build_info_table(book_.p, states_[t - 1], channel);
    }
    iota_per_t_[t - 1] = it->second.iota;
    for (int x = 0; x < 2; ++x) {
      for (int yy = 0; yy < 2; ++yy) {
        if (std::isinf(iota_per_t_[t - 1][x][yy])) has_infinite_density_ = true;
      }
    }
  }

  // Materialize all trajectory codewords once; episodes only rescore them.
  const long long total = grid_.num_hypotheses();
  words_per_codeword_ = static_cast<std::size_t>((grid_.n + 63) / 64);
  codewords_.assign(static_cast<std::size_t>(total) * words_per_codeword_, 0);
  std::vector<double> loc(grid_.d);
  for (long long j = 0; j < total; ++j) {
    const Hypothesis h = representative(grid_, j);
    std::uint64_t* cw = codewords_.data() +
                        static_cast<std::size_t>(j) * words_per_codeword_;
    bool stationary = true;
    for (double v : h.v_rep) stationary &= v == 0.0;
    if (stationary) {
      const long long flat = flat_cell_of(h.s_rep, grid_.M_s);
      for (int t = 1; t <= grid_.n; ++t) {
        if (book_.bit(t, flat)) cw[(t - 1) >> 6] |= std::uint64_t{1} << ((t - 1) & 63);
      }
    } else {
      for (int t = 1; t <= grid_.n; ++t) {
        for (int i = 0; i < grid_.d; ++i) {
          loc[i] = locate_scalar(h.s_rep[i], h.v_rep[i], t);
        }
        if (book_.bit(t, flat_cell_of(loc, grid_.M_s))) {
          cw[(t - 1) >> 6] |= std::uint64_t{1} << ((t - 1) & 63);
        }
      }
    }
  }
}

DecodeResult PreparedScheme::decode(std::span<const std::uint8_t> y) const {
  if (static_cast<int>(y.size()) != grid_.n) {
    throw std::invalid_argument("decode: y must have length n");
  }
  const long long total = grid_.num_hypotheses();
  long long best_j = 0;
  double best_score = -std::numeric_limits<double>::infinity();

  if (!has_infinite_density_) {
    // score_j = base + sum over set codeword bits of diff[t]; the base is
    // hypothesis-independent so only the sparse part is ranked.
    std::vector<double> diff(static_cast<std::size_t>(words_per_codeword_) * 64, 0.0);
    double base = 0.0;
    for (int t = 0; t < grid_.n; ++t) {
      const auto& tab = iota_per_t_[t];
      base += tab[0][y[t]];
      diff[t] = tab[1][y[t]] - tab[0][y[t]];
    }
    double best = -std::numeric_limits<double>::infinity();
    const std::uint64_t* cw = codewords_.data();
    for (long long j = 0; j < total; ++j, cw += words_per_codeword_) {
      double s = 0.0;
      for (std::size_t w = 0; w < words_per_codeword_; ++w) {
        std::uint64_t word = cw[w];
        const double* dw = diff.data() + w * 64;
        while (word) {
          s += dw[std::countr_zero(word)];
          word &= word - 1;
        }
      }
      if (s > best) {
        best = s;
        best_j = j;
      }
    }
    best_score = base + best;
  } else {
    // Some density is -inf (noiseless direction); sum selected entries
    // directly so no inf-minus-inf arises.
    std::array<std::vector<double>, 2> sel;
    sel[0].resize(grid_.n);
    sel[1].resize(grid_.n);
    for (int t = 0; t < grid_.n; ++t) {
      sel[0][t] = iota_per_t_[t][0][y[t]];
      sel[1][t] = iota_per_t_[t][1][y[t]];
    }
    for (long long j = 0; j < total; ++j) {
      double s = 0.0;
      for (int t = 1; t <= grid_.n; ++t) {
        s += sel[codeword_bit(j, t)][t - 1];
      }
      if (s > best_score) {
        best_score = s;
        best_j = j;
      }
    }
  }

  DecodeResult out;
  out.j = best_j;
  Hypothesis h = representative(grid_, best_j);
  out.s_hat = std::move(h.s_rep);
  out.v_hat = std::move(h.v_rep);
  out.score = best_score;
  return out;
}

TrialResult run_episode(const ChannelSpec& channel, const PreparedScheme& scheme,
                        const TargetState& true_state, double delta_target,
                        Rng& rng, EpisodeTrace* trace) {
  const HypothesisGrid& grid = scheme.grid();
  if (true_state.dim() != grid.d) {
    throw std::invalid_argument("target state dimension does not match the grid");
  }
  const int n = grid.n;
  std::vector<std::uint8_t> y(n);
  if (trace) {
    trace->measures = scheme.measures();
    trace->x.resize(n);
    trace->y.resize(n);
  }
  for (int t = 1; t <= n; ++t) {
    const int x = oracle_answer(scheme.codebook(), grid, true_state, t);
    y[t - 1] = static_cast<std::uint8_t>(
        sample_output(channel, scheme.states()[t - 1], x, rng));
    if (trace) {
      trace->x[t - 1] = static_cast<std::uint8_t>(x);
      trace->y[t - 1] = y[t - 1];
    }
  }

  const DecodeResult dec = scheme.decode(y);

  TrialResult res;
  res.j = dec.j;
  res.s_hat = dec.s_hat;
  res.v_hat = dec.v_hat;
  res.score = dec.score;
  double max_err = 0.0;
  for (int i = 0; i < grid.d; ++i) {
    const double e0 = std::abs(dec.s_hat[i] - true_state.s[i]);
    const double en = std::abs((dec.s_hat[i] + n * dec.v_hat[i]) -
                               (true_state.s[i] + n * true_state.v[i]));
    max_err = std::max({max_err, e0, en});
  }
  res.max_unwrapped_error = max_err;
  res.excess = max_err > delta_target;
  return res;
}

TrialResult run_episode(const ChannelSpec& channel, const HypothesisGrid& grid,
                        const Codebook& book, const TargetState& true_state,
                        double delta_target, Rng& rng, EpisodeTrace* trace) {
  const PreparedScheme scheme(channel, grid, book);
  return run_episode(channel, scheme, true_state, delta_target, rng, trace);
}

}  // namespace qtrack
