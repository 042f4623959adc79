// qtrack: limits, phase curves, Monte Carlo excess-resolution experiments,
// single-episode traces, and channel validation for measurement-dependent
// 20-questions tracking.
//
// Exit codes: 0 ok, 1 runtime/budget failure, 2 usage or config error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qtrack/channel.hpp"
#include "qtrack/info.hpp"
#include "qtrack/limits.hpp"
#include "qtrack/mc.hpp"
#include "qtrack/scheme.hpp"
#include "qtrack/torus.hpp"
#include "qtrack/version.hpp"

using json = nlohmann::json;
using namespace qtrack;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

int default_threads() {
  if (const char* env = std::getenv("QTRACK_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Config files are flat JSON objects whose keys mirror long option names
// (dashes or underscores both accepted). Explicit command-line flags win and
// unknown keys are rejected.
json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::parse_error& e) {
    throw UsageError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  return cfg;
}

std::string canonical_key(std::string key) {
  for (char& c : key) {
    if (c == '-') c = '_';
  }
  return key;
}

void apply_config(const json& cfg, CLI::App* cmd) {
  for (const auto& [raw_key, value] : cfg.items()) {
    const std::string key = canonical_key(raw_key);
    CLI::Option* opt = nullptr;
    for (CLI::Option* candidate : cmd->get_options()) {
      for (const std::string& lname : candidate->get_lnames()) {
        if (canonical_key(lname) == key) {
          opt = candidate;
          break;
        }
      }
      if (opt) break;
    }
    if (opt == nullptr) {
      throw UsageError("unknown config key \"" + raw_key + "\" for subcommand " +
                       cmd->get_name());
    }
    if (opt->count() > 0) continue;  // explicit flag wins
    if (value.is_array()) {
      for (const auto& v : value) {
        opt->add_result(v.is_string() ? v.get<std::string>() : v.dump());
      }
    } else if (value.is_string()) {
      opt->add_result(value.get<std::string>());
    } else {
      opt->add_result(value.dump());
    }
    opt->run_callback();
  }
}

struct ChannelArgs {
  double zeta = 0.2;
  double slope = 2.0;
  double intercept = 0.5;

  void attach(CLI::App* cmd) {
    cmd->add_option("--zeta", zeta, "channel noise parameter in (0,1]")
        ->capture_default_str();
    cmd->add_option("--slope", slope, "size map slope a of f(q) = a*q + b")
        ->capture_default_str();
    cmd->add_option("--intercept", intercept, "size map intercept b")
        ->capture_default_str();
  }

  ChannelSpec build() const {
    try {
      return ChannelSpec(zeta, SizeMap(slope, intercept));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  json echo() const {
    return {{"zeta", zeta}, {"slope", slope}, {"intercept", intercept}};
  }
};

json stats_json(const ChannelStats& stats, double eps) {
  return {{"C", stats.C},
          {"p_ca", stats.p_ca},
          {"V_at_pca", stats.V_at_pca},
          {"T_at_pca", stats.T_at_pca},
          {"V_eps", v_eps(stats, eps)},
          {"units", "nats"}};
}

constexpr const char* kCoefficientNote =
    "excess-probability approximation uses the 2d log-delta coefficient, "
    "consistent with the C/(2d) critical rate; --printed-coefficient selects "
    "the d-coefficient variant";

// ---------------------------------------------------------------------------
// limits
// ---------------------------------------------------------------------------

struct LimitsCmd {
  ChannelArgs channel;
  int n = 1000;
  int d = 1;
  double eps = 0.1;
  double v_max = 0.0;
  double grid_step = 1e-4;
  std::string out;

  void attach(CLI::App* cmd) {
    channel.attach(cmd);
    cmd->add_option("--n", n, "number of queries")->capture_default_str();
    cmd->add_option("--d", d, "target dimension")->capture_default_str();
    cmd->add_option("--eps", eps, "target excess-resolution probability")
        ->capture_default_str();
    cmd->add_option("--v-max", v_max, "maximal per-dimension speed")
        ->capture_default_str();
    cmd->add_option("--grid-step", grid_step, "capacity scan step")
        ->capture_default_str();
    cmd->add_option("--out", out, "output path (default stdout)");
  }

  int run() const {
    if (n < 1 || d < 1) throw UsageError("limits needs --n >= 1 and --d >= 1");
    if (!(eps > 0.0 && eps < 1.0)) throw UsageError("--eps must lie in (0,1)");
    const ChannelSpec ch = channel.build();
    const ChannelStats stats = capacity(ch, grid_step);
    const LimitReport rep = make_limit_report(n, d, eps, v_max, stats);

    json out_json = {{"version", kVersionString},
                     {"command", "limits"},
                     {"channel", channel.echo()},
                     {"n", n},
                     {"d", d},
                     {"eps", eps},
                     {"v_max", v_max},
                     {"stats", stats_json(stats, eps)},
                     {"delta_approx", rep.delta_approx},
                     {"critical_rate", rep.critical_rate},
                     {"critical_rate_units", "nats/query"},
                     {"regime", to_string(rep.regime.regime)},
                     {"caveat", rep.regime.caveat},
                     {"note", kCoefficientNote}};
    if (!(rep.delta_approx > 0.0 && rep.delta_approx < 1.0)) {
      out_json["warning"] =
          "delta_approx fell outside (0,1): n is too small for the "
          "second-order approximation at this eps";
    }
    emit(out, out_json.dump(2) + "\n");
    return 0;
  }
};

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------

struct CurveCmd {
  ChannelArgs channel;
  int n = 1000;
  int d = 1;
  double v_max = 0.0;
  double rate_min = 0.0;  // 0 = auto (0.25x critical)
  double rate_max = 0.0;  // 0 = auto (1.75x critical)
  int points = 101;
  bool printed_coefficient = false;
  std::string out = "curve.csv";

  void attach(CLI::App* cmd) {
    channel.attach(cmd);
    cmd->add_option("--n", n, "number of queries")->capture_default_str();
    cmd->add_option("--d", d, "target dimension")->capture_default_str();
    cmd->add_option("--v-max", v_max, "maximal per-dimension speed")
        ->capture_default_str();
    cmd->add_option("--rate-min", rate_min, "lowest rate (default 0.25x critical)");
    cmd->add_option("--rate-max", rate_max, "highest rate (default 1.75x critical)");
    cmd->add_option("--points", points, "number of curve points")
        ->capture_default_str();
    cmd->add_flag("--printed-coefficient", printed_coefficient,
                  "use the d (not 2d) log-delta coefficient");
    cmd->add_option("--out", out, "CSV path; a .json sidecar is written next to it")
        ->capture_default_str();
  }

  int run() const {
    const ChannelSpec ch = channel.build();
    const ChannelStats stats = capacity(ch);
    const double rc =
        printed_coefficient ? stats.C / d : critical_rate(d, stats);
    const double lo = rate_min > 0.0 ? rate_min : 0.25 * rc;
    const double hi = rate_max > 0.0 ? rate_max : 1.75 * rc;
    const auto curve = phase_curve(n, d, stats, lo, hi, points, !printed_coefficient);

    std::ostringstream csv;
    csv << "rate,eps_hat,is_critical\n";
    for (const auto& pt : curve) {
      csv << fmt(pt.rate) << ',' << fmt(pt.eps_hat) << ',' << (pt.critical ? 1 : 0)
          << '\n';
    }
    emit(out, csv.str());

    const RegimeReport regime = velocity_regime(n, v_max);
    const json sidecar = {{"version", kVersionString},
                          {"command", "curve"},
                          {"channel", channel.echo()},
                          {"n", n},
                          {"d", d},
                          {"v_max", v_max},
                          {"C", stats.C},
                          {"V", stats.V_at_pca},
                          {"critical_rate", rc},
                          {"rate_min", lo},
                          {"rate_max", hi},
                          {"points", points},
                          {"coefficient", printed_coefficient ? "d" : "2d"},
                          {"regime", to_string(regime.regime)},
                          {"caveat", regime.caveat},
                          {"units", "nats"},
                          {"note", kCoefficientNote}};
    if (!out.empty() && out != "-") {
      write_text_file(out + ".json", sidecar.dump(2) + "\n");
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateCmd {
  ChannelArgs channel;
  int n = 0;
  int d = 1;
  double v_max = 0.0;
  std::vector<double> deltas;
  std::vector<double> rates;
  long long trials = 2000;
  std::uint64_t seed = 0;
  std::string prior = "uniform";
  int grid_points = 3;
  std::vector<double> state_s;
  std::vector<double> state_v;
  double p_design = 0.0;  // 0 = capacity-achieving
  long long budget = kDefaultHypothesisBudget;
  int threads = 0;  // 0 = QTRACK_THREADS or hardware
  bool fresh_codebook = false;
  double level = 0.95;
  std::string out = "simulate.csv";
  std::string manifest;  // default: <out>.manifest.json

  void attach(CLI::App* cmd) {
    channel.attach(cmd);
    cmd->add_option("--n", n, "number of queries (required)");
    cmd->add_option("--d", d, "target dimension")->capture_default_str();
    cmd->add_option("--v-max", v_max, "maximal per-dimension speed")
        ->capture_default_str();
    cmd->add_option("--delta", deltas, "resolution target(s)");
    cmd->add_option("--rate", rates,
                    "resolution decay rate(s); delta = exp(-rate*n)");
    cmd->add_option("--trials", trials, "episodes per delta")->capture_default_str();
    cmd->add_option("--seed", seed, "master seed")->capture_default_str();
    cmd->add_option("--prior", prior, "uniform | worst-case-grid | fixed")
        ->capture_default_str();
    cmd->add_option("--grid-points", grid_points,
                    "lattice points per axis for worst-case-grid")
        ->capture_default_str();
    cmd->add_option("--state-s", state_s, "fixed-state initial location");
    cmd->add_option("--state-v", state_v, "fixed-state velocity");
    cmd->add_option("--p", p_design,
                    "codebook design probability (default: capacity-achieving)");
    cmd->add_option("--budget", budget, "hypothesis budget")->capture_default_str();
    cmd->add_option("--threads", threads,
                    "worker threads (default QTRACK_THREADS or hardware); "
                    "never affects results");
    cmd->add_flag("--fresh-codebook-per-trial", fresh_codebook,
                  "redraw the codebook every trial (annealed variant)");
    cmd->add_option("--level", level, "confidence level")->capture_default_str();
    cmd->add_option("--out", out, "CSV output path")->capture_default_str();
    cmd->add_option("--manifest", manifest,
                    "manifest path (default <out>.manifest.json)");
  }

  ExperimentPlan build_plan(json* echo) const {
    if (n < 1) throw UsageError("simulate needs --n >= 1 (flag or config)");
    ExperimentPlan plan;
    plan.channel = channel.build();
    plan.n = n;
    plan.d = d;
    plan.v_max = v_max;
    plan.deltas = deltas;
    for (double r : rates) plan.deltas.push_back(std::exp(-r * n));
    if (plan.deltas.empty()) {
      throw UsageError("simulate needs --delta and/or --rate");
    }
    plan.trials = trials;
    plan.master_seed = seed;
    if (prior == "uniform" || prior == "uniform-product") {
      plan.prior.kind = PriorKind::kUniformProduct;
    } else if (prior == "worst-case-grid") {
      plan.prior.kind = PriorKind::kWorstCaseGrid;
      plan.prior.grid_points = grid_points;
    } else if (prior == "fixed" || prior == "fixed-state") {
      plan.prior.kind = PriorKind::kFixedState;
      if (static_cast<int>(state_s.size()) != d ||
          static_cast<int>(state_v.size()) != d) {
        throw UsageError("fixed prior needs --state-s and --state-v of length d");
      }
      plan.prior.fixed = TargetState(state_s, state_v, v_max);
    } else {
      throw UsageError("unknown prior \"" + prior + "\"");
    }
    if (p_design != 0.0) plan.p_design = p_design;
    plan.hypothesis_budget = budget;
    plan.threads = threads > 0 ? threads : default_threads();
    plan.fresh_codebook_per_trial = fresh_codebook;
    plan.ci_level = level;

    if (echo) {
      *echo = {{"channel", channel.echo()},
               {"n", n},
               {"d", d},
               {"v_max", v_max},
               {"deltas", plan.deltas},
               {"trials", trials},
               {"seed", seed},
               {"prior", to_string(plan.prior.kind)},
               {"grid_points", grid_points},
               {"p_design",
                plan.p_design ? json(*plan.p_design) : json("capacity-achieving")},
               {"budget", budget},
               {"threads", plan.threads},
               {"fresh_codebook_per_trial", fresh_codebook},
               {"level", level},
               {"out", out}};
      if (plan.prior.kind == PriorKind::kFixedState) {
        (*echo)["state_s"] = state_s;
        (*echo)["state_v"] = state_v;
      }
    }
    return plan;
  }

  int run(const json& config_file_echo, const std::string& config_path) const {
    json config_echo;
    const ExperimentPlan plan = build_plan(&config_echo);
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<SummaryRow> rows = estimate_excess_prob(plan);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    std::ostringstream csv;
    csv << "delta,rate,trials,excess,p_hat,ci_lo,ci_hi,eps_gauss,regime\n";
    for (const SummaryRow& row : rows) {
      csv << fmt(row.delta) << ',' << fmt(row.rate) << ',' << row.trials << ','
          << row.excess << ',' << fmt(row.p_hat) << ',' << fmt(row.ci_lo) << ','
          << fmt(row.ci_hi) << ',' << fmt(row.eps_gauss) << ',' << row.regime
          << '\n';
    }
    emit(out, csv.str());

    const json manifest_json = {
        {"version", kVersionString},
        {"command", "simulate"},
        {"config", config_echo},
        {"config_file", config_path.empty() ? json() : json(config_path)},
        {"config_file_values", config_file_echo},
        {"caveat", rows.empty() ? "" : rows.front().caveat},
        {"rows", rows.size()},
        {"wall_time_s", wall}};
    std::string manifest_path = manifest;
    if (manifest_path.empty() && !out.empty() && out != "-") {
      manifest_path = out + ".manifest.json";
    }
    if (!manifest_path.empty()) {
      write_text_file(manifest_path, manifest_json.dump(2) + "\n");
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------
// track
// ---------------------------------------------------------------------------

struct TrackCmd {
  ChannelArgs channel;
  int n = 0;
  int d = 1;
  double v_max = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> state_s;
  std::vector<double> state_v;
  double p_design = 0.0;
  long long budget = kDefaultHypothesisBudget;
  std::string out;
  std::string motion_csv;

  void attach(CLI::App* cmd) {
    channel.attach(cmd);
    cmd->add_option("--n", n, "number of queries (required)");
    cmd->add_option("--d", d, "target dimension")->capture_default_str();
    cmd->add_option("--v-max", v_max, "maximal per-dimension speed")
        ->capture_default_str();
    cmd->add_option("--delta", delta, "resolution target (required)");
    cmd->add_option("--seed", seed, "seed for state draw, codebook and noise")
        ->capture_default_str();
    cmd->add_option("--state-s", state_s, "true initial location (default: drawn)");
    cmd->add_option("--state-v", state_v, "true velocity (default: drawn)");
    cmd->add_option("--p", p_design,
                    "codebook design probability (default: capacity-achieving)");
    cmd->add_option("--budget", budget, "hypothesis budget")->capture_default_str();
    cmd->add_option("--out", out, "JSON output path (default stdout)");
    cmd->add_option("--motion-csv", motion_csv,
                    "also write t, wrapped location, unwrapped position per step");
  }

  int run() const {
    if (n < 1) throw UsageError("track needs --n >= 1 (flag or config)");
    if (!(delta > 0.0)) throw UsageError("track needs --delta in (0, 1/2)");
    const ChannelSpec ch = channel.build();
    Rng rng(derive_seed(seed, 0x7AC4, 0));

    TargetState truth;
    if (!state_s.empty() || !state_v.empty()) {
      if (static_cast<int>(state_s.size()) != d ||
          static_cast<int>(state_v.size()) != d) {
        throw UsageError("--state-s/--state-v must both have length d");
      }
      truth = TargetState(state_s, state_v, v_max);
    } else {
      Prior uniform;
      truth = sample_initial(uniform, d, v_max, 0, rng);
    }

    const HypothesisGrid grid = plan_grid(delta, n, d, v_max, budget);
    const ChannelStats stats = capacity(ch);
    const double p = p_design != 0.0 ? p_design : stats.p_ca.front();
    const Codebook book = draw_codebook(grid, p, derive_seed(seed, 0xB00C, 0));
    const PreparedScheme scheme(ch, grid, book);

    EpisodeTrace trace;
    const TrialResult res = run_episode(ch, scheme, truth, delta, rng, &trace);

    const json out_json = {
        {"version", kVersionString},
        {"command", "track"},
        {"channel", channel.echo()},
        {"n", n},
        {"d", d},
        {"v_max", v_max},
        {"delta", delta},
        {"seed", seed},
        {"p", p},
        {"grid",
         {{"M_s", grid.M_s}, {"M_v", grid.M_v}, {"J", grid.num_hypotheses()}}},
        {"true_state", {{"s", truth.s}, {"v", truth.v}}},
        {"measures", trace.measures},
        {"x", trace.x},
        {"y", trace.y},
        {"decoded", {{"s", res.s_hat}, {"v", res.v_hat}, {"j", res.j}}},
        {"score", res.score},
        {"excess", res.excess},
        {"max_unwrapped_error", res.max_unwrapped_error}};
    emit(out, out_json.dump(2) + "\n");

    if (!motion_csv.empty()) {
      std::ostringstream csv;
      csv << "t";
      for (int i = 1; i <= d; ++i) csv << ",loc_" << i;
      for (int i = 1; i <= d; ++i) csv << ",unwrapped_" << i;
      csv << '\n';
      for (int t = 0; t <= n; ++t) {
        csv << t;
        const auto loc = locate_vector(truth, t);
        for (int i = 0; i < d; ++i) csv << ',' << fmt(loc[i]);
        for (int i = 0; i < d; ++i) {
          csv << ',' << fmt(unwrapped_position(truth.s[i], truth.v[i], t));
        }
        csv << '\n';
      }
      write_text_file(motion_csv, csv.str());
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------
// validate-channel
// ---------------------------------------------------------------------------

struct ValidateCmd {
  ChannelArgs channel;
  std::vector<double> qs;   // measures for the continuity probes
  std::vector<double> xis;  // matching perturbations
  std::string out;

  void attach(CLI::App* cmd) {
    channel.attach(cmd);
    cmd->add_option("--q", qs, "continuity probe measures in (0,1)");
    cmd->add_option("--xi", xis, "matching perturbations");
    cmd->add_option("--out", out, "output path (default stdout)");
  }

  int run() const {
    const ChannelSpec ch = channel.build();

    double max_err = 0.0;
    const double fmax = ch.size_map.max_value();
    for (int i = 0; i <= 100; ++i) {
      const TransitionMatrix w = ch.transition(fmax * i / 100.0);
      for (int x = 0; x < 2; ++x) {
        max_err = std::max(max_err, std::abs(w[x][0] + w[x][1] - 1.0));
      }
    }

    std::vector<double> probe_q = qs;
    std::vector<double> probe_xi = xis;
    if (probe_q.empty()) {
      probe_q = {0.1, 0.25, 0.5, 0.75, 0.9};
      probe_xi.clear();
    }
    if (probe_xi.empty()) {
      for (double q : probe_q) probe_xi.push_back(std::min(q, 1.0 - q) / 10.0);
    }
    if (probe_xi.size() != probe_q.size()) {
      throw UsageError("--q and --xi must have equal lengths");
    }

    json checks = json::array();
    bool all_ok = true;
    for (std::size_t i = 0; i < probe_q.size(); ++i) {
      const ContinuityCheck c = verify_continuity(ch, probe_q[i], probe_xi[i]);
      all_ok = all_ok && c.ok;
      checks.push_back({{"q", probe_q[i]},
                        {"xi", probe_xi[i]},
                        {"lhs", c.lhs},
                        {"c_estimate", c.c_estimate},
                        {"c_ref", c.c_ref},
                        {"ok", c.ok}});
    }

    const json out_json = {{"version", kVersionString},
                           {"command", "validate-channel"},
                           {"channel", channel.echo()},
                           {"zeta_max_f", ch.zeta * fmax},
                           {"stochasticity",
                            {{"grid_points", 101},
                             {"max_row_sum_error", max_err},
                             {"ok", max_err <= 1e-12}}},
                           {"anti_informative", ch.anti_informative},
                           {"lipschitz", ch.size_map.lipschitz()},
                           {"continuity", checks},
                           {"continuity_ok", all_ok}};
    emit(out, out_json.dump(2) + "\n");
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qtrack: non-adaptive 20-questions tracking of a moving target "
               "under measurement-dependent noise"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersionString));

  std::string config_path;

  LimitsCmd limits_cmd;
  CurveCmd curve_cmd;
  SimulateCmd simulate_cmd;
  TrackCmd track_cmd;
  ValidateCmd validate_cmd;

  CLI::App* limits_app =
      app.add_subcommand("limits", "capacity, dispersion and resolution limits");
  limits_cmd.attach(limits_app);
  limits_app->add_option("--config", config_path, "JSON config file");

  CLI::App* curve_app =
      app.add_subcommand("curve", "phase-transition curve as CSV + JSON sidecar");
  curve_cmd.attach(curve_app);
  curve_app->add_option("--config", config_path, "JSON config file");

  CLI::App* simulate_app = app.add_subcommand(
      "simulate", "Monte Carlo excess-resolution estimate over a delta/rate sweep");
  simulate_cmd.attach(simulate_app);
  simulate_app->add_option("--config", config_path, "JSON config file");

  CLI::App* track_app =
      app.add_subcommand("track", "run and dump a single tracking episode");
  track_cmd.attach(track_app);
  track_app->add_option("--config", config_path, "JSON config file");

  CLI::App* validate_app = app.add_subcommand(
      "validate-channel", "stochasticity and continuity diagnostics as JSON");
  validate_cmd.attach(validate_app);
  validate_app->add_option("--config", config_path, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    json config_file_echo = json::object();
    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) {
      config_file_echo = load_config_file(config_path);
      apply_config(config_file_echo, active);
    }

    const std::string name = active->get_name();
    if (name == "limits") return limits_cmd.run();
    if (name == "curve") return curve_cmd.run();
    if (name == "simulate") return simulate_cmd.run(config_file_echo, config_path);
    if (name == "track") return track_cmd.run();
    if (name == "validate-channel") return validate_cmd.run();
    std::cerr << "unknown subcommand\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
