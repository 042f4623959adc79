// Process-level checks of the qtrack command line: exit codes, JSON/CSV
// outputs, config-file precedence, determinism. Usage: cli_tests <qtrack>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
  std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

struct RunResult {
  int rc = -1;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& cmd, const fs::path& tmp) {
  const fs::path out_file = tmp / "cmd_output.txt";
  const std::string full = cmd + " > " + out_file.string() + " 2>&1";
  const int raw = std::system(full.c_str());
  RunResult r;
  r.rc = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_file);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_tests <path-to-qtrack>\n");
    return 2;
  }
  const std::string qtrack = argv[1];
  const fs::path tmp = fs::temp_directory_path() / "qtrack_cli_tests";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  const std::string fig1 = " --zeta 0.2 --slope 2 --intercept 0.5";
  const std::string flat = " --zeta 0.2 --slope 0 --intercept 1";

  {
    const RunResult r = run(qtrack + " limits" + flat + " --n 200 --eps 0.25", tmp);
    check(r.rc == 0, "limits exits 0");
    const json j = json::parse(r.out, nullptr, false);
    check(!j.is_discarded(), "limits emits JSON");
    check(std::abs(j["stats"]["C"].get<double>() - 0.19274475702175742) < 1e-6,
          "limits C matches the constant-map closed form");
    check(j["stats"]["units"] == "nats", "limits labels units");
    check(j.contains("note"), "limits carries the coefficient note");
  }

  {
    const RunResult r = run(qtrack + " simulate" + fig1, tmp);
    check(r.rc == 2, "simulate without --n exits 2");
    const RunResult r2 = run(qtrack + " limits --no-such-flag", tmp);
    check(r2.rc == 2, "unknown flag exits 2");
    const RunResult r3 = run(qtrack + " limits" + fig1 + " --eps 1.5", tmp);
    check(r3.rc == 2, "out-of-range eps exits 2");
    const RunResult r4 = run(qtrack + " limits --zeta 0 --slope 2 --intercept 0.5", tmp);
    check(r4.rc == 2, "invalid channel parameters exit 2");
  }

  {
    const fs::path cfg = tmp / "bad.json";
    std::ofstream(cfg) << R"({"bogus_key": 1})";
    const RunResult r = run(qtrack + " limits --config " + cfg.string(), tmp);
    check(r.rc == 2, "unknown config key exits 2");
    check(r.out.find("bogus_key") != std::string::npos,
          "config error names the offending key");
  }

  {
    // config supplies values; a contradictory flag wins; manifest records both
    const fs::path cfg = tmp / "sim.json";
    const fs::path csv = tmp / "sim.csv";
    std::ofstream(cfg) << R"({"zeta":0.2,"slope":2,"intercept":0.5,"n":30,)"
                       << R"("delta":[0.1],"trials":40,"seed":3,"out":")"
                       << csv.string() << R"("})";
    const RunResult r = run(
        qtrack + " simulate --config " + cfg.string() + " --trials 25", tmp);
    check(r.rc == 0, "simulate with config exits 0");
    const json manifest = json::parse(slurp(fs::path(csv.string() + ".manifest.json")));
    check(manifest["config"]["trials"] == 25, "flag overrides config value");
    check(manifest["config_file_values"]["trials"] == 40,
          "manifest records the config-file value");
    check(manifest["config"]["n"] == 30, "config fills unset flags");
    const std::string body = slurp(csv);
    check(body.rfind("delta,rate,trials,excess,p_hat,ci_lo,ci_hi,eps_gauss,regime",
                     0) == 0,
          "simulate CSV header is stable");
    check(body.find(",25,") != std::string::npos, "simulate CSV row uses 25 trials");
  }

  {
    const fs::path a = tmp / "a.csv";
    const fs::path b = tmp / "b.csv";
    const fs::path c = tmp / "c.csv";
    const std::string base = qtrack + " simulate" + fig1 +
                             " --n 40 --delta 0.05 --trials 60 --seed 11 --out ";
    const RunResult ra = run(base + a.string() + " --threads 1", tmp);
    const RunResult rb = run(base + b.string() + " --threads 3", tmp);
    check(ra.rc == 0 && rb.rc == 0, "simulate runs with both thread counts");
    check(slurp(a) == slurp(b), "CSV is byte-identical across --threads");
    const RunResult rc_env =
        run("QTRACK_THREADS=2 " + base + c.string(), tmp);
    check(rc_env.rc == 0 && slurp(a) == slurp(c),
          "QTRACK_THREADS env var works as the --threads fallback");
  }

  {
    const fs::path trace = tmp / "trace.json";
    const fs::path motion = tmp / "motion.csv";
    const RunResult r = run(qtrack + " track" + fig1 +
                                " --n 12 --delta 0.1 --seed 7 --v-max 0.01" +
                                " --out " + trace.string() +
                                " --motion-csv " + motion.string(),
                            tmp);
    check(r.rc == 0, "track exits 0");
    const json j = json::parse(slurp(trace));
    check(j["measures"].size() == 12, "track emits n measures");
    check(j["x"].size() == 12 && j["y"].size() == 12, "track emits x^n and y^n");
    check(j["decoded"]["s"].size() == 1 && j["decoded"]["v"].size() == 1,
          "track emits the decoded state");
    check(j.contains("excess") && j.contains("score"), "track emits the verdict");
    std::istringstream lines(slurp(motion));
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    check(rows == 14, "motion CSV has header + n+1 rows");
  }

  {
    const fs::path csv = tmp / "curve.csv";
    const RunResult r = run(
        qtrack + " curve" + fig1 + " --n 500 --points 21 --out " + csv.string(),
        tmp);
    check(r.rc == 0, "curve exits 0");
    std::istringstream lines(slurp(csv));
    std::string line;
    std::getline(lines, line);
    check(line == "rate,eps_hat,is_critical", "curve CSV header is stable");
    bool found_critical = false;
    double prev_eps = -1.0;
    bool monotone = true;
    while (std::getline(lines, line)) {
      std::istringstream cells(line);
      std::string rate_s, eps_s, crit_s;
      std::getline(cells, rate_s, ',');
      std::getline(cells, eps_s, ',');
      std::getline(cells, crit_s, ',');
      const double eps_hat = std::stod(eps_s);
      monotone = monotone && eps_hat >= prev_eps;
      prev_eps = eps_hat;
      if (crit_s == "1") {
        found_critical = true;
        check(std::abs(eps_hat - 0.5) <= 1e-9, "eps_hat is 0.5 at the critical rate");
      }
    }
    check(found_critical, "curve marks the critical rate row");
    check(monotone, "curve is monotone in rate");
    const json sidecar = json::parse(slurp(fs::path(csv.string() + ".json")));
    check(sidecar.contains("C") && sidecar.contains("critical_rate"),
          "curve sidecar carries C and the critical rate");
  }

  {
    // priors: worst-case-grid reports the worst lattice state; fixed needs a state
    const fs::path wc = tmp / "wc.csv";
    const RunResult r = run(qtrack + " simulate" + fig1 +
                                " --n 25 --delta 0.1 --trials 90 --seed 5"
                                " --prior worst-case-grid --grid-points 3 --out " +
                                wc.string(),
                            tmp);
    check(r.rc == 0, "simulate with worst-case-grid prior exits 0");
    const std::string body = slurp(wc);
    check(body.find(",10,") != std::string::npos,
          "worst-case rows report per-state trial counts (90 / 9 states)");
    const RunResult r2 = run(qtrack + " simulate" + fig1 +
                                 " --n 25 --delta 0.1 --trials 10 --prior fixed",
                             tmp);
    check(r2.rc == 2, "fixed prior without --state-s/--state-v exits 2");
  }

  {
    const RunResult r = run(qtrack + " validate-channel" + fig1, tmp);
    check(r.rc == 0, "validate-channel exits 0");
    const json j = json::parse(r.out);
    check(j["stochasticity"]["ok"].get<bool>(), "rows are stochastic");
    check(j["continuity_ok"].get<bool>(), "continuity checks pass");
    check(j["anti_informative"].get<bool>(),
          "crossover reaching 1/2 is flagged anti-informative");
  }

  {
    // hypothesis budget exceeded -> runtime failure naming J
    const RunResult r = run(qtrack + " simulate" + fig1 +
                                " --n 400 --rate 0.0738 --trials 10",
                            tmp);
    check(r.rc == 1, "budget overflow exits 1");
    check(r.out.find("hypothesis count") != std::string::npos,
          "budget error names the hypothesis count");
  }

  std::printf("cli_tests: %s (%d failure%s)\n", g_failures == 0 ? "PASS" : "FAIL",
              g_failures, g_failures == 1 ? "" : "s");
  return g_failures == 0 ? 0 : 1;
}
