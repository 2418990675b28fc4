// One line per acceptance criterion; exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "aqurate/clockgen.hpp"
#include "aqurate/device.hpp"
#include "aqurate/pipeline.hpp"
#include "aqurate/scaling.hpp"
#include "aqurate/sre.hpp"
#include "support/oracles.hpp"
#include "support/property_checks.hpp"

using namespace aqurate;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Criterion 1: P(out=1) at 0.4 V over 1e5 samples is 0.500 +- 0.015, oracle exactly 0.5, < 5 s.
Verdict operating_point() {
  const auto t0 = std::chrono::steady_clock::now();
  DeviceParams dev;
  ClockConfig clock;
  Rng rng(derive_seed(1, {1}));
  const std::vector<double> grid{0.4};
  const auto ch = characterize(grid, 100000, clock, dev, rng);
  const double p = ch.points[0].probability;
  const double oracle_p = output_probability(0.4, dev);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::abs(p - 0.5) <= 0.015 && oracle_p == 0.5 && secs < 5.0,
          fmt("empirical %.5f, closed form %.17g, %.2f s", p, oracle_p, secs)};
}

// Criterion 2: 0 -> 0.8 V staircase, 200 mV / 100 ns at 1 GHz: monotone, endpoints 0 and 1, < 5 s.
Verdict staircase() {
  const auto t0 = std::chrono::steady_clock::now();
  DeviceParams dev;
  ClockConfig clock;
  Rng rng(derive_seed(1, {2}));
  const auto grid = voltage_grid(dev.vdd, 0.2);
  const auto samples = static_cast<std::size_t>(std::llround(100e-9 * clock.f_clk));
  const auto ch = characterize(grid, samples, clock, dev, rng);
  bool monotone = true;
  std::string curve;
  for (std::size_t i = 0; i < ch.points.size(); ++i) {
    if (i && ch.points[i].probability < ch.points[i - 1].probability) monotone = false;
    curve += fmt("%s%.2f", i ? " " : "", ch.points[i].probability);
  }
  const bool ends = ch.points.front().probability == 0.0 && ch.points.back().probability == 1.0;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {grid.size() == 5 && samples == 100 && monotone && ends && secs < 5.0,
          fmt("ones-fractions [%s], %.3f s", curve.c_str(), secs)};
}

// Criterion 3: 17-point grid, 1e4 samples each, every point within 3 binomial sigma.
Verdict oracle_agreement() {
  DeviceParams dev;
  ClockConfig clock;
  Rng rng(derive_seed(1, {3}));
  const auto grid = voltage_grid(dev.vdd, 0.05);
  const std::size_t n = 10000;
  const auto ch = characterize(grid, n, clock, dev, rng);
  double worst = 0.0;
  bool ok = grid.size() == 17;
  for (const auto& pt : ch.points) {
    const double q = output_probability(pt.vin, dev);
    const double sigma = oracle::binomial_sigma(static_cast<double>(n), q) / static_cast<double>(n);
    const double dev_abs = std::abs(pt.probability - q);
    if (sigma > 0.0) worst = std::max(worst, dev_abs / sigma);
    else if (dev_abs != 0.0) ok = false;
    if (dev_abs > 3.0 * sigma) ok = false;
  }
  return {ok, fmt("%zu points, worst deviation %.2f sigma", grid.size(), worst)};
}

// Criterion 4: mean |instants| over 500 frames of 1024 within 3 sqrt(1024 p (1-p)) of 1024 p.
Verdict clock_rate() {
  DeviceParams dev;
  ClockConfig clock;
  Rng cal_rng(0);
  const Calibration cal = calibrate(dev, 0.005, 0, cal_rng);
  bool ok = true;
  std::string detail;
  for (double p : {0.2, 0.5, 0.9}) {
    const double v = probability_to_vsr(p, cal);
    const double q = output_probability(v, dev);
    Rng rng(derive_seed(1, {4, static_cast<std::uint64_t>(p * 100)}));
    StochasticOscillator osc(dev, rng);
    double total = 0.0;
    for (std::size_t f = 0; f < 500; ++f) total += static_cast<double>(generate_aclk(v, clock, osc, rng, f).instants.size());
    const double mean = total / 500.0;
    const double bound = 3.0 * std::sqrt(1024.0 * p * (1.0 - p));
    ok = ok && std::abs(q - p) < 1e-9 && std::abs(mean - 1024.0 * p) <= bound;
    detail += fmt("%sp=%.1f V_SR=%.4f mean=%.2f target=%.1f+-%.1f", detail.empty() ? "" : "; ", p, v,
                  mean, 1024.0 * p, bound);
  }
  return {ok, detail};
}

// Criterion 5: n=256, s=5%, true K, P=0.6, noiseless: error < 1e-6 in >= 95% of 200 trials, < 60 s.
Verdict exact_recovery() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.n = 256;
  cfg.clock.frame_len = 256;
  cfg.frames = 1;
  cfg.warmup = 0;
  cfg.trials = 200;
  cfg.rates = {0.05};
  cfg.snr_db.reset();
  cfg.k_policy = KPolicy::GroundTruth;
  cfg.force_probability = 0.6;
  cfg.seed = 5;
  const TrialReport r = run_experiment(cfg);
  std::map<SolverKind, std::size_t> hits;
  for (const auto& row : r.results) hits[row.solver] += row.error < 1e-6;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::size_t need = 190;
  return {hits[SolverKind::Omp] >= need && hits[SolverKind::Cosamp] >= need && secs < 60.0,
          fmt("OMP %zu/200, CoSaMP %zu/200 below 1e-6, %.1f s", hits[SolverKind::Omp],
              hits[SolverKind::Cosamp], secs)};
}

// Criterion 6: n=1024, 25 dB, kappa 4, closed loop, 200 trials: all means in (0.005, 0.10),
// CoSaMP <= OMP within 2 standard errors of the paired difference, 15% below 5% per solver,
// under 15 minutes.
Verdict error_table() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;  // defaults are the experiment settings
  cfg.n = 1024;
  cfg.clock.frame_len = 1024;
  cfg.snr_db = 25.0;
  cfg.policy.kappa = 4.0;
  cfg.trials = 200;
  cfg.k_policy = KPolicy::Estimated;
  cfg.seed = 1;
  const TrialReport r = run_experiment(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // Per-trial steady-state means keyed (rate, trial) for the paired comparison.
  std::map<std::pair<double, std::size_t>, std::map<SolverKind, double>> trial_mean;
  for (const auto& row : r.results)
    if (!row.warmup)
      trial_mean[{row.rate, row.trial}][row.solver] += row.error / static_cast<double>(cfg.frames - cfg.warmup);

  std::map<std::pair<SolverKind, double>, double> mean;
  for (const auto& s : r.summary) mean[{s.solver, s.rate}] = s.mean_error;

  bool ok = secs < 900.0;
  std::string detail;
  for (double rate : cfg.rates) {
    std::vector<double> d;
    for (const auto& [key, m] : trial_mean)
      if (key.first == rate) d.push_back(m.at(SolverKind::Cosamp) - m.at(SolverKind::Omp));
    double md = 0.0;
    for (double x : d) md += x;
    md /= static_cast<double>(d.size());
    double ss = 0.0;
    for (double x : d) ss += (x - md) * (x - md);
    const double se = std::sqrt(ss / static_cast<double>(d.size() - 1) / static_cast<double>(d.size()));
    const double omp_m = mean[{SolverKind::Omp, rate}];
    const double cos_m = mean[{SolverKind::Cosamp, rate}];
    ok = ok && omp_m > 0.005 && omp_m < 0.10 && cos_m > 0.005 && cos_m < 0.10 && md <= 2.0 * se;
    detail += fmt("%s%.0f%%: OMP %.4f CoSaMP %.4f (diff %+.5f, 2SE %.5f)", detail.empty() ? "" : "; ",
                  rate * 100.0, omp_m, cos_m, md, 2.0 * se);
  }
  for (SolverKind s : cfg.solvers) ok = ok && mean[{s, 0.15}] < mean[{s, 0.05}];
  detail += fmt("; %.0f s", secs);
  return {ok, detail};
}

// Criterion 7: reference row exactly 1x/1x, scale factors to 1e-12, 23 transistors.
Verdict scaling() {
  const ScalingEntry ref = aqr_reference();
  const auto rows = table_report(bundled_entries(), ref);
  const auto& self = rows.back();
  const double vf = voltage_factor(0.8, 1.1);
  const double nf = node_factor(14.0, 65.0);
  const std::size_t count = transistor_count(AqrNetlist::standard());
  const bool ok = self.name == ref.name && self.power_norm == 1.0 && self.area_norm == 1.0 &&
                  std::abs(vf - 0.64 / 1.21) < 1e-12 && std::abs(nf - 196.0 / 4225.0) < 1e-12 &&
                  count == 23;
  return {ok, fmt("reference %gx/%gx, (0.8/1.1)^2=%.15f, (14/65)^2=%.15f, %zu transistors",
                  self.power_norm.value_or(NAN), self.area_norm.value_or(NAN), vf, nf, count)};
}

#ifdef AQURATE_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(AQURATE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
#endif

// Criterion 8: every command re-run from its manifest produces byte-identical CSVs.
Verdict determinism() {
#ifdef AQURATE_CLI_PATH
  const fs::path root = fs::temp_directory_path() / "aqurate_acceptance";
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"characterize", "--seed 11"},
      {"calibrate", "--grid-step 0.05 --samples 2000 --seed 12"},
      {"experiment", "--n 256 --frames 4 --warmup 1 --trials 3 --jobs 2 --seed 13 --dump-frame"},
      {"scaling", "--inverse"},
  };
  std::size_t compared = 0;
  for (const auto& [sub, args] : runs) {
    const fs::path a = root / (sub + "_a"), b = root / (sub + "_b");
    if (run_cli(sub + " " + args + " --out " + a.string()) != 0)
      return {false, sub + " failed to run"};
    if (run_cli("--config " + (a / "manifest.ini").string() + " " + sub + " --out " + b.string()) != 0)
      return {false, sub + " replay failed"};
    for (const auto& e : fs::directory_iterator(a)) {
      if (e.path().extension() != ".csv") continue;
      if (slurp(e.path()) != slurp(b / e.path().filename()))
        return {false, sub + ": " + e.path().filename().string() + " differs on replay"};
      ++compared;
    }
  }
  fs::remove_all(root);
  return {compared >= 10, fmt("%zu CSVs byte-identical across 4 manifest replays", compared)};
#else
  return {false, "CLI not built"};
#endif
}

// Criterion 9: property suites over 1000 randomized cases each.
Verdict properties() {
  const std::vector<std::pair<const char*, props::Outcome>> suites{
      {"omp-residual", props::omp_residual_monotone(901)},
      {"scale-invariance", props::solver_scale_invariance(902)},
      {"parseval", props::parseval(903)},
      {"sre-threshold", props::sre_threshold_scale_invariance(904)},
      {"aclk-conservation", props::aclk_event_conservation(905)},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [name, o] : suites) {
    ok = ok && o.ok() && o.cases == 1000;
    detail += fmt("%s%s %zu/%zu", detail.empty() ? "" : ", ", name, o.cases - o.failures, o.cases);
    if (!o.ok()) detail += " (" + o.first_failure + ")";
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Verdict()>>> criteria{
      {1, operating_point}, {2, staircase},      {3, oracle_agreement},
      {4, clock_rate},      {5, exact_recovery}, {6, error_table},
      {7, scaling},         {8, determinism},    {9, properties},
  };
  int failed = 0;
  for (const auto& [id, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("criterion %d: %s  %s\n", id, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
