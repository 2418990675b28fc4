// aqurate: command-line front end.
//
//   aqurate characterize  staircase sweep of the stochastic oscillator
//   aqurate calibrate     V_SR calibration table
//   aqurate experiment    closed-loop acquisition + recovery trials
//   aqurate scaling       normalized power/area comparison table
//
// Every run writes manifest.ini next to its outputs; `aqurate --config
// OUT/manifest.ini` replays it (add `<subcommand> --out DIR` to redirect).
//
// Exit codes: 0 ok, 2 configuration error, 3 runtime failure.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "aqurate/clockgen.hpp"
#include "aqurate/csv.hpp"
#include "aqurate/device.hpp"
#include "aqurate/pipeline.hpp"
#include "aqurate/report.hpp"
#include "aqurate/scaling.hpp"
#include "aqurate/sre.hpp"

namespace fs = std::filesystem;
using namespace aqurate;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DeviceArgs {
  DeviceParams params;
  std::string mz_mode = "uniform";
  double vth_inv = 0.0;  // 0 selects vdd / 2

  void add_to(CLI::App* app) {
    app->add_option("--g0", params.g0, "average MTJ conductance (S)")->capture_default_str();
    app->add_option("--tmr", params.tmr, "tunneling magnetoresistance ratio")->capture_default_str();
    app->add_option("--vdd", params.vdd, "supply voltage (V)")->capture_default_str();
    app->add_option("--vtn", params.vtn, "NMOS cutoff voltage (V)")->capture_default_str();
    app->add_option("--vth-inv", vth_inv, "inverter threshold (V), 0 = vdd/2")->capture_default_str();
    app->add_option("--mz-mode", mz_mode, "magnetization process")
        ->check(CLI::IsMember({"uniform", "telegraph"}))
        ->capture_default_str();
    app->add_option("--tau-c", params.tau_c, "m_z update interval (s)")->capture_default_str();
    app->add_option("--energy-barrier", params.energy_barrier_kt, "E_B / kT")->capture_default_str();
  }

  DeviceParams resolve() const {
    DeviceParams p = params;
    p.mz_mode = parse_mz_mode(mz_mode);
    p.vth_inv = vth_inv > 0.0 ? vth_inv : 0.5 * p.vdd;
    p.validate();
    return p;
  }
};

struct Common {
  std::uint64_t seed = 1;
  std::string out = "out";

  void add_to(CLI::App* app) {
    app->add_option("--seed", seed, "master seed")->capture_default_str();
    app->add_option("--out", out, "output directory")->capture_default_str();
  }
};

void write_manifest(const CLI::App* sub, const fs::path& dir) {
  std::string text = "# aqurate " AQURATE_VERSION "\n";
  text += "# tool_version=" AQURATE_VERSION "\n";
  text += "# subcommand=" + sub->get_name() + "\n";
  text += "# replay: aqurate --config <this file> [" + sub->get_name() + " --out DIR]\n";
  text += "[" + sub->get_name() + "]\n";
  text += sub->config_to_str(true, false);
  write_file_atomic(dir / "manifest.ini", text);
}

// --- characterize ---------------------------------------------------------

struct CharacterizeArgs {
  Common common;
  DeviceArgs device;
  double grid_step = 0.2;
  double dwell_ns = 100.0;
  double f_clk = 1e9;
  std::size_t samples = 0;
  bool analytic = false;
};

void run_characterize(const CharacterizeArgs& a, const CLI::App* sub) {
  const DeviceParams dev = a.device.resolve();
  ClockConfig clock;
  clock.f_clk = a.f_clk;
  try {
    clock.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(a.grid_step > 0.0)) throw ConfigError("--grid-step must be positive");
  const std::vector<double> grid = voltage_grid(dev.vdd, a.grid_step);
  const fs::path dir = a.common.out;

  if (a.analytic) {
    write_file_atomic(dir / "characterize.csv", characterization_csv(characterize_analytic(grid, dev)));
  } else {
    std::size_t samples = a.samples;
    if (samples == 0) samples = static_cast<std::size_t>(std::llround(a.dwell_ns * 1e-9 * a.f_clk));
    if (samples == 0) throw ConfigError("dwell window shorter than one clock period");
    Rng rng = make_rng(a.common.seed, {0});
    const Characterization ch = characterize(grid, samples, clock, dev, rng);
    write_file_atomic(dir / "characterize.csv", characterization_csv(ch.points));
    write_file_atomic(dir / "trace.csv", staircase_trace_csv(ch, a.f_clk));
  }
  write_manifest(sub, dir);
}

// --- calibrate ------------------------------------------------------------

struct CalibrateArgs {
  Common common;
  DeviceArgs device;
  double grid_step = 0.01;
  std::size_t samples = 0;
};

void run_calibrate(const CalibrateArgs& a, const CLI::App* sub) {
  const DeviceParams dev = a.device.resolve();
  if (!(a.grid_step > 0.0)) throw ConfigError("--grid-step must be positive");
  Rng rng = make_rng(a.common.seed, {0});
  const Calibration cal = calibrate(dev, a.grid_step, a.samples, rng);
  const fs::path dir = a.common.out;
  write_file_atomic(dir / "calibration.csv", calibration_csv(cal));
  write_manifest(sub, dir);
}

// --- experiment -----------------------------------------------------------

struct ExperimentArgs {
  Common common;
  DeviceArgs device;
  ExperimentConfig cfg;
  std::vector<std::string> solvers{"omp", "cosamp"};
  std::string k_policy = "estimated";
  double snr_db = 25.0;
  bool noiseless = false;
  bool off_grid = false;
  double force_probability = -1.0;
  double f_clk = 1e9;
  bool textbook_cosamp = false;
  bool dump_frame = false;
};

void run_experiment_cmd(ExperimentArgs& a, const CLI::App* sub) {
  ExperimentConfig cfg = a.cfg;
  try {
    cfg.device = a.device.resolve();
    cfg.solvers.clear();
    for (const auto& s : a.solvers) cfg.solvers.push_back(parse_solver(s));
    cfg.k_policy = parse_k_policy(a.k_policy);
    cfg.snr_db = a.noiseless ? std::nullopt : std::optional<double>(a.snr_db);
    cfg.on_grid = !a.off_grid;
    if (a.force_probability >= 0.0) cfg.force_probability = a.force_probability;
    cfg.clock.f_clk = a.f_clk;
    cfg.clock.frame_len = cfg.n;
    cfg.seed = a.common.seed;
    cfg.cosamp_refit = !a.textbook_cosamp;
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const TrialReport report = run_experiment(cfg, a.dump_frame);
  const fs::path dir = a.common.out;
  write_file_atomic(dir / "results.csv", results_csv(report));
  write_file_atomic(dir / "frames.csv", frames_csv(report));
  write_file_atomic(dir / "summary.csv", summary_csv(report.summary));
  write_file_atomic(dir / "summary.txt", summary_table(report.summary));
  if (report.dump) {
    write_file_atomic(dir / "signal.csv", signal_csv(report.dump->signal));
    write_file_atomic(dir / "measurements.csv", measurements_csv(report.dump->measurements));
    write_file_atomic(dir / "trace.csv", aclk_trace_csv({report.dump->trace}));
  }
  write_manifest(sub, dir);
  std::cout << summary_table(report.summary);
}

// --- scaling --------------------------------------------------------------

struct ScalingArgs {
  Common common;
  std::string entries;
  std::string reference = "This Work";
  bool inverse = false;
};

void run_scaling(const ScalingArgs& a, const CLI::App* sub) {
  std::vector<ScalingEntry> entries;
  try {
    entries = a.entries.empty() ? bundled_entries() : parse_scaling_entries(read_csv(a.entries));
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  ScalingEntry ref = aqr_reference();
  for (const ScalingEntry& e : entries)
    if (e.name == a.reference) ref = e;

  const ReportMode mode = a.inverse ? ReportMode::Inverse : ReportMode::Forward;
  std::vector<ReportRow> rows;
  try {
    rows = table_report(entries, ref, mode);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const fs::path dir = a.common.out;
  write_file_atomic(dir / "scaling.csv", scaling_csv(rows, mode));
  const std::string table = scaling_table(rows, mode);
  write_file_atomic(dir / "scaling.txt", table);
  write_manifest(sub, dir);
  std::cout << table;
  if (a.inverse)
    std::cout << "raw values are back-solved from published normalized factors, not measured\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AQR generator behavioral simulator"};
  app.set_version_flag("--version", AQURATE_VERSION);
  app.set_config("--config", "", "replay a manifest.ini");
  app.require_subcommand(1);
  std::size_t jobs = 1;

  CharacterizeArgs ch;
  auto* c_ch = app.add_subcommand("characterize", "staircase sweep of oscillator output probability")
                   ->configurable();
  ch.common.add_to(c_ch);
  ch.device.add_to(c_ch);
  c_ch->add_option("--grid-step", ch.grid_step, "V_IN step (V)")->capture_default_str();
  c_ch->add_option("--dwell-ns", ch.dwell_ns, "hold time per step (ns)")->capture_default_str();
  c_ch->add_option("--f-clk", ch.f_clk, "sampling clock (Hz)")->capture_default_str();
  c_ch->add_option("--samples", ch.samples, "samples per step, 0 = dwell x f_clk")->capture_default_str();
  c_ch->add_flag("--analytic", ch.analytic, "closed-form curve, no sampling");

  CalibrateArgs ca;
  auto* c_ca = app.add_subcommand("calibrate", "V_SR calibration table")->configurable();
  ca.common.add_to(c_ca);
  ca.device.add_to(c_ca);
  c_ca->add_option("--grid-step", ca.grid_step, "V_IN step (V)")->capture_default_str();
  c_ca->add_option("--samples", ca.samples, "Monte-Carlo samples per point, 0 = closed form")
      ->capture_default_str();

  ExperimentArgs ex;
  auto* c_ex = app.add_subcommand("experiment", "closed-loop sampling and recovery trials")
                   ->configurable();
  ex.common.add_to(c_ex);
  ex.device.add_to(c_ex);
  ExperimentConfig& cfg = ex.cfg;
  c_ex->add_option("--n", cfg.n, "frame length (power of two)")->capture_default_str();
  c_ex->add_option("--frames", cfg.frames, "frames per trial")->capture_default_str();
  c_ex->add_option("--warmup", cfg.warmup, "leading frames excluded from aggregates")->capture_default_str();
  c_ex->add_option("--trials", cfg.trials, "trials per rate")->capture_default_str();
  c_ex->add_option("--rates", cfg.rates, "sparsity rates")->delimiter(',')->capture_default_str();
  c_ex->add_option("--solvers", ex.solvers, "omp,cosamp")
      ->delimiter(',')
      ->check(CLI::IsMember({"omp", "cosamp"}))
      ->capture_default_str();
  c_ex->add_option("--kappa", cfg.policy.kappa, "sampling probability per unit sparsity")->capture_default_str();
  c_ex->add_option("--p-min", cfg.policy.p_min, "sampling probability floor")->capture_default_str();
  c_ex->add_option("--snr-db", ex.snr_db, "measurement SNR (dB)")->capture_default_str();
  c_ex->add_flag("--noiseless", ex.noiseless, "disable measurement noise");
  c_ex->add_flag("--off-grid", ex.off_grid, "tones between DFT bins");
  c_ex->add_option("--k-policy", ex.k_policy, "estimated | truth")
      ->check(CLI::IsMember({"estimated", "truth"}))
      ->capture_default_str();
  c_ex->add_option("--force-probability", ex.force_probability, "fixed sampling probability, <0 = adaptive")
      ->capture_default_str();
  c_ex->add_option("--f-clk", ex.f_clk, "system clock (Hz)")->capture_default_str();
  c_ex->add_option("--sre-mu", cfg.sre_mu, "SRE step, 0 = n/m")->capture_default_str();
  c_ex->add_option("--sre-lambda", cfg.sre_lambda, "SRE relative threshold")->capture_default_str();
  c_ex->add_option("--sre-ema", cfg.sre_ema, "SRE smoothing factor")->capture_default_str();
  c_ex->add_option("--sre-bootstrap", cfg.sre_bootstrap, "initial sparsity estimate")->capture_default_str();
  c_ex->add_option("--cosamp-max-iter", cfg.cosamp_max_iter)->capture_default_str();
  c_ex->add_flag("--cosamp-textbook", ex.textbook_cosamp, "no least-squares refit after pruning");
  c_ex->add_option("--omp-rel-tol", cfg.omp_rel_tol)->capture_default_str();
  c_ex->add_option("--cal-step", cfg.cal_step, "calibration grid (V)")->capture_default_str();
  c_ex->add_option("--cal-samples", cfg.cal_samples, "calibration samples, 0 = closed form")
      ->capture_default_str();
  c_ex->add_flag("--solve-warmup", cfg.solve_warmup, "also run recovery on warm-up frames");
  c_ex->add_option("--jobs", jobs, "parallel trials")->capture_default_str();
  c_ex->add_flag("--dump-frame", ex.dump_frame, "write signal/measurement/trace CSVs for one frame");

  ScalingArgs sc;
  auto* c_sc = app.add_subcommand("scaling", "normalized power/area comparison")->configurable();
  sc.common.add_to(c_sc);
  c_sc->add_option("--entries", sc.entries, "entries CSV (default: bundled table)");
  c_sc->add_option("--reference", sc.reference, "reference design name")->capture_default_str();
  c_sc->add_flag("--inverse", sc.inverse, "back-solve raw values from published factors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (c_ch->parsed()) run_characterize(ch, c_ch);
    if (c_ca->parsed()) run_calibrate(ca, c_ca);
    if (c_ex->parsed()) {
      ex.cfg.jobs = jobs;
      run_experiment_cmd(ex, c_ex);
    }
    if (c_sc->parsed()) run_scaling(sc, c_sc);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
