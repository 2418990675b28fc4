#pragma once

// Closed-loop acquisition: SRE state -> V_SR -> A-Clk -> samples -> recovery
// -> SRE update, repeated frame by frame and across independent trials.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aqurate/clockgen.hpp"
#include "aqurate/device.hpp"
#include "aqurate/recovery.hpp"
#include "aqurate/signals.hpp"
#include "aqurate/sre.hpp"

namespace aqurate {

enum class SolverKind { Omp, Cosamp };
std::string_view to_string(SolverKind s);
SolverKind parse_solver(std::string_view text);

enum class KPolicy {
  Estimated,    ///< k from the SRE's running sparsity estimate
  GroundTruth,  ///< k = true support size
};
std::string_view to_string(KPolicy k);
KPolicy parse_k_policy(std::string_view text);

struct ExperimentConfig {
  std::size_t n = 1024;
  std::size_t frames = 10;
  std::size_t warmup = 2;
  std::size_t trials = 200;
  std::vector<double> rates{0.05, 0.10, 0.15};
  std::vector<SolverKind> solvers{SolverKind::Omp, SolverKind::Cosamp};
  RatePolicy policy{};
  std::optional<double> snr_db = 25.0;
  bool on_grid = true;
  SignalOptions signal{};
  KPolicy k_policy = KPolicy::Estimated;
  // Bypasses the SRE when set: every frame samples with this probability.
  std::optional<double> force_probability;
  std::uint64_t seed = 1;
  DeviceParams device{};
  ClockConfig clock{};
  // SRE step; 0 selects the normalized step n / m.
  double sre_mu = 0.0;
  double sre_lambda = 0.1;
  double sre_ema = 0.5;
  double sre_bootstrap = 0.10;
  std::size_t cosamp_max_iter = 50;
  bool cosamp_refit = true;
  double omp_rel_tol = 1e-6;  // OMP stops at ||r|| <= omp_rel_tol * ||y||
  double cal_step = 0.005;    // V_SR calibration grid, volts
  std::size_t cal_samples = 0;  // 0: closed-form calibration
  std::size_t jobs = 1;
  // Warm-up frames only drive the SRE unless this is set.
  bool solve_warmup = false;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

struct FrameMetrics {
  std::size_t frame = 0;
  double s_hat_used = 0.0;   // SRE estimate after the previous frame
  double probability = 0.0;  // target sampling probability
  double v_sr = 0.0;
  std::size_t m = 0;
  std::size_t k = 0;
  bool failed = false;       // empty A-Clk trace
};

struct SolverOutcome {
  SolverKind solver = SolverKind::Omp;
  RecoveryResult result;
  double error = 1.0;
};

struct FrameOutcome {
  AClkTrace trace;
  MeasurementSet measurements;
  std::vector<SolverOutcome> solves;
  SreState next;
  FrameMetrics metrics;
};

/// Calibration used to turn probabilities into V_SR for a config.
Calibration experiment_calibration(const ExperimentConfig& cfg);

/// Executes the acquisition loop once. `device_rng` drives the oscillator,
/// `noise_rng` the additive measurement noise. With `recover` false the
/// solvers are skipped and only the SRE advances.
FrameOutcome run_frame(const SparseSignal& sig, const SreState& sre, std::size_t frame,
                       const ExperimentConfig& cfg, const Calibration& cal,
                       StochasticOscillator& osc, Rng& device_rng, Rng& noise_rng,
                       bool recover = true);

struct FrameRow {
  std::size_t trial = 0;
  double rate = 0.0;
  bool warmup = false;
  FrameMetrics metrics;
};

struct ResultRow {
  std::size_t trial = 0;
  SolverKind solver = SolverKind::Omp;
  double rate = 0.0;
  std::size_t frame = 0;
  bool warmup = false;
  std::size_t m = 0;
  double error = 1.0;
  std::size_t iterations = 0;
};

struct SummaryRow {
  SolverKind solver = SolverKind::Omp;
  double rate = 0.0;
  double mean_error = 0.0;
  double std_error = 0.0;   // across per-trial means
  std::size_t frames = 0;   // steady-state frames aggregated
  std::size_t trials = 0;
};

/// Snapshot of one frame for signal-vs-samples plots.
struct FrameDump {
  SparseSignal signal;
  AClkTrace trace;
  MeasurementSet measurements;
};

struct TrialReport {
  std::vector<FrameRow> frames;
  std::vector<ResultRow> results;
  std::vector<SummaryRow> summary;
  std::optional<FrameDump> dump;
};

/// One closed loop (trial, rate) over cfg.frames frames.
struct TrialOutput {
  std::vector<FrameRow> frames;
  std::vector<ResultRow> results;
  std::optional<FrameDump> last_frame;
};
TrialOutput run_trial(const ExperimentConfig& cfg, const Calibration& cal, std::size_t trial,
                      std::size_t rate_index, bool keep_last_frame = false);

/// Runs trials x rates closed loops (in parallel when cfg.jobs > 1); rows are
/// ordered by (rate, trial, frame, solver) regardless of scheduling.
TrialReport run_experiment(const ExperimentConfig& cfg, bool dump_frame = false);

/// Mean normalized error per (solver, rate) over steady-state rows.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows,
                                  const std::vector<SolverKind>& solvers,
                                  const std::vector<double>& rates);

}  // namespace aqurate
