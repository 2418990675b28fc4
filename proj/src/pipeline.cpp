#include "aqurate/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace aqurate {

std::string_view to_string(SolverKind s) {
  return s == SolverKind::Omp ? "omp" : "cosamp";
}

SolverKind parse_solver(std::string_view text) {
  if (text == "omp") return SolverKind::Omp;
  if (text == "cosamp") return SolverKind::Cosamp;
  throw std::invalid_argument("unknown solver: " + std::string(text));
}

std::string_view to_string(KPolicy k) {
  return k == KPolicy::Estimated ? "estimated" : "truth";
}

KPolicy parse_k_policy(std::string_view text) {
  if (text == "estimated") return KPolicy::Estimated;
  if (text == "truth") return KPolicy::GroundTruth;
  throw std::invalid_argument("unknown k policy: " + std::string(text));
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("experiment: " + what);
  };
  require(is_power_of_two(n) && n >= 4, "n must be a power of two >= 4");
  require(frames >= 1, "frames must be >= 1");
  require(warmup < frames, "warmup must be smaller than frames");
  require(trials >= 1, "trials must be >= 1");
  require(!rates.empty(), "at least one sparsity rate is required");
  for (double r : rates) require(r > 0.0 && r < 1.0, "each rate must lie in (0, 1)");
  require(!solvers.empty(), "at least one solver is required");
  require(policy.kappa > 0.0, "kappa must be positive");
  require(policy.p_min >= 0.0 && policy.p_min <= 1.0, "p_min must lie in [0, 1]");
  require(!snr_db || std::isfinite(*snr_db), "snr must be finite");
  require(!force_probability || (*force_probability >= 0.0 && *force_probability <= 1.0),
          "forced probability must lie in [0, 1]");
  require(clock.frame_len == n, "clock frame_len must equal n");
  require(sre_mu >= 0.0, "sre step must be >= 0");
  require(sre_lambda >= 0.0 && sre_lambda <= 1.0, "sre threshold must lie in [0, 1]");
  require(sre_ema > 0.0 && sre_ema <= 1.0, "sre smoothing must lie in (0, 1]");
  require(sre_bootstrap >= 0.0 && sre_bootstrap <= 1.0, "sre bootstrap rate must lie in [0, 1]");
  require(omp_rel_tol >= 0.0, "omp tolerance must be >= 0");
  require(cal_step > 0.0, "calibration step must be positive");
  require(jobs >= 1, "jobs must be >= 1");
  device.validate();
  clock.validate();
}

namespace {

// Stream tags for counter-based seeding.
enum Stream : std::uint64_t { kCalibration = 1, kSignal, kOscInit, kDevice, kNoise };

std::size_t budget_from_rate(double s_hat, std::size_t n) {
  const double pairs = std::ceil(s_hat * static_cast<double>(n) / 2.0 - 1e-9);
  return 2 * static_cast<std::size_t>(std::max(pairs, 1.0));
}

}  // namespace

Calibration experiment_calibration(const ExperimentConfig& cfg) {
  Rng rng = make_rng(cfg.seed, {kCalibration});
  return calibrate(cfg.device, cfg.cal_step, cfg.cal_samples, rng, cfg.clock);
}

FrameOutcome run_frame(const SparseSignal& sig, const SreState& sre, std::size_t frame,
                       const ExperimentConfig& cfg, const Calibration& cal,
                       StochasticOscillator& osc, Rng& device_rng, Rng& noise_rng,
                       bool recover) {
  FrameOutcome out;
  FrameMetrics& fm = out.metrics;
  fm.frame = frame;
  fm.s_hat_used = sre.s_hat;
  fm.probability = cfg.force_probability ? *cfg.force_probability
                                         : rate_to_probability(sre.s_hat, cfg.policy);
  fm.v_sr = probability_to_vsr(fm.probability, cal);

  out.trace = generate_aclk(fm.v_sr, cfg.clock, osc, device_rng, frame);
  out.measurements = cfg.snr_db ? sample_at(sig, out.trace, *cfg.snr_db, noise_rng)
                                : sample_at(sig, out.trace);
  fm.m = out.trace.instants.size();
  const MeasurementOperator A = MeasurementOperator::from_trace(out.trace, sig.n);

  if (fm.m == 0) {
    fm.failed = true;
    for (SolverKind s : cfg.solvers) {
      if (!recover) break;
      SolverOutcome so;
      so.solver = s;
      so.result.theta_hat = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sig.n));
      so.error = 1.0;
      out.solves.push_back(std::move(so));
    }
  } else if (recover) {
    const std::size_t k_raw = cfg.k_policy == KPolicy::GroundTruth
                                  ? sig.support.size()
                                  : budget_from_rate(sre.s_hat, sig.n);
    fm.k = std::min(k_raw, fm.m);
    const double tol = cfg.omp_rel_tol * out.measurements.values.norm();
    for (SolverKind s : cfg.solvers) {
      SolverOutcome so;
      so.solver = s;
      so.result = s == SolverKind::Omp ? omp(out.measurements, A, fm.k, tol)
                                       : cosamp(out.measurements, A, fm.k, cfg.cosamp_max_iter, tol,
                                                                cfg.cosamp_refit);
      so.error = normalized_error(sig.x, reconstruct(so.result));
      out.solves.push_back(std::move(so));
    }
  }

  const double mu = cfg.sre_mu > 0.0 ? cfg.sre_mu
                    : fm.m > 0       ? static_cast<double>(sig.n) / static_cast<double>(fm.m)
                                     : 1.0;
  out.next = sre_update(sre, out.measurements, A, mu, cfg.sre_lambda);
  return out;
}

TrialOutput run_trial(const ExperimentConfig& cfg, const Calibration& cal, std::size_t trial,
                      std::size_t rate_index, bool keep_last_frame) {
  const double rate = cfg.rates.at(rate_index);
  SignalOptions sopts = cfg.signal;
  sopts.on_grid = cfg.on_grid;
  Rng sig_rng = make_rng(cfg.seed, {kSignal, trial, rate_index});
  const SparseSignal sig = generate_sparse_signal(cfg.n, rate, sig_rng, sopts);

  Rng init_rng = make_rng(cfg.seed, {kOscInit, trial, rate_index});
  StochasticOscillator osc(cfg.device, init_rng);
  SreState sre = SreState::bootstrap(cfg.n, cfg.sre_bootstrap, cfg.sre_ema);

  TrialOutput out;
  for (std::size_t f = 0; f < cfg.frames; ++f) {
    Rng device_rng = make_rng(cfg.seed, {kDevice, trial, rate_index, f});
    Rng noise_rng = make_rng(cfg.seed, {kNoise, trial, rate_index, f});
    const bool warm = f < cfg.warmup;
    FrameOutcome fo =
        run_frame(sig, sre, f, cfg, cal, osc, device_rng, noise_rng, !warm || cfg.solve_warmup);
    out.frames.push_back({trial, rate, warm, fo.metrics});
    for (const SolverOutcome& so : fo.solves)
      out.results.push_back({trial, so.solver, rate, f, warm, fo.metrics.m, so.error,
                             so.result.iterations});
    if (keep_last_frame && f + 1 == cfg.frames)
      out.last_frame = FrameDump{sig, fo.trace, fo.measurements};
    sre = std::move(fo.next);
  }
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows,
                                  const std::vector<SolverKind>& solvers,
                                  const std::vector<double>& rates) {
  std::vector<SummaryRow> out;
  for (SolverKind s : solvers) {
    for (double rate : rates) {
      // Per-trial means in first-seen order.
      std::vector<std::size_t> trial_ids;
      std::vector<double> sums;
      std::vector<std::size_t> counts;
      double total = 0.0;
      std::size_t frames = 0;
      for (const ResultRow& r : rows) {
        if (r.solver != s || r.rate != rate || r.warmup) continue;
        total += r.error;
        ++frames;
        auto it = std::find(trial_ids.begin(), trial_ids.end(), r.trial);
        std::size_t idx = static_cast<std::size_t>(it - trial_ids.begin());
        if (it == trial_ids.end()) {
          trial_ids.push_back(r.trial);
          sums.push_back(0.0);
          counts.push_back(0);
        }
        sums[idx] += r.error;
        ++counts[idx];
      }
      SummaryRow row;
      row.solver = s;
      row.rate = rate;
      row.frames = frames;
      row.trials = trial_ids.size();
      row.mean_error = frames ? total / static_cast<double>(frames) : 0.0;
      if (trial_ids.size() > 1) {
        double mean = 0.0;
        for (std::size_t i = 0; i < sums.size(); ++i) mean += sums[i] / static_cast<double>(counts[i]);
        mean /= static_cast<double>(sums.size());
        double ss = 0.0;
        for (std::size_t i = 0; i < sums.size(); ++i) {
          const double d = sums[i] / static_cast<double>(counts[i]) - mean;
          ss += d * d;
        }
        const double t = static_cast<double>(sums.size());
        row.std_error = std::sqrt(ss / (t - 1.0) / t);
      }
      out.push_back(row);
    }
  }
  return out;
}

TrialReport run_experiment(const ExperimentConfig& cfg, bool dump_frame) {
  cfg.validate();
  const Calibration cal = experiment_calibration(cfg);
  const std::size_t tasks = cfg.rates.size() * cfg.trials;
  std::vector<TrialOutput> outputs(tasks);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks) return;
      const std::size_t ri = i / cfg.trials;
      const std::size_t trial = i % cfg.trials;
      try {
        outputs[i] = run_trial(cfg, cal, trial, ri, dump_frame && i == 0);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks);
      }
    }
  };
  const std::size_t n_threads = std::min(cfg.jobs, tasks);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  TrialReport report;
  for (TrialOutput& o : outputs) {
    report.frames.insert(report.frames.end(), o.frames.begin(), o.frames.end());
    report.results.insert(report.results.end(), o.results.begin(), o.results.end());
    if (o.last_frame) report.dump = std::move(o.last_frame);
  }
  report.summary = summarize(report.results, cfg.solvers, cfg.rates);
  return report;
}

}  // namespace aqurate
