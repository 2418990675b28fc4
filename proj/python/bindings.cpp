#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aqurate/clockgen.hpp"
#include "aqurate/device.hpp"
#include "aqurate/pipeline.hpp"
#include "aqurate/recovery.hpp"
#include "aqurate/scaling.hpp"
#include "aqurate/signals.hpp"
#include "aqurate/sre.hpp"

namespace py = pybind11;
using namespace aqurate;

namespace {

py::dict result_dict(const RecoveryResult& r) {
  py::dict d;
  d["theta_hat"] = r.theta_hat;
  d["support"] = r.support;
  d["residual_norm"] = r.residual_norm;
  d["iterations"] = r.iterations;
  d["residual_history"] = r.residual_history;
  d["x_hat"] = reconstruct(r);
  return d;
}

MeasurementOperator op_for(const MeasurementSet& y) { return MeasurementOperator(y.instants, y.n); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = AQURATE_VERSION;

  py::class_<DeviceParams>(m, "DeviceParams")
      .def(py::init<>())
      .def_readwrite("g0", &DeviceParams::g0)
      .def_readwrite("tmr", &DeviceParams::tmr)
      .def_readwrite("vdd", &DeviceParams::vdd)
      .def_readwrite("vtn", &DeviceParams::vtn)
      .def_readwrite("vth_inv", &DeviceParams::vth_inv)
      .def_readwrite("tau_c", &DeviceParams::tau_c)
      .def_readwrite("energy_barrier_kt", &DeviceParams::energy_barrier_kt)
      .def_property(
          "mz_mode", [](const DeviceParams& p) { return std::string(to_string(p.mz_mode)); },
          [](DeviceParams& p, const std::string& s) { p.mz_mode = parse_mz_mode(s); })
      .def("validate", &DeviceParams::validate)
      .def("g_parallel", &DeviceParams::g_parallel)
      .def("g_antiparallel", &DeviceParams::g_antiparallel);

  py::class_<ClockConfig>(m, "ClockConfig")
      .def(py::init<>())
      .def_readwrite("f_clk", &ClockConfig::f_clk)
      .def_readwrite("frame_len", &ClockConfig::frame_len);

  py::class_<AClkTrace>(m, "AClkTrace")
      .def(py::init<>())
      .def_readwrite("instants", &AClkTrace::instants)
      .def_readwrite("frame_id", &AClkTrace::frame_id)
      .def_readwrite("frame_len", &AClkTrace::frame_len);

  py::class_<SparseSignal>(m, "SparseSignal")
      .def_readonly("n", &SparseSignal::n)
      .def_readonly("x", &SparseSignal::x)
      .def_readonly("theta_true", &SparseSignal::theta_true)
      .def_readonly("support", &SparseSignal::support)
      .def_readonly("s_true", &SparseSignal::s_true);

  py::class_<MeasurementSet>(m, "MeasurementSet")
      .def(py::init<>())
      .def(py::init([](std::vector<std::size_t> instants, Eigen::VectorXd values, std::size_t n) {
             return MeasurementSet{std::move(instants), std::move(values), n};
           }),
           py::arg("instants"), py::arg("values"), py::arg("n"))
      .def_readwrite("instants", &MeasurementSet::instants)
      .def_readwrite("values", &MeasurementSet::values)
      .def_readwrite("n", &MeasurementSet::n);

  m.def("mtj_conductance", &mtj_conductance, py::arg("mz"), py::arg("params") = DeviceParams{});
  m.def("transistor_conductance", &transistor_conductance, py::arg("vin"),
        py::arg("params") = DeviceParams{});
  m.def("drain_voltage", &drain_voltage, py::arg("mz"), py::arg("alpha"),
        py::arg("params") = DeviceParams{});
  m.def("output_probability", &output_probability, py::arg("vin"),
        py::arg("params") = DeviceParams{});

  m.def(
      "characterize",
      [](std::vector<double> grid, std::size_t n_samples, std::uint64_t seed, const DeviceParams& p,
         const ClockConfig& clock) {
        Rng rng(seed);
        std::vector<std::pair<double, double>> out;
        for (const auto& pt : characterize(grid, n_samples, clock, p, rng).points)
          out.emplace_back(pt.vin, pt.probability);
        return out;
      },
      py::arg("grid"), py::arg("n_samples"), py::arg("seed") = 1, py::arg("params") = DeviceParams{},
      py::arg("clock") = ClockConfig{});
  m.def(
      "characterize_analytic",
      [](std::vector<double> grid, const DeviceParams& p) {
        std::vector<std::pair<double, double>> out;
        for (const auto& pt : characterize_analytic(grid, p)) out.emplace_back(pt.vin, pt.probability);
        return out;
      },
      py::arg("grid"), py::arg("params") = DeviceParams{});

  m.def(
      "generate_aclk",
      [](double v_sr, std::uint64_t seed, const ClockConfig& clock, const DeviceParams& p) {
        Rng rng(seed);
        return generate_aclk(v_sr, clock, p, rng);
      },
      py::arg("v_sr"), py::arg("seed") = 1, py::arg("clock") = ClockConfig{},
      py::arg("params") = DeviceParams{});

  m.def("support_size_for_rate", &support_size_for_rate, py::arg("n"), py::arg("s"));
  m.def(
      "generate_sparse_signal",
      [](std::size_t n, double s, std::uint64_t seed, bool on_grid) {
        Rng rng(seed);
        SignalOptions opts;
        opts.on_grid = on_grid;
        return generate_sparse_signal(n, s, rng, opts);
      },
      py::arg("n"), py::arg("s"), py::arg("seed") = 1, py::arg("on_grid") = true);
  m.def(
      "sample_at",
      [](const SparseSignal& sig, const AClkTrace& trace, std::optional<double> snr_db,
         std::uint64_t seed) {
        if (!snr_db) return sample_at(sig, trace);
        Rng rng(seed);
        return sample_at(sig, trace, *snr_db, rng);
      },
      py::arg("signal"), py::arg("trace"), py::arg("snr_db") = py::none(), py::arg("seed") = 1);

  m.def(
      "omp",
      [](const MeasurementSet& y, std::size_t k, double tol) {
        return result_dict(omp(y, op_for(y), k, tol));
      },
      py::arg("y"), py::arg("k"), py::arg("tol") = 0.0);
  m.def(
      "cosamp",
      [](const MeasurementSet& y, std::size_t k, std::size_t max_iter, double tol, bool refit) {
        return result_dict(cosamp(y, op_for(y), k, max_iter, tol, refit));
      },
      py::arg("y"), py::arg("k"), py::arg("max_iter") = 50, py::arg("tol") = 0.0,
      py::arg("refit") = true);
  m.def("normalized_error", &normalized_error, py::arg("x"), py::arg("x_hat"));

  m.def(
      "rate_to_probability",
      [](double s_hat, double kappa, double p_min) { return rate_to_probability(s_hat, {kappa, p_min}); },
      py::arg("s_hat"), py::arg("kappa") = 4.0, py::arg("p_min") = 0.02);
  m.def(
      "calibrate",
      [](double grid_step, std::size_t n_samples, std::uint64_t seed, const DeviceParams& p) {
        Rng rng(seed);
        std::vector<std::pair<double, double>> out;
        for (const auto& pt : calibrate(p, grid_step, n_samples, rng).points)
          out.emplace_back(pt.vin, pt.probability);
        return out;
      },
      py::arg("grid_step") = 0.005, py::arg("n_samples") = 0, py::arg("seed") = 1,
      py::arg("params") = DeviceParams{});
  m.def(
      "probability_to_vsr",
      [](double p, const std::vector<std::pair<double, double>>& table) {
        Calibration cal;
        for (const auto& [v, q] : table) cal.points.push_back({v, q});
        return probability_to_vsr(p, cal);
      },
      py::arg("p"), py::arg("table"));

  m.def("transistor_count", [] { return transistor_count(AqrNetlist::standard()); });
  m.def(
      "power_norm",
      [](double p_x, double v_x, double p_ref, double v_ref) {
        return power_norm({"x", 1.0, v_x, p_x, std::nullopt, {}, {}},
                          {"ref", 1.0, v_ref, p_ref, std::nullopt, {}, {}});
      },
      py::arg("power_x"), py::arg("v_x"), py::arg("power_ref"), py::arg("v_ref"));
  m.def(
      "area_norm",
      [](double a_x, double node_x, double a_ref, double node_ref) {
        return area_norm({"x", node_x, 1.0, std::nullopt, a_x, {}, {}},
                         {"ref", node_ref, 1.0, std::nullopt, a_ref, {}, {}});
      },
      py::arg("area_x"), py::arg("node_x"), py::arg("area_ref"), py::arg("node_ref"));
  m.def("bundled_entries", [] {
    py::list out;
    for (const auto& e : bundled_entries()) {
      py::dict d;
      d["name"] = e.name;
      d["node_nm"] = e.node_nm;
      d["v_nominal"] = e.v_nominal;
      d["power_watts"] = e.power_watts;
      d["area"] = e.area;
      d["power_factor"] = e.power_factor;
      d["area_factor"] = e.area_factor;
      out.append(d);
    }
    return out;
  });
  m.def(
      "scaling_report",
      [](bool inverse) {
        py::list out;
        for (const auto& r : table_report(bundled_entries(), aqr_reference(),
                                          inverse ? ReportMode::Inverse : ReportMode::Forward)) {
          py::dict d;
          d["name"] = r.name;
          d["node_nm"] = r.node_nm;
          d["v_nominal"] = r.v_nominal;
          d["power_norm"] = r.power_norm;
          d["area_norm"] = r.area_norm;
          d["power_watts"] = r.power_watts;
          d["area"] = r.area;
          d["note"] = r.note;
          out.append(d);
        }
        return out;
      },
      py::arg("inverse") = false);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_property(
          "n", [](const ExperimentConfig& c) { return c.n; },
          [](ExperimentConfig& c, std::size_t n) {
            c.n = n;
            c.clock.frame_len = n;
          })
      .def_readwrite("frames", &ExperimentConfig::frames)
      .def_readwrite("warmup", &ExperimentConfig::warmup)
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("rates", &ExperimentConfig::rates)
      .def_property(
          "solvers",
          [](const ExperimentConfig& c) {
            std::vector<std::string> s;
            for (auto k : c.solvers) s.emplace_back(to_string(k));
            return s;
          },
          [](ExperimentConfig& c, const std::vector<std::string>& names) {
            c.solvers.clear();
            for (const auto& n : names) c.solvers.push_back(parse_solver(n));
          })
      .def_property(
          "kappa", [](const ExperimentConfig& c) { return c.policy.kappa; },
          [](ExperimentConfig& c, double k) { c.policy.kappa = k; })
      .def_property(
          "p_min", [](const ExperimentConfig& c) { return c.policy.p_min; },
          [](ExperimentConfig& c, double p) { c.policy.p_min = p; })
      .def_readwrite("snr_db", &ExperimentConfig::snr_db)
      .def_property(
          "on_grid", [](const ExperimentConfig& c) { return c.signal.on_grid; },
          [](ExperimentConfig& c, bool g) { c.signal.on_grid = c.on_grid = g; })
      .def_property(
          "k_policy", [](const ExperimentConfig& c) { return std::string(to_string(c.k_policy)); },
          [](ExperimentConfig& c, const std::string& s) { c.k_policy = parse_k_policy(s); })
      .def_readwrite("force_probability", &ExperimentConfig::force_probability)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("device", &ExperimentConfig::device)
      .def_readwrite("jobs", &ExperimentConfig::jobs)
      .def("validate", &ExperimentConfig::validate);

  m.def(
      "run_experiment",
      [](const ExperimentConfig& cfg) {
        TrialReport r;
        {
          py::gil_scoped_release release;
          r = run_experiment(cfg);
        }
        py::list results, summary;
        for (const auto& row : r.results) {
          py::dict d;
          d["trial"] = row.trial;
          d["algorithm"] = std::string(to_string(row.solver));
          d["sparsity_rate"] = row.rate;
          d["frame"] = row.frame;
          d["warmup"] = row.warmup;
          d["m"] = row.m;
          d["normalized_error"] = row.error;
          d["iterations"] = row.iterations;
          results.append(d);
        }
        for (const auto& s : r.summary) {
          py::dict d;
          d["algorithm"] = std::string(to_string(s.solver));
          d["sparsity_rate"] = s.rate;
          d["mean_normalized_error"] = s.mean_error;
          d["std_error"] = s.std_error;
          d["frames"] = s.frames;
          d["trials"] = s.trials;
          summary.append(d);
        }
        py::dict out;
        out["results"] = results;
        out["summary"] = summary;
        return out;
      },
      py::arg("config"));
}
