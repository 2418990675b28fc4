#include "aqurate/device.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "aqurate/clockgen.hpp"

namespace aqurate {

std::string_view to_string(MzMode mode) {
  switch (mode) {
    case MzMode::UniformResample: return "uniform";
    case MzMode::BinaryTelegraph: return "telegraph";
  }
  return "uniform";
}

MzMode parse_mz_mode(std::string_view text) {
  if (text == "uniform" || text == "UniformResample") return MzMode::UniformResample;
  if (text == "telegraph" || text == "BinaryTelegraph") return MzMode::BinaryTelegraph;
  throw std::invalid_argument("unknown m_z mode: " + std::string(text));
}

void DeviceParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("device: ") + what);
  };
  require(g0 > 0.0, "g0 must be positive");
  require(tmr > 0.0, "tmr must be positive");
  require(vdd > 0.0, "vdd must be positive");
  require(vtn > 0.0 && vtn < 0.5 * vdd, "vtn must lie in (0, vdd/2)");
  require(vth_inv > 0.0 && vth_inv < vdd, "vth_inv must lie in (0, vdd)");
  require(tau_c > 0.0, "tau_c must be positive");
  require(energy_barrier_kt < 40.0, "energy barrier must be below 40 kT");
}

double mtj_conductance(double mz, const DeviceParams& p) {
  if (!(std::abs(mz) <= 1.0)) throw std::domain_error("mtj_conductance: |mz| > 1");
  return p.g0 * (1.0 + mz * p.tmr / (2.0 + p.tmr));
}

double transistor_conductance(double vin, const DeviceParams& p) {
  if (!(vin >= 0.0 && vin <= p.vdd))
    throw std::domain_error("transistor_conductance: vin outside [0, vdd]");
  if (vin <= p.vtn) return 0.0;
  return p.g0 * (vin - p.vtn) / (0.5 * p.vdd - p.vtn);
}

double drain_voltage(double mz, double alpha, const DeviceParams& p) {
  if (!(std::abs(mz) <= 1.0)) throw std::domain_error("drain_voltage: |mz| > 1");
  if (!(alpha >= 0.0)) throw std::domain_error("drain_voltage: alpha < 0");
  const double a = 2.0 + p.tmr;
  return (a + p.tmr * mz) / (a * (1.0 + alpha) + p.tmr * mz);
}

double threshold_magnetization(double vin, const DeviceParams& p) {
  const double v = p.vth_inv / p.vdd;
  const double alpha = transistor_conductance(vin, p) / p.g0;
  return (2.0 + p.tmr) * (v * (1.0 + alpha) - 1.0) / (p.tmr * (1.0 - v));
}

double output_probability(double vin, const DeviceParams& p) {
  if (!(vin >= 0.0 && vin <= p.vdd))
    throw std::domain_error("output_probability: vin outside [0, vdd]");
  if (p.vth_inv >= p.vdd) return 0.0;
  const double m_star = threshold_magnetization(vin, p);
  return std::clamp(0.5 * (m_star + 1.0), 0.0, 1.0);
}

namespace {

double exponential(Rng& rng, double mean) {
  // 1 - u lies in (0, 1], so the log is finite.
  return -mean * std::log(1.0 - uniform01(rng));
}

}  // namespace

DeviceState initial_state(const DeviceParams& p, Rng& rng) {
  DeviceState s;
  if (p.mz_mode == MzMode::UniformResample) {
    s.mz = uniform(rng, -1.0, 1.0);
    s.next_update = p.tau_c;
  } else {
    s.mz = uniform01(rng) < 0.5 ? -1.0 : 1.0;
    s.next_update = exponential(rng, p.tau_c);
  }
  return s;
}

StepResult step(const DeviceState& state, double vin, double dt, const DeviceParams& p,
                Rng& rng) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const double alpha = transistor_conductance(vin, p) / p.g0;

  StepResult out{state, false};
  DeviceState& s = out.state;
  s.time = state.time + dt;
  if (p.mz_mode == MzMode::UniformResample) {
    if (s.time >= s.next_update) {
      // Only the latest redraw is observable at the sampling instant.
      s.mz = uniform(rng, -1.0, 1.0);
      s.next_update = (std::floor(s.time / p.tau_c) + 1.0) * p.tau_c;
    }
  } else {
    while (s.next_update <= s.time) {
      s.mz = -s.mz;
      s.next_update += exponential(rng, p.tau_c);
    }
  }
  const double v_drain = drain_voltage(s.mz, alpha, p) * p.vdd;
  out.bit = v_drain < p.vth_inv;
  return out;
}

StochasticOscillator::StochasticOscillator(const DeviceParams& params, Rng& rng)
    : params_(params), state_(initial_state(params, rng)) {
  params_.validate();
}

bool StochasticOscillator::step(double vin, double dt, Rng& rng) {
  StepResult r = aqurate::step(state_, vin, dt, params_, rng);
  state_ = r.state;
  return r.bit;
}

std::vector<double> voltage_grid(double vdd, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("voltage_grid: step must be positive");
  const auto intervals = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(vdd / step)));
  std::vector<double> grid;
  grid.reserve(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    // Snap to the picovolt so 3 * 0.8 / 4 prints as 0.6.
    const double v = vdd * static_cast<double>(i) / static_cast<double>(intervals);
    grid.push_back(std::min(vdd, std::round(v * 1e12) / 1e12));
  }
  return grid;
}

Characterization characterize(std::span<const double> vin_grid, std::size_t n_samples,
                              const ClockConfig& clock, const DeviceParams& p, Rng& rng) {
  if (n_samples == 0) throw std::invalid_argument("characterize: n_samples must be positive");
  clock.validate();
  StochasticOscillator osc(p, rng);
  Characterization out;
  out.points.reserve(vin_grid.size());
  out.bits.reserve(vin_grid.size());
  const double dt = clock.period();
  for (double vin : vin_grid) {
    std::vector<unsigned char> bits(n_samples);
    std::size_t ones = 0;
    for (auto& b : bits) {
      b = osc.step(vin, dt, rng) ? 1 : 0;
      ones += b;
    }
    out.points.push_back({vin, static_cast<double>(ones) / static_cast<double>(n_samples),
                          n_samples});
    out.bits.push_back(std::move(bits));
  }
  return out;
}

std::vector<CharacterizationPoint> characterize_analytic(std::span<const double> vin_grid,
                                                         const DeviceParams& p) {
  std::vector<CharacterizationPoint> out;
  out.reserve(vin_grid.size());
  for (double vin : vin_grid) out.push_back({vin, output_probability(vin, p), 0});
  return out;
}

}  // namespace aqurate
