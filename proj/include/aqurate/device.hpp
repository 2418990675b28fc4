#pragma once

// Behavioral model of the low-barrier MTJ / NMOS / inverter stochastic
// oscillator. The MTJ sits between VDD and the drain node, the NMOS pulls the
// drain to ground, and an inverter turns the drain fluctuation into a
// rail-to-rail random bitstream whose ones-density is set by the gate voltage.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "aqurate/rng.hpp"

namespace aqurate {

struct ClockConfig;

enum class MzMode {
  UniformResample,  ///< m_z redrawn uniformly on [-1, 1] every tau_c
  BinaryTelegraph,  ///< m_z flips between -1 and +1, exponential dwell (mean tau_c)
};

std::string_view to_string(MzMode mode);
MzMode parse_mz_mode(std::string_view text);

struct DeviceParams {
  double g0 = 1e-5;        // average MTJ conductance (G_P + G_AP) / 2, siemens
  double tmr = 1.0;        // tunneling magnetoresistance ratio
  double vdd = 0.8;        // supply, volts
  double vtn = 0.2;        // NMOS cutoff for the behavioral G_T model, volts
  double vth_inv = 0.4;    // inverter switching threshold, volts
  MzMode mz_mode = MzMode::UniformResample;
  double tau_c = 100e-12;  // m_z update interval / mean dwell, seconds
  double energy_barrier_kt = 1.0;  // metadata only; must stay well below 40 kT

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  double g_parallel() const { return 2.0 * g0 * (1.0 + tmr) / (2.0 + tmr); }
  double g_antiparallel() const { return 2.0 * g0 / (2.0 + tmr); }
};

struct DeviceState {
  double mz = 0.0;
  double time = 0.0;        // seconds
  double next_update = 0.0; // time of the next m_z event
};

struct StepResult {
  DeviceState state;
  bool bit = false;
};

/// G_MTJ = G_0 [1 + m_z TMR / (2 + TMR)]. Throws std::domain_error if |mz| > 1.
double mtj_conductance(double mz, const DeviceParams& p);

/// Piecewise-linear NMOS conductance, zero below vtn and pinned to g0 at
/// vin = vdd / 2 (alpha = 1 at half supply).
double transistor_conductance(double vin, const DeviceParams& p);

/// Drain voltage as a fraction of VDD for a given magnetization and
/// alpha = G_T / G_0.
double drain_voltage(double mz, double alpha, const DeviceParams& p);

/// Closed-form P(bit = 1) for the UniformResample process.
double output_probability(double vin, const DeviceParams& p);

/// Magnetization below which the inverter output is high (unclamped).
double threshold_magnetization(double vin, const DeviceParams& p);

DeviceState initial_state(const DeviceParams& p, Rng& rng);

/// Advances the magnetization process by dt, then evaluates the inverter.
StepResult step(const DeviceState& state, double vin, double dt, const DeviceParams& p, Rng& rng);

/// Stateful wrapper for sequential use.
class StochasticOscillator {
 public:
  StochasticOscillator(const DeviceParams& params, Rng& rng);

  bool step(double vin, double dt, Rng& rng);

  const DeviceParams& params() const noexcept { return params_; }
  const DeviceState& state() const noexcept { return state_; }

 private:
  DeviceParams params_;
  DeviceState state_;
};

/// Evenly spaced input voltages from 0 to vdd inclusive.
std::vector<double> voltage_grid(double vdd, double step);

struct CharacterizationPoint {
  double vin = 0.0;
  double probability = 0.0;
  std::size_t n_samples = 0;
};

struct Characterization {
  std::vector<CharacterizationPoint> points;
  /// Raw D-FF output per staircase step, in sweep order.
  std::vector<std::vector<unsigned char>> bits;
};

/// Staircase sweep: each voltage is held for n_samples system-clock cycles
/// and the inverter output is latched once per cycle. The oscillator state
/// carries over between steps.
Characterization characterize(std::span<const double> vin_grid, std::size_t n_samples,
                              const ClockConfig& clock, const DeviceParams& p, Rng& rng);

/// Oracle counterpart of characterize(): output_probability on the grid.
std::vector<CharacterizationPoint> characterize_analytic(std::span<const double> vin_grid,
                                                         const DeviceParams& p);

}  // namespace aqurate
