#pragma once

// Sparsity-rate estimator and the rate -> V_SR control path.

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "aqurate/clockgen.hpp"
#include "aqurate/device.hpp"
#include "aqurate/recovery.hpp"
#include "aqurate/rng.hpp"
#include "aqurate/signals.hpp"

namespace aqurate {

struct SreState {
  Eigen::VectorXcd theta_hat;
  double s_hat = 0.10;
  double ema_alpha = 0.5;
  std::size_t support_size = 0;  // nonzeros in theta_hat after the last update

  static SreState bootstrap(std::size_t n, double s0 = 0.10, double ema_alpha = 0.5);
};

/// One Landweber step from the previous estimate, relative hard threshold
/// at lambda * max|theta|, then an EMA of the resulting support fraction.
SreState sre_update(const SreState& state, const MeasurementSet& y, const MeasurementOperator& A,
                    double mu, double lambda);

struct RatePolicy {
  double kappa = 4.0;
  double p_min = 0.02;
};

double rate_to_probability(double s_hat, const RatePolicy& policy = {});

struct CalibrationPoint {
  double vin = 0.0;
  double probability = 0.0;
};

/// Oscillator transfer curve, nondecreasing in probability.
struct Calibration {
  std::vector<CalibrationPoint> points;

  void validate() const;
};

/// Inverse piecewise-linear lookup. Out-of-range probabilities clamp to the
/// first table entry reaching the nearest achievable endpoint.
double probability_to_vsr(double p, const Calibration& cal);

/// Monte-Carlo transfer curve on a voltage grid, made monotone by running-max
/// clipping. n_samples == 0 uses the closed-form probability instead.
Calibration calibrate(const DeviceParams& dev, double grid_step, std::size_t n_samples, Rng& rng,
                      const ClockConfig& clock = {});

}  // namespace aqurate
