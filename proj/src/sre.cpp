#include "aqurate/sre.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aqurate {

SreState SreState::bootstrap(std::size_t n, double s0, double ema_alpha) {
  if (!(s0 >= 0.0 && s0 <= 1.0)) throw std::invalid_argument("sre: bootstrap rate outside [0, 1]");
  if (!(ema_alpha > 0.0 && ema_alpha <= 1.0))
    throw std::invalid_argument("sre: ema_alpha must lie in (0, 1]");
  SreState s;
  s.theta_hat = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  s.s_hat = s0;
  s.ema_alpha = ema_alpha;
  return s;
}

SreState sre_update(const SreState& state, const MeasurementSet& y, const MeasurementOperator& A,
                    double mu, double lambda) {
  const auto n = static_cast<std::size_t>(state.theta_hat.size());
  if (A.cols() != n) throw std::invalid_argument("sre_update: operator width does not match estimate");
  if (static_cast<std::size_t>(y.values.size()) != A.rows())
    throw std::invalid_argument("sre_update: measurement count does not match operator rows");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("sre_update: lambda outside [0, 1]");

  SreState next = state;
  if (A.rows() > 0) {
    const Eigen::VectorXcd residual = y.values.cast<cplx>() - A.apply(state.theta_hat);
    next.theta_hat = state.theta_hat + mu * A.adjoint(residual);
  }

  const double peak = next.theta_hat.cwiseAbs().maxCoeff();
  const double cut = lambda * peak;
  std::size_t kept = 0;
  for (Eigen::Index i = 0; i < next.theta_hat.size(); ++i) {
    const double mag = std::abs(next.theta_hat[i]);
    if (mag > 0.0 && mag >= cut) {
      ++kept;
    } else {
      next.theta_hat[i] = 0.0;
    }
  }
  next.support_size = kept;
  const double rate = n > 0 ? static_cast<double>(kept) / static_cast<double>(n) : 0.0;
  next.s_hat = std::clamp((1.0 - state.ema_alpha) * state.s_hat + state.ema_alpha * rate, 0.0, 1.0);
  return next;
}

double rate_to_probability(double s_hat, const RatePolicy& policy) {
  if (!(s_hat >= 0.0 && s_hat <= 1.0)) throw std::invalid_argument("rate_to_probability: rate outside [0, 1]");
  if (!(policy.kappa > 0.0)) throw std::invalid_argument("rate_to_probability: kappa must be positive");
  return std::clamp(policy.kappa * s_hat, policy.p_min, 1.0);
}

void Calibration::validate() const {
  if (points.empty()) throw std::invalid_argument("calibration: empty table");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].vin > points[i - 1].vin))
      throw std::invalid_argument("calibration: voltages must be strictly increasing");
    if (points[i].probability < points[i - 1].probability)
      throw std::invalid_argument("calibration: probabilities must be nondecreasing");
  }
}

double probability_to_vsr(double p, const Calibration& cal) {
  cal.validate();
  const auto& pts = cal.points;
  auto it = std::find_if(pts.begin(), pts.end(),
                         [p](const CalibrationPoint& c) { return c.probability >= p; });
  if (it == pts.end()) {
    // Unreachable probability: first voltage attaining the table maximum.
    const double top = pts.back().probability;
    it = std::find_if(pts.begin(), pts.end(),
                      [top](const CalibrationPoint& c) { return c.probability >= top; });
    return it->vin;
  }
  if (it == pts.begin()) return it->vin;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (p - lo.probability) / (hi.probability - lo.probability);
  return lo.vin + t * (hi.vin - lo.vin);
}

Calibration calibrate(const DeviceParams& dev, double grid_step, std::size_t n_samples, Rng& rng,
                      const ClockConfig& clock) {
  if (!(grid_step > 0.0)) throw std::invalid_argument("calibrate: grid_step must be positive");
  dev.validate();
  const std::vector<double> grid = voltage_grid(dev.vdd, grid_step);
  Calibration cal;
  cal.points.reserve(grid.size());
  if (n_samples == 0) {
    for (double v : grid) cal.points.push_back({v, output_probability(v, dev)});
  } else {
    const Characterization ch = characterize(grid, n_samples, clock, dev, rng);
    for (const auto& pt : ch.points) cal.points.push_back({pt.vin, pt.probability});
  }
  for (std::size_t i = 1; i < cal.points.size(); ++i)
    cal.points[i].probability = std::max(cal.points[i].probability, cal.points[i - 1].probability);
  return cal;
}

}  // namespace aqurate
