#include "aqurate/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace aqurate {

std::size_t support_size_for_rate(std::size_t n, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("sparsity rate must lie in (0, 1]");
  const double target = s * static_cast<double>(n);
  // Tolerate representation error in products such as 0.125 * 16.
  const double pairs = std::ceil(target / 2.0 - 1e-9);
  return 2 * static_cast<std::size_t>(std::max(pairs, 1.0));
}

SparseSignal generate_sparse_signal(std::size_t n, double s, Rng& rng, const SignalOptions& opts) {
  if (!is_power_of_two(n) || n < 4)
    throw std::invalid_argument("generate_sparse_signal: n must be a power of two >= 4");
  if (!(opts.amp_lo > 0.0 && opts.amp_hi >= opts.amp_lo))
    throw std::invalid_argument("generate_sparse_signal: invalid amplitude range");
  const std::size_t k = support_size_for_rate(n, s);
  const std::size_t pairs = k / 2;
  // DC and Nyquist have no distinct conjugate partner.
  const std::size_t available = n / 2 - 1;
  if (pairs > available)
    throw std::invalid_argument("generate_sparse_signal: rate " + std::to_string(s) +
                                " needs " + std::to_string(pairs) + " tone pairs, only " +
                                std::to_string(available) + " available");

  // Partial Fisher-Yates over bins 1 .. n/2 - 1.
  std::vector<std::size_t> bins(available);
  std::iota(bins.begin(), bins.end(), std::size_t{1});
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(available - i));
    std::swap(bins[i], bins[j]);
  }
  bins.resize(pairs);
  std::sort(bins.begin(), bins.end());

  SparseSignal sig;
  sig.n = n;
  sig.theta_true = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  if (opts.on_grid) {
    for (std::size_t b : bins) {
      const double amp = uniform(rng, opts.amp_lo, opts.amp_hi);
      const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
      const cplx c = std::polar(amp, phase);
      sig.theta_true[static_cast<Eigen::Index>(b)] = c;
      sig.theta_true[static_cast<Eigen::Index>(n - b)] = std::conj(c);
    }
    sig.x = real_idft(sig.theta_true);
  } else {
    sig.x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t b : bins) {
      const double amp = uniform(rng, opts.amp_lo, opts.amp_hi);
      const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
      const double freq = static_cast<double>(b) + uniform(rng, -0.5, 0.5);
      for (std::size_t t = 0; t < n; ++t) {
        const double arg = 2.0 * std::numbers::pi * freq * static_cast<double>(t) /
                           static_cast<double>(n) + phase;
        sig.x[static_cast<Eigen::Index>(t)] += 2.0 * amp / sqrt_n * std::cos(arg);
      }
    }
    sig.theta_true = unitary_dft(sig.x.cast<cplx>());
  }

  for (std::size_t b : bins) {
    sig.support.push_back(b);
    sig.support.push_back(n - b);
  }
  std::sort(sig.support.begin(), sig.support.end());
  sig.s_true = static_cast<double>(sig.support.size()) / static_cast<double>(n);
  return sig;
}

MeasurementSet sample_at(const SparseSignal& sig, const AClkTrace& trace) {
  if (trace.frame_len != 0 && trace.frame_len != sig.n)
    throw std::invalid_argument("sample_at: trace frame length does not match signal");
  MeasurementSet y;
  y.n = sig.n;
  y.instants = trace.instants;
  y.values.resize(static_cast<Eigen::Index>(trace.instants.size()));
  for (std::size_t i = 0; i < trace.instants.size(); ++i) {
    const std::size_t t = trace.instants[i];
    if (t >= sig.n) throw std::out_of_range("sample_at: instant " + std::to_string(t) + " out of range");
    y.values[static_cast<Eigen::Index>(i)] = sig.x[static_cast<Eigen::Index>(t)];
  }
  return y;
}

MeasurementSet sample_at(const SparseSignal& sig, const AClkTrace& trace, double snr_db, Rng& rng) {
  MeasurementSet y = sample_at(sig, trace);
  const double power = sig.x.squaredNorm() / static_cast<double>(sig.n);
  const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  std::normal_distribution<double> noise(0.0, sigma);
  for (Eigen::Index i = 0; i < y.values.size(); ++i) y.values[i] += noise(rng);
  return y;
}

}  // namespace aqurate
