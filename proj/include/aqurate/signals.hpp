#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "aqurate/clockgen.hpp"
#include "aqurate/rng.hpp"
#include "aqurate/transform.hpp"

namespace aqurate {

/// A real frame whose orthonormal-DFT spectrum is sparse.
struct SparseSignal {
  std::size_t n = 0;
  Eigen::VectorXd x;             // time domain
  Eigen::VectorXcd theta_true;   // spectrum, conjugate symmetric
  std::vector<std::size_t> support;  // sorted, includes mirrors
  double s_true = 0.0;           // |support| / n
};

struct SignalOptions {
  double amp_lo = 0.5;
  double amp_hi = 1.0;
  // Off-grid tones sit up to half a bin away from their nominal bin and leak.
  bool on_grid = true;
};

/// Number of nonzero coefficients for a rate s: s*n rounded up to an even count.
std::size_t support_size_for_rate(std::size_t n, double s);

SparseSignal generate_sparse_signal(std::size_t n, double s, Rng& rng,
                                    const SignalOptions& opts = {});

struct MeasurementSet {
  std::vector<std::size_t> instants;  // sorted cycle indices
  Eigen::VectorXd values;
  std::size_t n = 0;
};

MeasurementSet sample_at(const SparseSignal& sig, const AClkTrace& trace);

/// Adds white Gaussian noise at snr_db relative to the frame's mean power.
MeasurementSet sample_at(const SparseSignal& sig, const AClkTrace& trace, double snr_db,
                         Rng& rng);

}  // namespace aqurate
