#pragma once

// Greedy sparse recovery over a partial orthonormal Fourier operator.
//
// Both solvers treat conjugate bins (k, n-k) as one group so real frames stay
// real: a group is selected, kept or pruned as a unit and occupies as many
// slots of the sparsity budget as it has distinct bins.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "aqurate/clockgen.hpp"
#include "aqurate/signals.hpp"
#include "aqurate/transform.hpp"

namespace aqurate {

/// Rows of the unitary synthesis matrix selected at the sample instants.
/// Never materializes the m x n matrix unless asked to.
class MeasurementOperator {
 public:
  MeasurementOperator(std::vector<std::size_t> instants, std::size_t n);

  static MeasurementOperator from_trace(const AClkTrace& trace, std::size_t n);

  std::size_t rows() const noexcept { return instants_.size(); }
  std::size_t cols() const noexcept { return n_; }
  const std::vector<std::size_t>& instants() const noexcept { return instants_; }

  /// Entry (row r, column k) of A.
  cplx entry(std::size_t r, std::size_t k) const;

  /// theta (length n) -> samples (length m).
  Eigen::VectorXcd apply(const Eigen::VectorXcd& theta) const;
  /// Same, for a spectrum that is nonzero only on `support`.
  Eigen::VectorXcd apply_sparse(std::span<const std::size_t> support,
                                const Eigen::VectorXcd& coefs) const;
  /// samples (length m) -> spectrum (length n).
  Eigen::VectorXcd adjoint(const Eigen::VectorXcd& samples) const;

  /// Gram entry (A^H A)[j, k].
  cplx gram(std::size_t j, std::size_t k) const {
    return kernel_[(k + n_ - j) % n_];
  }
  Eigen::MatrixXcd gram_block(std::span<const std::size_t> support) const;

  Eigen::MatrixXcd materialize() const;

 private:
  std::vector<std::size_t> instants_;
  std::size_t n_;
  std::vector<cplx> twiddle_;  // exp(2 pi i q / n) / sqrt(n)
  std::vector<cplx> kernel_;   // (A^H A)[j, j + d] = kernel_[d]
};

struct RecoveryResult {
  Eigen::VectorXcd theta_hat;
  std::vector<std::size_t> support;  // sorted
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  /// Residual norm after each accepted step (OMP: after each group).
  std::vector<double> residual_history;
};

/// Ridge added to the normal equations of every least-squares subproblem.
inline constexpr double kLeastSquaresRidge = 1e-12;

/// Least squares on a fixed support via ridge-regularized normal equations.
Eigen::VectorXcd least_squares_on_support(const MeasurementOperator& A,
                                          const Eigen::VectorXcd& y,
                                          std::span<const std::size_t> support);

/// Orthogonal Matching Pursuit. Stops after k coefficients or when the
/// residual norm falls to tol. Throws std::invalid_argument if m == 0,
/// k == 0 or k > m.
RecoveryResult omp(const MeasurementSet& y, const MeasurementOperator& A, std::size_t k,
                   double tol);

/// CoSaMP with pair grouping. Halts on tol, max_iter or when an iteration
/// fails to reduce the residual; the best iterate is returned.
///
/// With `refit` the pruned coefficients are re-estimated by least squares on
/// the pruned support instead of being copied from the merged 3k-column fit,
/// which otherwise carries the noise absorbed by the discarded columns.
RecoveryResult cosamp(const MeasurementSet& y, const MeasurementOperator& A, std::size_t k,
                      std::size_t max_iter, double tol, bool refit = true);

/// ||x - x_hat|| / ||x||. Throws std::invalid_argument on a zero reference.
double normalized_error(const Eigen::VectorXd& x, const Eigen::VectorXd& x_hat);

/// Real time-domain frame synthesized from a recovered spectrum.
Eigen::VectorXd reconstruct(const RecoveryResult& r);

}  // namespace aqurate
