#pragma once

// Orthonormal DFT helpers. Spectra use the convention
//   x[t] = n^{-1/2} sum_k theta[k] exp(+2 pi i k t / n)
// so the synthesis matrix is unitary.

#include <complex>
#include <cstddef>

#include <Eigen/Core>

namespace aqurate {

using cplx = std::complex<double>;

/// theta = F x (forward, unitary).
Eigen::VectorXcd unitary_dft(const Eigen::VectorXcd& x);
/// x = F^H theta (inverse, unitary).
Eigen::VectorXcd unitary_idft(const Eigen::VectorXcd& theta);

Eigen::VectorXd real_idft(const Eigen::VectorXcd& theta);

/// Index of the conjugate partner of bin k in an n-point spectrum.
constexpr std::size_t mirror_bin(std::size_t k, std::size_t n) noexcept {
  return k == 0 ? 0 : n - k;
}

constexpr bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace aqurate
