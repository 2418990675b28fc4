#include "aqurate/transform.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace aqurate {

namespace {

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

}  // namespace

Eigen::VectorXcd unitary_dft(const Eigen::VectorXcd& x) {
  const auto n = x.size();
  if (n == 0) return {};
  std::vector<cplx> in(x.data(), x.data() + n), out;
  fft_engine().fwd(out, in);
  Eigen::VectorXcd theta = Eigen::Map<Eigen::VectorXcd>(out.data(), n);
  return theta / std::sqrt(static_cast<double>(n));
}

Eigen::VectorXcd unitary_idft(const Eigen::VectorXcd& theta) {
  const auto n = theta.size();
  if (n == 0) return {};
  std::vector<cplx> in(theta.data(), theta.data() + n), out;
  // Eigen's inverse divides by n.
  fft_engine().inv(out, in);
  Eigen::VectorXcd x = Eigen::Map<Eigen::VectorXcd>(out.data(), n);
  return x * std::sqrt(static_cast<double>(n));
}

Eigen::VectorXd real_idft(const Eigen::VectorXcd& theta) {
  return unitary_idft(theta).real();
}

}  // namespace aqurate
