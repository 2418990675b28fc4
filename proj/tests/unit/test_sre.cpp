#include "doctest.h"

#include <cmath>
#include <numbers>
#include <numeric>

#include "aqurate/clockgen.hpp"
#include "aqurate/sre.hpp"
#include "aqurate/transform.hpp"
#include "support/oracles.hpp"

using namespace aqurate;
using doctest::Approx;

namespace {

std::vector<std::size_t> iota_n(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

MeasurementSet full_measurements(const Eigen::VectorXd& x) {
  MeasurementSet y;
  y.n = static_cast<std::size_t>(x.size());
  y.instants = iota_n(y.n);
  y.values = x;
  return y;
}

}  // namespace

TEST_CASE("sixteen-point single tone") {
  // x[t] = cos(2 pi 3 t / 16): under the unitary convention the spectrum is
  // sqrt(16) / 2 = 2 at bins 3 and 13, zero elsewhere.
  const std::size_t n = 16;
  Eigen::VectorXd x(n);
  for (std::size_t t = 0; t < n; ++t) x[static_cast<Eigen::Index>(t)] = std::cos(2.0 * std::numbers::pi * 3.0 * t / 16.0);
  const MeasurementOperator A(iota_n(n), n);
  const SreState s0 = SreState::bootstrap(n, 0.10, 0.5);
  const SreState s1 = sre_update(s0, full_measurements(x), A, 1.0, 0.1);
  CHECK(s1.support_size == 2);
  CHECK(std::abs(s1.theta_hat[3] - cplx{2.0, 0.0}) < 1e-12);
  CHECK(std::abs(s1.theta_hat[13] - cplx{2.0, 0.0}) < 1e-12);
  CHECK(s1.theta_hat.norm() == Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(s1.s_hat == Approx(0.5 * 0.10 + 0.5 * 2.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("fixed point and zero input") {
  const std::size_t n = 32;
  Rng rng(10);
  Eigen::VectorXcd theta = Eigen::VectorXcd::Zero(n);
  theta[5] = {0.8, -0.3};
  theta[27] = std::conj(theta[5]);
  theta[9] = {0.0, 0.6};
  theta[23] = std::conj(theta[9]);
  const Eigen::VectorXd x = real_idft(theta);

  std::vector<std::size_t> inst;
  for (std::size_t t = 0; t < n; ++t)
    if (uniform01(rng) < 0.5) inst.push_back(t);
  const MeasurementOperator A(inst, n);
  MeasurementSet y{inst, Eigen::VectorXd(static_cast<Eigen::Index>(inst.size())), n};
  for (std::size_t i = 0; i < inst.size(); ++i) y.values[static_cast<Eigen::Index>(i)] = x[static_cast<Eigen::Index>(inst[i])];

  SreState s = SreState::bootstrap(n, 0.10, 0.5);
  s.theta_hat = theta;
  for (int i = 0; i < 40; ++i) {
    s = sre_update(s, y, A, static_cast<double>(n) / inst.size(), 0.1);
    CHECK((s.theta_hat - theta).norm() < 1e-12);
  }
  CHECK(s.s_hat == Approx(4.0 / 32.0).epsilon(1e-9));

  SreState z = SreState::bootstrap(n, 0.10, 0.5);
  MeasurementSet zero{inst, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(inst.size())), n};
  double prev = z.s_hat;
  for (int i = 0; i < 5; ++i) {
    z = sre_update(z, zero, A, 1.0, 0.1);
    CHECK(z.theta_hat.norm() == 0.0);
    CHECK(z.s_hat == Approx(prev * 0.5));
    prev = z.s_hat;
  }

  MeasurementSet bad{inst, Eigen::VectorXd::Zero(3), n};
  CHECK_THROWS(sre_update(z, bad, A, 1.0, 0.1));
}

TEST_CASE("full-sampling residual is nonincreasing for mu at most one") {
  const std::size_t n = 64;
  Rng rng(31);
  Eigen::VectorXd x(n);
  for (auto& v : x) v = uniform(rng, -1, 1);
  const MeasurementOperator A(iota_n(n), n);
  const auto y = full_measurements(x);
  for (double mu : {0.25, 0.5, 1.0}) {
    SreState s = SreState::bootstrap(n);
    double prev = INFINITY;
    for (int i = 0; i < 20; ++i) {
      s = sre_update(s, y, A, mu, 0.1);
      const double r = (A.apply(s.theta_hat).real() - x).norm();
      CHECK(r <= prev + 1e-12);
      prev = r;
    }
  }
}

TEST_CASE("rate policy") {
  CHECK(rate_to_probability(0.05) == Approx(0.20).epsilon(1e-15));
  CHECK(rate_to_probability(0.15) == Approx(0.60).epsilon(1e-15));
  CHECK(rate_to_probability(0.0) == 0.02);
  CHECK(rate_to_probability(0.5) == 1.0);
  CHECK(rate_to_probability(0.1, {2.0, 0.02}) == Approx(0.2));
}

TEST_CASE("probability to V_SR") {
  DeviceParams dev;
  Rng rng(1);
  const Calibration cal = calibrate(dev, 0.005, 0, rng);
  CHECK(probability_to_vsr(0.5, cal) == Approx(0.4).epsilon(1e-12));
  CHECK(probability_to_vsr(0.0, cal) == 0.0);
  // Closed form: P reaches 1 at vin = 7/15 V.
  const double v1 = probability_to_vsr(1.0, cal);
  double first_one = 0.0;
  for (const auto& pt : cal.points)
    if (pt.probability >= 1.0) { first_one = pt.vin; break; }
  CHECK(v1 == first_one);
  CHECK(v1 >= 7.0 / 15.0 - 1e-12);
  CHECK(v1 < 7.0 / 15.0 + 0.005);
  CHECK(probability_to_vsr(1.5, cal) == v1);

  for (double p : {0.05, 0.2, 0.37, 0.6, 0.9}) {
    const double v = probability_to_vsr(p, cal);
    CHECK(output_probability(v, dev) == Approx(p).epsilon(1e-9));
  }

  Calibration bad;
  CHECK_THROWS(probability_to_vsr(0.5, bad));
}

TEST_CASE("calibration tables") {
  DeviceParams dev;
  Rng rng(4);
  const Calibration an = calibrate(dev, 0.05, 0, rng);
  for (const auto& pt : an.points) CHECK(pt.probability == output_probability(pt.vin, dev));

  const Calibration ends = calibrate(dev, 0.8, 0, rng);
  REQUIRE(ends.points.size() == 2);
  CHECK(ends.points[0].vin == 0.0);
  CHECK(ends.points[0].probability == 0.0);
  CHECK(ends.points[1].vin == 0.8);
  CHECK(ends.points[1].probability == 1.0);

  const std::size_t n = 100000;
  const Calibration mc = calibrate(dev, 0.1, n, rng);
  for (std::size_t i = 0; i < mc.points.size(); ++i) {
    const double q = output_probability(mc.points[i].vin, dev);
    CHECK(std::abs(mc.points[i].probability - q) <= 3.0 * oracle::binomial_sigma(n, q) / n + 1e-12);
    if (i) CHECK(mc.points[i].probability >= mc.points[i - 1].probability);
  }
  CHECK_THROWS(calibrate(dev, 0.0, 0, rng));
}

TEST_CASE("round trip through the oscillator") {
  DeviceParams dev;
  ClockConfig clock;
  Rng rng(8);
  const Calibration cal = calibrate(dev, 0.005, 0, rng);
  const std::size_t n = 20000;
  for (double p : {0.2, 0.5, 0.8}) {
    const double v = probability_to_vsr(p, cal);
    const std::vector<double> grid{v};
    const auto ch = characterize(grid, n, clock, dev, rng);
    CHECK(std::abs(ch.points[0].probability - p) <= 3.0 * oracle::binomial_sigma(n, p) / n + 1e-9);
  }
}
