#pragma once

// Randomized property suites shared by the unit tests and the acceptance run.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "aqurate/clockgen.hpp"
#include "aqurate/recovery.hpp"
#include "aqurate/signals.hpp"
#include "aqurate/sre.hpp"
#include "aqurate/transform.hpp"

namespace props {

struct Outcome {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool ok() const { return cases > 0 && failures == 0; }
  void fail(std::size_t c, const std::string& why) {
    if (failures++ == 0) first_failure = "case " + std::to_string(c) + ": " + why;
  }
};

struct Scenario {
  aqurate::SparseSignal sig;
  std::vector<std::size_t> instants;
  aqurate::MeasurementSet y;
  std::size_t k = 0;
};

inline Scenario random_scenario(aqurate::Rng& rng) {
  using namespace aqurate;
  Scenario s;
  const std::size_t n = std::size_t{32} << static_cast<std::size_t>(uniform01(rng) * 3);  // 32..128
  const std::size_t pairs = 1 + static_cast<std::size_t>(uniform01(rng) * 3);
  s.sig = generate_sparse_signal(n, 2.0 * pairs / static_cast<double>(n), rng);
  const double p = uniform(rng, 0.3, 0.8);
  for (std::size_t t = 0; t < n; ++t)
    if (uniform01(rng) < p) s.instants.push_back(t);
  if (s.instants.size() < 4 * pairs) {
    s.instants.resize(n);
    std::iota(s.instants.begin(), s.instants.end(), 0);
  }
  s.y = sample_at(s.sig, AClkTrace{s.instants, 0, n});
  std::normal_distribution<double> noise(0.0, 0.01);
  for (auto& v : s.y.values) v += noise(rng);
  s.k = s.sig.support.size();
  return s;
}

inline Outcome omp_residual_monotone(std::uint64_t seed, std::size_t cases = 1000) {
  using namespace aqurate;
  Outcome out;
  for (std::size_t c = 0; c < cases; ++c, ++out.cases) {
    Rng rng(derive_seed(seed, {c}));
    const Scenario s = random_scenario(rng);
    const MeasurementOperator A(s.instants, s.sig.n);
    const auto r = omp(s.y, A, s.k + 2 <= s.instants.size() ? s.k + 2 : s.k, 0.0);
    const double slack = 1e-12 * std::max(1.0, s.y.values.norm());
    double prev = s.y.values.norm();
    for (double h : r.residual_history) {
      if (!(h < prev + slack)) {
        out.fail(c, "residual rose from " + std::to_string(prev) + " to " + std::to_string(h));
        break;
      }
      prev = h;
    }
  }
  return out;
}

inline Outcome solver_scale_invariance(std::uint64_t seed, std::size_t cases = 1000) {
  using namespace aqurate;
  Outcome out;
  for (std::size_t c = 0; c < cases; ++c, ++out.cases) {
    Rng rng(derive_seed(seed, {c}));
    const Scenario s = random_scenario(rng);
    const MeasurementOperator A(s.instants, s.sig.n);
    const double scale = std::pow(10.0, uniform(rng, -3.0, 3.0));
    MeasurementSet ys = s.y;
    ys.values *= scale;
    const double tol = 1e-6;
    const auto o1 = omp(s.y, A, s.k, tol * s.y.values.norm());
    const auto o2 = omp(ys, A, s.k, tol * ys.values.norm());
    const auto c1 = cosamp(s.y, A, s.k, 50, tol * s.y.values.norm());
    const auto c2 = cosamp(ys, A, s.k, 50, tol * ys.values.norm());
    if (o1.support != o2.support) out.fail(c, "omp support changed under scaling");
    else if (c1.support != c2.support) out.fail(c, "cosamp support changed under scaling");
    else if ((o2.theta_hat - scale * o1.theta_hat).norm() > 1e-8 * scale * std::max(1.0, o1.theta_hat.norm()))
      out.fail(c, "omp estimate not linear in scale");
    else if ((c2.theta_hat - scale * c1.theta_hat).norm() > 1e-8 * scale * std::max(1.0, c1.theta_hat.norm()))
      out.fail(c, "cosamp estimate not linear in scale");
  }
  return out;
}

inline Outcome parseval(std::uint64_t seed, std::size_t cases = 1000) {
  using namespace aqurate;
  Outcome out;
  for (std::size_t c = 0; c < cases; ++c, ++out.cases) {
    Rng rng(derive_seed(seed, {c}));
    const std::size_t n = std::size_t{16} << static_cast<std::size_t>(uniform01(rng) * 7);  // 16..1024
    const double s = 2.0 * (1 + static_cast<std::size_t>(uniform01(rng) * (n / 8))) / static_cast<double>(n);
    SignalOptions opts;
    opts.on_grid = uniform01(rng) < 0.5;
    const SparseSignal sig = generate_sparse_signal(n, s, rng, opts);
    const double ex = sig.x.norm();
    const double et = sig.theta_true.norm();
    const double ef = unitary_dft(sig.x.cast<cplx>()).norm();
    if (std::abs(ex - et) > 1e-9 * ex || std::abs(ex - ef) > 1e-9 * ex)
      out.fail(c, "energy mismatch " + std::to_string(ex) + " vs " + std::to_string(et));
  }
  return out;
}

inline Outcome sre_threshold_scale_invariance(std::uint64_t seed, std::size_t cases = 1000) {
  using namespace aqurate;
  Outcome out;
  auto support_of = [](const Eigen::VectorXcd& v) {
    std::vector<Eigen::Index> s;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v[i] != cplx{}) s.push_back(i);
    return s;
  };
  for (std::size_t c = 0; c < cases; ++c, ++out.cases) {
    Rng rng(derive_seed(seed, {c}));
    const Scenario s = random_scenario(rng);
    const std::size_t n = s.sig.n;
    const MeasurementOperator A(s.instants, n);
    SreState st = SreState::bootstrap(n);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i)
      if (uniform01(rng) < 0.2) st.theta_hat[i] = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
    const double scale = std::pow(10.0, uniform(rng, -3.0, 3.0));
    const double mu = static_cast<double>(n) / static_cast<double>(s.instants.size());
    const double lambda = uniform(rng, 0.05, 0.5);
    SreState scaled = st;
    scaled.theta_hat *= scale;
    MeasurementSet ys = s.y;
    ys.values *= scale;
    const SreState a = sre_update(st, s.y, A, mu, lambda);
    const SreState b = sre_update(scaled, ys, A, mu, lambda);
    if (support_of(a.theta_hat) != support_of(b.theta_hat) || a.support_size != b.support_size)
      out.fail(c, "support changed under scaling");
    else if (a.support_size > n)
      out.fail(c, "support exceeds n");
    else if (a.s_hat != b.s_hat)
      out.fail(c, "rate estimate changed under scaling");
  }
  return out;
}

inline Outcome aclk_event_conservation(std::uint64_t seed, std::size_t cases = 1000) {
  using namespace aqurate;
  Outcome out;
  DeviceParams dev;
  for (std::size_t c = 0; c < cases; ++c, ++out.cases) {
    Rng rng(derive_seed(seed, {c}));
    ClockConfig cfg;
    cfg.frame_len = 1 + static_cast<std::size_t>(uniform01(rng) * 2048);
    StochasticOscillator osc(dev, rng);
    const Bitstream bits = oscillator_bits(uniform(rng, 0.0, dev.vdd), cfg, osc, rng);
    const Bitstream q = dff_sample(bits, cfg);
    const AClkTrace t = nand_gate(q, cfg, c);
    const auto ones = static_cast<std::size_t>(std::count(q.begin(), q.end(), 1));
    if (t.instants.size() != ones) {
      out.fail(c, "pulse count " + std::to_string(t.instants.size()) + " != ones " + std::to_string(ones));
      continue;
    }
    for (std::size_t i = 0; i < t.instants.size(); ++i) {
      const std::size_t k = t.instants[i];
      if (k >= cfg.frame_len || bits[k] != 1 || (i && t.instants[i - 1] >= k)) {
        out.fail(c, "pulse on a zero bit or out of order at " + std::to_string(k));
        break;
      }
    }
  }
  return out;
}

}  // namespace props
