#include "aqurate/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <unsupported/Eigen/FFT>

namespace aqurate {

MeasurementOperator::MeasurementOperator(std::vector<std::size_t> instants, std::size_t n)
    : instants_(std::move(instants)), n_(n) {
  if (n_ == 0) throw std::invalid_argument("MeasurementOperator: n must be positive");
  for (std::size_t i = 0; i < instants_.size(); ++i) {
    if (instants_[i] >= n_)
      throw std::out_of_range("MeasurementOperator: instant " + std::to_string(instants_[i]) +
                              " outside frame of " + std::to_string(n_));
    if (i > 0 && instants_[i] <= instants_[i - 1])
      throw std::invalid_argument("MeasurementOperator: instants must be strictly increasing");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  twiddle_.resize(n_);
  for (std::size_t q = 0; q < n_; ++q)
    twiddle_[q] = std::polar(scale, 2.0 * std::numbers::pi * static_cast<double>(q) /
                                        static_cast<double>(n_));

  // kernel[d] = (1/n) sum_t exp(2 pi i d t / n): the inverse FFT of the
  // sampling indicator.
  std::vector<cplx> indicator(n_, cplx{0.0, 0.0});
  for (std::size_t t : instants_) indicator[t] = 1.0;
  Eigen::FFT<double> fft;
  fft.inv(kernel_, indicator);
}

MeasurementOperator MeasurementOperator::from_trace(const AClkTrace& trace, std::size_t n) {
  if (trace.frame_len != 0 && trace.frame_len != n)
    throw std::invalid_argument("MeasurementOperator: trace frame length does not match n");
  return MeasurementOperator(trace.instants, n);
}

cplx MeasurementOperator::entry(std::size_t r, std::size_t k) const {
  return twiddle_[(instants_[r] * k) % n_];
}

Eigen::VectorXcd MeasurementOperator::apply(const Eigen::VectorXcd& theta) const {
  if (static_cast<std::size_t>(theta.size()) != n_)
    throw std::invalid_argument("MeasurementOperator::apply: dimension mismatch");
  const Eigen::VectorXcd x = unitary_idft(theta);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(rows()));
  for (std::size_t r = 0; r < rows(); ++r)
    out[static_cast<Eigen::Index>(r)] = x[static_cast<Eigen::Index>(instants_[r])];
  return out;
}

Eigen::VectorXcd MeasurementOperator::apply_sparse(std::span<const std::size_t> support,
                                                   const Eigen::VectorXcd& coefs) const {
  if (static_cast<std::size_t>(coefs.size()) != support.size())
    throw std::invalid_argument("MeasurementOperator::apply_sparse: dimension mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(rows()));
  for (std::size_t r = 0; r < rows(); ++r) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < support.size(); ++i)
      acc += entry(r, support[i]) * coefs[static_cast<Eigen::Index>(i)];
    out[static_cast<Eigen::Index>(r)] = acc;
  }
  return out;
}

Eigen::VectorXcd MeasurementOperator::adjoint(const Eigen::VectorXcd& samples) const {
  if (static_cast<std::size_t>(samples.size()) != rows())
    throw std::invalid_argument("MeasurementOperator::adjoint: dimension mismatch");
  Eigen::VectorXcd scattered = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_));
  for (std::size_t r = 0; r < rows(); ++r)
    scattered[static_cast<Eigen::Index>(instants_[r])] = samples[static_cast<Eigen::Index>(r)];
  return unitary_dft(scattered);
}

Eigen::MatrixXcd MeasurementOperator::gram_block(std::span<const std::size_t> support) const {
  const auto s = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXcd g(s, s);
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = 0; j < s; ++j)
      g(i, j) = gram(support[static_cast<std::size_t>(i)], support[static_cast<std::size_t>(j)]);
  return g;
}

Eigen::MatrixXcd MeasurementOperator::materialize() const {
  if (n_ > 4096) throw std::length_error("MeasurementOperator::materialize: n > 4096");
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(n_));
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t k = 0; k < n_; ++k)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = entry(r, k);
  return a;
}

namespace {

void check_problem(const MeasurementSet& y, const MeasurementOperator& A, std::size_t k) {
  if (A.rows() == 0) throw std::invalid_argument("recovery: no measurements (m = 0)");
  if (k == 0) throw std::invalid_argument("recovery: sparsity budget k must be >= 1");
  if (k > A.rows())
    throw std::invalid_argument("recovery: k = " + std::to_string(k) + " exceeds m = " +
                                std::to_string(A.rows()));
  if (static_cast<std::size_t>(y.values.size()) != A.rows())
    throw std::invalid_argument("recovery: measurement count does not match operator rows");
  if (y.n != 0 && y.n != A.cols())
    throw std::invalid_argument("recovery: frame length does not match operator");
}

// Members of the conjugate group whose canonical index is j <= n/2.
std::size_t group_members(std::size_t j, std::size_t n, std::size_t out[2]) {
  out[0] = j;
  const std::size_t mirror = mirror_bin(j, n);
  if (mirror == j) return 1;
  out[1] = mirror;
  return 2;
}

// Picks whole conjugate groups in decreasing order of energy until `budget`
// coefficient slots are used. `allowed`, when given, restricts candidates.
std::vector<std::size_t> top_groups(const Eigen::VectorXcd& v, std::size_t budget,
                                    const std::vector<bool>* allowed) {
  const std::size_t n = static_cast<std::size_t>(v.size());
  struct Candidate {
    double score;
    std::size_t j;
  };
  std::vector<Candidate> cands;
  cands.reserve(n / 2 + 1);
  for (std::size_t j = 0; j <= n / 2; ++j) {
    if (allowed && !(*allowed)[j]) continue;
    std::size_t members[2];
    const std::size_t g = group_members(j, n, members);
    double score = 0.0;
    for (std::size_t i = 0; i < g; ++i) score += std::norm(v[static_cast<Eigen::Index>(members[i])]);
    cands.push_back({score, j});
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
  std::vector<std::size_t> picked;
  for (const Candidate& c : cands) {
    if (picked.size() >= budget) break;
    std::size_t members[2];
    const std::size_t g = group_members(c.j, n, members);
    if (picked.size() + g > budget) continue;
    picked.insert(picked.end(), members, members + g);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

Eigen::VectorXcd adjoint_on_support(const MeasurementOperator& A, const Eigen::VectorXcd& y,
                                    std::span<const std::size_t> support) {
  Eigen::VectorXcd b(static_cast<Eigen::Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) {
    cplx acc{0.0, 0.0};
    for (std::size_t r = 0; r < A.rows(); ++r)
      acc += std::conj(A.entry(r, support[i])) * y[static_cast<Eigen::Index>(r)];
    b[static_cast<Eigen::Index>(i)] = acc;
  }
  return b;
}

Eigen::VectorXcd scatter(std::size_t n, std::span<const std::size_t> support,
                         const Eigen::VectorXcd& coefs) {
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < support.size(); ++i)
    full[static_cast<Eigen::Index>(support[i])] = coefs[static_cast<Eigen::Index>(i)];
  return full;
}

// Least squares for real data on a conjugate-closed support. Each pair
// (j, n-j) carries theta_j = a + ib, theta_{n-j} = a - ib, which turns the
// complex problem into a real one of the same size with a cheaper factorization.
// `z` is the full adjoint A^H y.
Eigen::VectorXcd real_least_squares(const MeasurementOperator& A, const Eigen::VectorXcd& z,
                                    std::span<const std::size_t> support) {
  const std::size_t n = A.cols();
  std::vector<std::size_t> reps;
  for (std::size_t idx : support)
    if (idx <= mirror_bin(idx, n)) reps.push_back(idx);

  // Unknowns: (rep, part) with part 0 = real, 1 = imaginary.
  struct Param {
    std::size_t j;
    bool imag;
  };
  std::vector<Param> params;
  for (std::size_t j : reps) {
    params.push_back({j, false});
    if (mirror_bin(j, n) != j) params.push_back({j, true});
  }
  const auto p = static_cast<Eigen::Index>(params.size());

  // Real design columns are c_j = A_j + A_-j and s_j = i (A_j - A_-j), or
  // A_j alone for self-conjugate bins.
  auto inner = [&](const Param& u, const Param& v) {
    const std::size_t uj = u.j, um = mirror_bin(u.j, n);
    const std::size_t vj = v.j, vm = mirror_bin(v.j, n);
    const bool u_pair = uj != um, v_pair = vj != vm;
    if (!u_pair && !v_pair) return std::real(A.gram(uj, vj));
    if (!u_pair) {
      const cplx a = A.gram(uj, vj), b = A.gram(uj, vm);
      return v.imag ? std::real(cplx(0, 1) * (a - b)) : std::real(a + b);
    }
    if (!v_pair) {
      const cplx a = A.gram(uj, vj), b = A.gram(um, vj);
      return u.imag ? std::real(cplx(0, -1) * (a - b)) : std::real(a + b);
    }
    const cplx jk = A.gram(uj, vj), jm = A.gram(uj, vm), mk = A.gram(um, vj), mm = A.gram(um, vm);
    if (!u.imag && !v.imag) return std::real(jk + jm + mk + mm);
    if (!u.imag && v.imag) return std::real(cplx(0, 1) * (jk - jm + mk - mm));
    if (u.imag && !v.imag) return std::real(cplx(0, -1) * (jk + jm - mk - mm));
    return std::real(jk - jm - mk + mm);
  };

  Eigen::MatrixXd g(p, p);
  Eigen::VectorXd rhs(p);
  for (Eigen::Index a = 0; a < p; ++a) {
    const Param& u = params[static_cast<std::size_t>(a)];
    for (Eigen::Index b = a; b < p; ++b) g(a, b) = g(b, a) = inner(u, params[static_cast<std::size_t>(b)]);
    const bool pair = mirror_bin(u.j, n) != u.j;
    const cplx zj = z[static_cast<Eigen::Index>(u.j)];
    rhs[a] = pair ? 2.0 * (u.imag ? zj.imag() : zj.real()) : zj.real();
    // Matches a ridge of kLeastSquaresRidge on every complex coefficient.
    g(a, a) += pair ? 2.0 * kLeastSquaresRidge : kLeastSquaresRidge;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  const Eigen::VectorXd sol = llt.info() == Eigen::Success ? Eigen::VectorXd(llt.solve(rhs))
                                                           : Eigen::VectorXd(g.ldlt().solve(rhs));

  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  for (Eigen::Index a = 0; a < p; ++a) {
    const Param& u = params[static_cast<std::size_t>(a)];
    const std::size_t m = mirror_bin(u.j, n);
    if (m == u.j) {
      full[static_cast<Eigen::Index>(u.j)] += sol[a];
    } else if (u.imag) {
      full[static_cast<Eigen::Index>(u.j)] += cplx(0, sol[a]);
      full[static_cast<Eigen::Index>(m)] -= cplx(0, sol[a]);
    } else {
      full[static_cast<Eigen::Index>(u.j)] += sol[a];
      full[static_cast<Eigen::Index>(m)] += sol[a];
    }
  }
  Eigen::VectorXcd coefs(static_cast<Eigen::Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i)
    coefs[static_cast<Eigen::Index>(i)] = full[static_cast<Eigen::Index>(support[i])];
  return coefs;
}

// Residual y - A theta through the FFT; theta is given on `support`.
Eigen::VectorXcd residual(const MeasurementOperator& A, const Eigen::VectorXcd& y,
                          std::span<const std::size_t> support, const Eigen::VectorXcd& coefs) {
  if (support.empty()) return y;
  return y - A.apply(scatter(A.cols(), support, coefs));
}

}  // namespace

Eigen::VectorXcd least_squares_on_support(const MeasurementOperator& A, const Eigen::VectorXcd& y,
                                          std::span<const std::size_t> support) {
  if (support.empty()) return {};
  Eigen::MatrixXcd g = A.gram_block(support);
  g.diagonal().array() += kLeastSquaresRidge;
  const Eigen::VectorXcd b = adjoint_on_support(A, y, support);
  Eigen::LLT<Eigen::MatrixXcd> llt(g);
  if (llt.info() == Eigen::Success) return llt.solve(b);
  return g.ldlt().solve(b);
}

RecoveryResult omp(const MeasurementSet& y, const MeasurementOperator& A, std::size_t k,
                   double tol) {
  check_problem(y, A, k);
  const std::size_t n = A.cols();
  const Eigen::VectorXcd yc = y.values.cast<cplx>();

  std::vector<std::size_t> support;
  std::vector<bool> chosen(n, false);
  // Incremental Cholesky factor of the support Gram matrix and A_S^H y.
  Eigen::MatrixXcd chol = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(k),
                                                 static_cast<Eigen::Index>(k));
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(k));
  Eigen::VectorXcd coefs;

  RecoveryResult res;
  Eigen::VectorXcd r = yc;
  res.residual_norm = r.norm();

  while (support.size() < k && res.residual_norm > tol) {
    const Eigen::VectorXcd corr = A.adjoint(r);
    std::size_t best = n;
    double best_score = -1.0;
    for (std::size_t j = 0; j <= n / 2; ++j) {
      std::size_t members[2];
      const std::size_t g = group_members(j, n, members);
      if (chosen[members[0]]) continue;
      double score = 0.0;
      for (std::size_t i = 0; i < g; ++i) score += std::norm(corr[static_cast<Eigen::Index>(members[i])]);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (best == n) break;
    std::size_t members[2];
    const std::size_t g = group_members(best, n, members);
    if (support.size() + g > k) break;

    for (std::size_t i = 0; i < g; ++i) {
      const std::size_t col = members[i];
      const auto s = static_cast<Eigen::Index>(support.size());
      Eigen::VectorXcd cross(s);
      for (Eigen::Index p = 0; p < s; ++p) cross[p] = A.gram(support[static_cast<std::size_t>(p)], col);
      Eigen::VectorXcd w = cross;
      if (s > 0) chol.topLeftCorner(s, s).triangularView<Eigen::Lower>().solveInPlace(w);
      const double diag = std::real(A.gram(col, col)) + kLeastSquaresRidge - w.squaredNorm();
      if (s > 0) chol.row(s).head(s) = w.adjoint();
      chol(s, s) = std::sqrt(std::max(diag, kLeastSquaresRidge));
      cplx acc{0.0, 0.0};
      for (std::size_t row = 0; row < A.rows(); ++row)
        acc += std::conj(A.entry(row, col)) * yc[static_cast<Eigen::Index>(row)];
      rhs[s] = acc;
      support.push_back(col);
      chosen[col] = true;
    }

    const auto s = static_cast<Eigen::Index>(support.size());
    const auto lower = chol.topLeftCorner(s, s).triangularView<Eigen::Lower>();
    coefs = lower.solve(rhs.head(s));
    coefs = lower.adjoint().solve(coefs);
    r = residual(A, yc, support, coefs);
    res.residual_norm = r.norm();
    res.residual_history.push_back(res.residual_norm);
    ++res.iterations;
  }

  res.theta_hat = support.empty() ? Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n))
                                  : scatter(n, support, coefs);
  res.support = support;
  std::sort(res.support.begin(), res.support.end());
  return res;
}

RecoveryResult cosamp(const MeasurementSet& y, const MeasurementOperator& A, std::size_t k,
                      std::size_t max_iter, double tol, bool refit) {
  check_problem(y, A, k);
  const std::size_t n = A.cols();
  const Eigen::VectorXcd yc = y.values.cast<cplx>();
  const Eigen::VectorXcd z = A.adjoint(yc);

  RecoveryResult best;
  best.theta_hat = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  best.residual_norm = yc.norm();

  std::vector<std::size_t> current;
  Eigen::VectorXcd r = yc;
  double prev_norm = best.residual_norm;

  for (std::size_t it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXcd proxy = A.adjoint(r);
    std::vector<std::size_t> merged = top_groups(proxy, std::min(2 * k, n), nullptr);
    merged.insert(merged.end(), current.begin(), current.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

    const Eigen::VectorXcd b = scatter(n, merged, real_least_squares(A, z, merged));

    std::vector<bool> allowed(n / 2 + 1, false);
    for (std::size_t idx : merged) allowed[std::min(idx, mirror_bin(idx, n))] = true;
    std::vector<std::size_t> pruned = top_groups(b, k, &allowed);

    Eigen::VectorXcd coefs(static_cast<Eigen::Index>(pruned.size()));
    if (refit) {
      coefs = real_least_squares(A, z, pruned);
    } else {
      for (std::size_t i = 0; i < pruned.size(); ++i)
        coefs[static_cast<Eigen::Index>(i)] = b[static_cast<Eigen::Index>(pruned[i])];
    }
    r = residual(A, yc, pruned, coefs);
    const double norm = r.norm();
    best.residual_history.push_back(norm);
    best.iterations = it;

    if (norm < best.residual_norm) {
      best.theta_hat = scatter(n, pruned, coefs);
      best.support = pruned;
      best.residual_norm = norm;
    }
    current = std::move(pruned);
    if (norm <= tol || norm >= prev_norm) break;
    prev_norm = norm;
  }
  return best;
}

double normalized_error(const Eigen::VectorXd& x, const Eigen::VectorXd& x_hat) {
  if (x.size() != x_hat.size()) throw std::invalid_argument("normalized_error: size mismatch");
  const double ref = x.norm();
  if (!(ref > 0.0)) throw std::invalid_argument("normalized_error: zero reference");
  return (x - x_hat).norm() / ref;
}

Eigen::VectorXd reconstruct(const RecoveryResult& r) { return real_idft(r.theta_hat); }

}  // namespace aqurate
