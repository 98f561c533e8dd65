#include "dynamite/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <sstream>

namespace dynamite {
namespace {

constexpr double kUnitTolerance = 1e-9;

void check_size(const Matrix& matrix) {
  require(matrix.rows() == matrix.cols(), "transition matrix must be square");
  if (static_cast<std::size_t>(matrix.rows()) > kSpectralStateCap) {
    std::ostringstream os;
    os << "chain has " << matrix.rows() << " states; the exact oracle is capped at " << kSpectralStateCap;
    throw GuardRejection(os.str());
  }
}

// Eigenvalue moduli sorted descending.
std::vector<double> sorted_moduli(const Matrix& matrix, const Vector* pi) {
  std::vector<double> moduli;
  if (pi != nullptr) {
    // Reversible: D^{1/2} M D^{-1/2} is symmetric and similar to M.
    const Vector s = pi->cwiseSqrt();
    const Matrix sym = s.asDiagonal() * matrix * s.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (sym + sym.transpose()), Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) moduli.push_back(std::abs(solver.eigenvalues()(i)));
  } else {
    Eigen::EigenSolver<Matrix> solver(matrix, false);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) moduli.push_back(std::abs(solver.eigenvalues()(i)));
  }
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  return moduli;
}

double lambda_from_moduli(const std::vector<double>& moduli) {
  if (moduli.size() < 2) throw GuardRejection("single-state chain: second eigenvalue is undefined");
  if (moduli[1] > 1.0 - kUnitTolerance) {
    throw GuardRejection("chain is not ergodic: unit-modulus eigenvalue has multiplicity > 1");
  }
  return std::max(0.0, moduli[1]);
}

}  // namespace

Vector stationary_distribution(const Matrix& matrix) {
  check_size(matrix);
  const Eigen::Index n = matrix.rows();
  Matrix a = matrix.transpose() - Matrix::Identity(n, n);
  a.row(n - 1).setOnes();
  Vector b = Vector::Zero(n);
  b(n - 1) = 1.0;
  Vector pi = a.fullPivLu().solve(b);
  for (Eigen::Index i = 0; i < n; ++i)
    if (pi(i) < 0.0 && pi(i) > -1e-13) pi(i) = 0.0;
  return pi / pi.sum();
}

bool satisfies_detailed_balance(const Matrix& matrix, const Vector& pi, double tol) {
  for (Eigen::Index x = 0; x < matrix.rows(); ++x)
    for (Eigen::Index y = x + 1; y < matrix.cols(); ++y)
      if (std::abs(pi(x) * matrix(x, y) - pi(y) * matrix(y, x)) > tol) return false;
  return true;
}

double second_absolute_eigenvalue(const Matrix& matrix) {
  check_size(matrix);
  const auto general = sorted_moduli(matrix, nullptr);
  const double lambda = lambda_from_moduli(general);
  const Vector pi = stationary_distribution(matrix);
  if (pi.minCoeff() > 0.0 && satisfies_detailed_balance(matrix, pi)) {
    return lambda_from_moduli(sorted_moduli(matrix, &pi));
  }
  return lambda;
}

SpectralSummary summarize(const Matrix& matrix, const Vector& f) {
  check_size(matrix);
  require(f.size() == matrix.rows(), "function table size does not match the chain");
  SpectralSummary out;
  out.lambda = second_absolute_eigenvalue(matrix);
  out.pi = stationary_distribution(matrix);
  out.reversible = satisfies_detailed_balance(matrix, out.pi);
  out.tau_rel = 1.0 / (1.0 - out.lambda);
  out.mean = out.pi.dot(f);
  const Vector centered = f.array() - out.mean;
  out.variance = out.pi.dot(centered.cwiseProduct(centered));
  out.pi_min = out.pi.minCoeff();
  return out;
}

SpectralSummary summarize(const Matrix& matrix, const ScalarFunction<std::size_t>& f) {
  return summarize(matrix, tabulate(f, static_cast<std::size_t>(matrix.rows())));
}

double autocovariance(const Matrix& matrix, const Vector& f, std::size_t lag) {
  check_size(matrix);
  const Vector pi = stationary_distribution(matrix);
  const Vector centered = f.array() - pi.dot(f);
  Vector pushed = centered;
  for (std::size_t i = 0; i < lag; ++i) pushed = matrix * pushed;
  return pi.dot(centered.cwiseProduct(pushed));
}

std::vector<VarianceProfile> trace_variance_sweep(const Matrix& matrix, const Vector& f,
                                                  std::size_t max_horizon) {
  check_size(matrix);
  require(max_horizon >= 1, "horizon T must be at least 1");
  require(f.size() == matrix.rows(), "function table size does not match the chain");
  const Vector pi = stationary_distribution(matrix);
  const Vector centered = f.array() - pi.dot(f);
  const double v = pi.dot(centered.cwiseProduct(centered));

  std::vector<double> cov;  // cov[i-1] = C_i
  Vector pushed = centered;
  for (std::size_t i = 1; i < max_horizon; ++i) {
    pushed = matrix * pushed;
    cov.push_back(pi.dot(centered.cwiseProduct(pushed)));
  }

  std::vector<VarianceProfile> out;
  out.reserve(max_horizon);
  double sum_c = 0.0;   // sum_{i<T} C_i
  double sum_ic = 0.0;  // sum_{i<T} i C_i
  for (std::size_t t = 1; t <= max_horizon; ++t) {
    if (t >= 2) {
      sum_c += cov[t - 2];
      sum_ic += static_cast<double>(t - 1) * cov[t - 2];
    }
    const double tt = static_cast<double>(t);
    VarianceProfile p;
    p.horizon = t;
    p.autocovariances.assign(cov.begin(), cov.begin() + static_cast<std::ptrdiff_t>(t - 1));
    p.variance = v / tt + 2.0 / (tt * tt) * (tt * sum_c - sum_ic);
    out.push_back(std::move(p));
  }
  return out;
}

VarianceProfile exact_trace_variance(const Matrix& matrix, const Vector& f, std::size_t horizon) {
  return trace_variance_sweep(matrix, f, horizon).back();
}

SandwichVerdict check_sandwich(const Matrix& matrix, const Vector& f, std::size_t horizon, double slack) {
  const SpectralSummary s = summarize(matrix, f);
  require(s.reversible, "sandwich bound requires a reversible chain");
  require((matrix.diagonal().array() >= 0.5 - kRowSumTolerance).all(), "sandwich bound requires a lazy chain");
  SandwichVerdict out;
  out.horizon = horizon;
  const double t = static_cast<double>(horizon);
  out.value = exact_trace_variance(matrix, f, horizon).variance;
  out.lower = s.variance / t;
  out.upper = 2.0 * s.tau_rel * s.variance / t;
  out.pass = out.value >= out.lower - slack && out.value <= out.upper + slack;
  return out;
}

std::vector<CycleSeparationRow> cycle_separation_profile(std::size_t n, std::size_t horizon) {
  const IndexKernel cycle = make_cycle(n);
  std::vector<CycleSeparationRow> rows;
  for (std::size_t i = 1; 2 * i <= n; ++i) {
    if (n % (2 * i) != 0) continue;
    const Vector f = tabulate(make_cycle_function(n, i), n);
    rows.push_back({i, exact_trace_variance(cycle.matrix(), f, horizon).variance});
  }
  return rows;
}

std::size_t sample_from(const Vector& pi, Rng& rng) {
  const double u = uniform01(rng) * pi.sum();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < pi.size(); ++i) {
    acc += pi(i);
    if (u < acc) return static_cast<std::size_t>(i);
  }
  Eigen::Index last = pi.size() - 1;
  while (last > 0 && pi(last) <= 0.0) --last;
  return static_cast<std::size_t>(last);
}

}  // namespace dynamite
