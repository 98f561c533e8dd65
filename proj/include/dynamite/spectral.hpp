#pragma once

#include <cstddef>
#include <vector>

#include "dynamite/chain.hpp"

namespace dynamite {

inline constexpr std::size_t kSpectralStateCap = 4096;

/// Exact stationary and spectral data of a small explicit chain, plus the
/// stationary mean and variance of one attached function.
struct SpectralSummary {
  Vector pi;
  double lambda = 0.0;    // second absolute eigenvalue
  double tau_rel = 1.0;   // 1 / (1 - lambda)
  double mean = 0.0;
  double variance = 0.0;  // v_pi
  double pi_min = 0.0;
  bool reversible = false;
};

struct VarianceProfile {
  std::size_t horizon = 1;
  std::vector<double> autocovariances;  // C_1 .. C_{T-1}
  double variance = 0.0;                // v_T
};

struct SandwichVerdict {
  std::size_t horizon = 1;
  double lower = 0.0;  // v_pi / T
  double value = 0.0;  // v_T
  double upper = 0.0;  // 2 tau_rel v_pi / T
  bool pass = false;
};

/// Left fixed point of a row-stochastic matrix, normalized to sum 1.
Vector stationary_distribution(const Matrix& matrix);

/// True when pi(x) M(x,y) = pi(y) M(y,x) for all pairs within `tol`.
bool satisfies_detailed_balance(const Matrix& matrix, const Vector& pi, double tol = 1e-12);

/// Second absolute eigenvalue; throws GuardRejection if the unit eigenvalue
/// is not simple or another eigenvalue has modulus 1.
double second_absolute_eigenvalue(const Matrix& matrix);

SpectralSummary summarize(const Matrix& matrix, const Vector& f);
SpectralSummary summarize(const Matrix& matrix, const ScalarFunction<std::size_t>& f);

/// C_lag = Cov_pi(f(X_1), f(X_{1+lag})), from the lag-th matrix power.
double autocovariance(const Matrix& matrix, const Vector& f, std::size_t lag);

/// v_T = v_pi/T + (2/T^2) sum_{i<T} (T-i) C_i.
VarianceProfile exact_trace_variance(const Matrix& matrix, const Vector& f, std::size_t horizon);

/// Profiles for T = 1..max_horizon, sharing one incremental power sweep.
std::vector<VarianceProfile> trace_variance_sweep(const Matrix& matrix, const Vector& f,
                                                  std::size_t max_horizon);

SandwichVerdict check_sandwich(const Matrix& matrix, const Vector& f, std::size_t horizon,
                               double slack = 1e-10);

struct CycleSeparationRow {
  std::size_t half_width = 1;
  double trace_variance = 0.0;
};

/// v_T(f_i) on the lazy n-cycle for every i with 2i | n.
std::vector<CycleSeparationRow> cycle_separation_profile(std::size_t n, std::size_t horizon);

/// Draws one state from a probability vector.
std::size_t sample_from(const Vector& pi, Rng& rng);

}  // namespace dynamite
