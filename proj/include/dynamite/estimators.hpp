#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dynamite/chain.hpp"

namespace dynamite {

/// f evaluated along two independent traces of equal length m. The stream
/// identifiers name the randomness behind each trace and must differ.
struct PairedEvaluations {
  std::vector<double> first;
  std::vector<double> second;
  std::uint64_t first_stream = 0;
  std::uint64_t second_stream = 1;

  std::size_t count() const { return first.size(); }
};

/// Inputs shared by every concentration bound.
struct ConcentrationParams {
  double lambda = 0.0;       // second-absolute-eigenvalue bound
  double range = 1.0;        // R = b - a
  double failure = 0.1;      // per-bound failure budget delta'
  std::uint64_t samples = 1;  // m

  void validate() const;
  // ln(1/delta'), the log term shared by the variance and radius bounds.
  double log_term() const;
};

/// Ceiling that ignores relative floating-point noise of ~1e-9 above an
/// integer, so closed forms that are exactly integral are not bumped up.
std::uint64_t ceil_count(double x);

/// (1/2m) sum_j (f(x_j) + f(y_j)).
double empirical_mean(const PairedEvaluations& paired);

/// (1/2m) sum_j (f(x_j) - f(y_j))^2. Unbiased for the variance when both
/// traces are stationary and independent.
double two_chain_variance(const PairedEvaluations& paired);

/// Hoeffding sample complexity for mixing chains:
/// ((1+L)/(1-L)) ln(2/delta) R^2 / (2 eps^2). `params.samples` is unused.
std::uint64_t hoeffding_sample_complexity(const ConcentrationParams& params, double epsilon);

/// Bernstein sample complexity with variance v:
/// (2/(1-L)) ln(2/delta) (5R/eps + (1+L) v / eps^2).
std::uint64_t bernstein_sample_complexity(const ConcentrationParams& params, double variance,
                                          double epsilon);

/// High-probability upper bound u >= v on the true variance given the
/// two-chain estimate over m paired samples.
double variance_upper_bound(double estimate, const ConcentrationParams& params);

/// Bernstein confidence radius for the mean given variance bound u.
double bernstein_radius(double variance_bound, const ConcentrationParams& params);

/// Classic fixed-budget estimate: mean of f over one length-m trace.
template <class State>
double static_estimate(const TransitionKernel<State>& kernel, const ScalarFunction<State>& f,
                       std::uint64_t samples, const State& start, std::uint64_t seed) {
  require(samples >= 1, "static estimate needs at least one sample");
  require(kernel.contains(start), "start state " + kernel.describe(start) + " is not in the state space");
  Rng rng(seed);
  State current = start;
  double sum = 0.0;
  for (std::uint64_t j = 0; j < samples; ++j) {
    current = kernel.step(current, rng);
    sum += f(current);
  }
  return sum / static_cast<double>(samples);
}

}  // namespace dynamite
