#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dynamite/chain.hpp"
#include "dynamite/estimators.hpp"

namespace dynamite {

/// Doubling sample schedule: m_i = ceil(alpha 2^i) for i = 1..I.
struct Schedule {
  std::uint64_t iterations = 1;  // I
  double alpha = 0.0;
  std::vector<std::uint64_t> sizes;
  double failure_per_bound = 0.0;  // delta / (3I)
};

Schedule build_schedule(double range, double epsilon, double lambda, double delta);

enum class Termination { kRadiusMet, kScheduleExhausted, kDegenerateRange };

std::string to_string(Termination t);

struct IterationRecord {
  std::uint64_t samples = 0;
  double mean = 0.0;
  double variance = 0.0;        // two-chain estimate
  double variance_bound = 0.0;  // u
  double radius = 0.0;          // Bernstein radius

  bool operator==(const IterationRecord&) const = default;
};

/// Audit trail of one estimation run.
struct EstimateReport {
  std::string method;
  double estimate = 0.0;
  std::vector<IterationRecord> iterations;
  std::uint64_t total_steps = 0;   // base-chain transitions, warm-up included
  std::uint64_t warmup_steps = 0;
  std::uint64_t trace_length = 1;  // T
  double lambda = 0.0;             // bound handed to the inner loop
  double epsilon = 0.0;
  double delta = 0.0;
  Termination termination = Termination::kScheduleExhausted;
  std::uint64_t seed = 0;
  double wall_clock_seconds = 0.0;

  /// Equality on everything except wall-clock time.
  bool same_outcome(const EstimateReport& other) const;
};

/// T = ceil(((1+L)/(1-L)) ln sqrt 2), the trace length that brings the
/// trace chain's relaxation time down to at most 2.
std::uint64_t trace_length_for(double lambda);

/// Lower bound on the minimum stationary probability, carried as
/// ln(1/pi_min) so bounds like k^-n do not underflow.
class MinProbability {
 public:
  static MinProbability from_probability(double pi_min);
  static MinProbability from_log_inverse(double log_inverse);
  double log_inverse() const { return log_inverse_; }

 private:
  explicit MinProbability(double v) : log_inverse_(v) {}
  double log_inverse_;
};

/// ceil(ln(1/pi_min) / ln(1/L)); zero when L = 0 or pi_min = 1.
std::uint64_t uniform_mixing_steps(double lambda, MinProbability pi_min);
std::uint64_t uniform_mixing_steps(double lambda, double pi_min);

namespace detail {

void validate_run(double lambda, double epsilon, double delta);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Progressive estimation over two independent copies of `kernel` (the
/// tensor-product chain), extending both along the doubling schedule until
/// the Bernstein radius drops to epsilon or the schedule ends.
///
/// The initial pair must be stationary; chain A and chain B draw from the
/// "chain-A" and "chain-B" streams of `seed`.
template <class State>
EstimateReport mcmc_pro(const std::pair<State, State>& initial, const TransitionKernel<State>& kernel,
                        double lambda, const ScalarFunction<State>& f, double epsilon, double delta,
                        std::uint64_t seed) {
  detail::validate_run(lambda, epsilon, delta);
  require(kernel.contains(initial.first) && kernel.contains(initial.second),
          "initial pair is not in the state space");
  detail::Stopwatch watch;
  EstimateReport report;
  report.method = "mcmc-pro";
  report.lambda = lambda;
  report.epsilon = epsilon;
  report.delta = delta;
  report.seed = seed;

  const double range = f.range();
  if (range == 0.0) {
    report.estimate = f.lo();
    report.termination = Termination::kDegenerateRange;
    report.wall_clock_seconds = watch.seconds();
    return report;
  }

  const Schedule schedule = build_schedule(range, epsilon, lambda, delta);
  Rng rng_a = make_stream(seed, "chain-A");
  Rng rng_b = make_stream(seed, "chain-B");
  PairedEvaluations values;
  values.first_stream = derive_seed(seed, "chain-A");
  values.second_stream = derive_seed(seed, "chain-B");
  values.first.reserve(schedule.sizes.back());
  values.second.reserve(schedule.sizes.back());

  State a = initial.first;
  State b = initial.second;
  for (std::uint64_t i = 0; i < schedule.iterations; ++i) {
    const std::uint64_t target = schedule.sizes[i];
    while (values.count() < target) {
      a = kernel.step(a, rng_a);
      b = kernel.step(b, rng_b);
      values.first.push_back(f(a));
      values.second.push_back(f(b));
    }
    ConcentrationParams params{lambda, range, schedule.failure_per_bound, target};
    IterationRecord rec;
    rec.samples = target;
    rec.mean = empirical_mean(values);
    rec.variance = two_chain_variance(values);
    rec.variance_bound = variance_upper_bound(rec.variance, params);
    rec.radius = bernstein_radius(rec.variance_bound, params);
    report.iterations.push_back(rec);
    report.estimate = rec.mean;
    if (rec.radius <= epsilon) {
      report.termination = Termination::kRadiusMet;
      break;
    }
    report.termination = Termination::kScheduleExhausted;
  }
  report.total_steps = 2 * values.count() * kernel.traits().base_steps_per_step;
  report.wall_clock_seconds = watch.seconds();
  return report;
}

/// mcmc_pro on the length-T trace chain with the trace-averaged function
/// and eigenvalue bound L^T. The initial pair is padded into two constant
/// traces; the first trace-chain step regenerates them from the last entry.
template <class State>
EstimateReport dynamite_estimate(const std::pair<State, State>& initial, const TransitionKernel<State>& kernel,
                            double lambda, const ScalarFunction<State>& f, double epsilon, double delta,
                            std::uint64_t seed) {
  detail::validate_run(lambda, epsilon, delta);
  require(kernel.traits().lazy, "DynaMITE requires a lazy kernel");
  const std::uint64_t length = trace_length_for(lambda);
  const auto traces = trace_chain(kernel, length);
  std::pair<std::vector<State>, std::vector<State>> padded{std::vector<State>(length, initial.first),
                                                           std::vector<State>(length, initial.second)};
  EstimateReport report = mcmc_pro(padded, traces, std::pow(lambda, static_cast<double>(length)),
                                   lift_to_trace_average(f, length), epsilon, delta, seed);
  report.method = "dynamite";
  report.trace_length = length;
  return report;
}

/// Runs the product chain `steps` times from (start, start) on the
/// "warm-up" stream of `seed`.
template <class State>
std::pair<State, State> advance_product_chain(const State& start, const TransitionKernel<State>& kernel,
                                              std::uint64_t steps, std::uint64_t seed) {
  Rng rng = make_stream(seed, "warm-up");
  State a = start;
  State b = start;
  for (std::uint64_t t = 0; t < steps; ++t) {
    a = kernel.step(a, rng);
    b = kernel.step(b, rng);
  }
  return {std::move(a), std::move(b)};
}

/// Advances the product chain from (start, start) for the uniform mixing
/// time, then runs DynaMITE with failure budget delta/4.
template <class State>
EstimateReport warm_start(const State& start, const TransitionKernel<State>& kernel, double lambda,
                          MinProbability pi_min, const ScalarFunction<State>& f, double epsilon, double delta,
                          std::uint64_t seed) {
  detail::validate_run(lambda, epsilon, delta);
  require(kernel.traits().lazy && kernel.traits().reversible, "warm start requires a lazy reversible kernel");
  require(kernel.contains(start), "start state " + kernel.describe(start) + " is not in the state space");
  detail::Stopwatch watch;

  const std::uint64_t warmup = f.range() > 0.0 ? uniform_mixing_steps(lambda, pi_min) : 0;
  const auto mixed = advance_product_chain(start, kernel, warmup, seed);
  EstimateReport report = dynamite_estimate(mixed, kernel, lambda, f, epsilon, delta / 4.0, seed);
  report.method = "warm-start";
  report.delta = delta;
  report.warmup_steps = 2 * warmup * kernel.traits().base_steps_per_step;
  report.total_steps += report.warmup_steps;
  report.wall_clock_seconds = watch.seconds();
  return report;
}

template <class State>
EstimateReport warm_start(const State& start, const TransitionKernel<State>& kernel, double lambda,
                          double pi_min, const ScalarFunction<State>& f, double epsilon, double delta,
                          std::uint64_t seed) {
  return warm_start(start, kernel, lambda, MinProbability::from_probability(pi_min), f, epsilon, delta, seed);
}

/// Fixed-budget baseline wrapped in a report (single chain of m steps).
template <class State>
EstimateReport static_report(std::string method, const TransitionKernel<State>& kernel,
                             const ScalarFunction<State>& f, std::uint64_t samples, const State& start,
                             std::uint64_t seed) {
  detail::Stopwatch watch;
  EstimateReport report;
  report.method = std::move(method);
  report.seed = seed;
  if (f.range() == 0.0) {
    report.estimate = f.lo();
    report.termination = Termination::kDegenerateRange;
  } else {
    report.estimate = static_estimate(kernel, f, samples, start, derive_seed(seed, "static"));
    report.total_steps = samples * kernel.traits().base_steps_per_step;
    report.iterations.push_back({samples, report.estimate, 0.0, 0.0, 0.0});
    report.termination = Termination::kScheduleExhausted;
  }
  report.wall_clock_seconds = watch.seconds();
  return report;
}

}  // namespace dynamite
