#include "dynamite/dynamite.hpp"

#include <cmath>

namespace dynamite {

Schedule build_schedule(double range, double epsilon, double lambda, double delta) {
  require(epsilon > 0.0, "epsilon must be positive");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  require(lambda >= 0.0 && lambda < 1.0, "eigenvalue bound must lie in [0,1)");
  require(range > 0.0, "schedule requires a positive range R");

  Schedule s;
  // Nudge so that exact powers of two are not floored one short.
  const double levels = std::floor(std::log2(range / (2.0 * epsilon)) + 1e-12);
  s.iterations = levels >= 1.0 ? static_cast<std::uint64_t>(levels) : 1;
  const double log_term = std::log(3.0 * static_cast<double>(s.iterations) / delta);
  s.alpha = (1.0 + lambda) * range * log_term / ((1.0 - lambda) * epsilon);
  s.failure_per_bound = delta / (3.0 * static_cast<double>(s.iterations));
  for (std::uint64_t i = 1; i <= s.iterations; ++i) {
    s.sizes.push_back(ceil_count(s.alpha * std::ldexp(1.0, static_cast<int>(i))));
  }
  return s;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kRadiusMet:
      return "radius-met";
    case Termination::kScheduleExhausted:
      return "schedule-exhausted";
    case Termination::kDegenerateRange:
      return "degenerate-range";
  }
  return "unknown";
}

bool EstimateReport::same_outcome(const EstimateReport& o) const {
  return method == o.method && estimate == o.estimate && iterations == o.iterations &&
         total_steps == o.total_steps && warmup_steps == o.warmup_steps && trace_length == o.trace_length &&
         lambda == o.lambda && epsilon == o.epsilon && delta == o.delta && termination == o.termination &&
         seed == o.seed;
}

std::uint64_t trace_length_for(double lambda) {
  require(lambda >= 0.0 && lambda < 1.0, "eigenvalue bound must lie in [0,1)");
  const std::uint64_t t = ceil_count((1.0 + lambda) / (1.0 - lambda) * std::log(std::sqrt(2.0)));
  return t == 0 ? 1 : t;
}

MinProbability MinProbability::from_probability(double pi_min) {
  require(pi_min > 0.0 && pi_min <= 1.0, "pi_min must lie in (0,1]");
  return MinProbability(-std::log(pi_min));
}

MinProbability MinProbability::from_log_inverse(double log_inverse) {
  require(log_inverse >= 0.0 && std::isfinite(log_inverse), "ln(1/pi_min) must be finite and nonnegative");
  return MinProbability(log_inverse);
}

std::uint64_t uniform_mixing_steps(double lambda, MinProbability pi_min) {
  require(lambda >= 0.0 && lambda < 1.0, "eigenvalue bound must lie in [0,1)");
  if (lambda == 0.0 || pi_min.log_inverse() == 0.0) return 0;
  return ceil_count(pi_min.log_inverse() / std::log(1.0 / lambda));
}

std::uint64_t uniform_mixing_steps(double lambda, double pi_min) {
  return uniform_mixing_steps(lambda, MinProbability::from_probability(pi_min));
}

namespace detail {

void validate_run(double lambda, double epsilon, double delta) {
  require(epsilon > 0.0, "epsilon must be positive");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  require(lambda >= 0.0 && lambda < 1.0, "eigenvalue bound must lie in [0,1)");
}

}  // namespace detail
}  // namespace dynamite
