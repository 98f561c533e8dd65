#include "dynamite/estimators.hpp"

#include <cmath>

namespace dynamite {
namespace {

const double kSqrt21 = std::sqrt(21.0);

void check_paired(const PairedEvaluations& paired) {
  require(paired.first.size() == paired.second.size(), "paired evaluations must have equal lengths");
  require(!paired.first.empty(), "paired evaluations are empty");
  require(paired.first_stream != paired.second_stream, "paired traces must come from distinct streams");
}

}  // namespace

void ConcentrationParams::validate() const {
  require(lambda >= 0.0 && lambda < 1.0, "eigenvalue bound must lie in [0,1)");
  require(range >= 0.0, "range R must be nonnegative");
  require(failure > 0.0 && failure < 1.0, "failure probability must lie in (0,1)");
  require(samples >= 1, "sample count must be at least 1");
}

double ConcentrationParams::log_term() const { return std::log(1.0 / failure); }

std::uint64_t ceil_count(double x) {
  if (x <= 0.0) return 0;
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::ceil(x));
}

double empirical_mean(const PairedEvaluations& paired) {
  check_paired(paired);
  double sum = 0.0;
  for (std::size_t j = 0; j < paired.count(); ++j) sum += paired.first[j] + paired.second[j];
  return sum / (2.0 * static_cast<double>(paired.count()));
}

double two_chain_variance(const PairedEvaluations& paired) {
  check_paired(paired);
  double sum = 0.0;
  for (std::size_t j = 0; j < paired.count(); ++j) {
    const double d = paired.first[j] - paired.second[j];
    sum += d * d;
  }
  return sum / (2.0 * static_cast<double>(paired.count()));
}

std::uint64_t hoeffding_sample_complexity(const ConcentrationParams& params, double epsilon) {
  params.validate();
  require(epsilon > 0.0, "epsilon must be positive");
  const double l = params.lambda;
  const double r = params.range;
  return ceil_count((1.0 + l) / (1.0 - l) * std::log(2.0 / params.failure) * r * r / (2.0 * epsilon * epsilon));
}

std::uint64_t bernstein_sample_complexity(const ConcentrationParams& params, double variance, double epsilon) {
  params.validate();
  require(epsilon > 0.0, "epsilon must be positive");
  require(variance >= 0.0, "variance must be nonnegative");
  const double l = params.lambda;
  const double r = params.range;
  return ceil_count(2.0 / (1.0 - l) * std::log(2.0 / params.failure) *
                    (5.0 * r / epsilon + (1.0 + l) * variance / (epsilon * epsilon)));
}

double variance_upper_bound(double estimate, const ConcentrationParams& params) {
  params.validate();
  require(estimate >= 0.0, "variance estimate must be nonnegative");
  const double l = params.lambda;
  const double r2 = params.range * params.range;
  const double scale = params.log_term() / ((1.0 - l) * static_cast<double>(params.samples));
  return estimate + (11.0 + kSqrt21) * (1.0 + l / kSqrt21) * r2 * scale +
         std::sqrt((1.0 + l) * r2 * estimate * scale);
}

double bernstein_radius(double variance_bound, const ConcentrationParams& params) {
  params.validate();
  require(variance_bound >= 0.0, "variance bound must be nonnegative");
  const double l = params.lambda;
  const double scale = params.log_term() / ((1.0 - l) * static_cast<double>(params.samples));
  return 10.0 * params.range * scale + std::sqrt((1.0 + l) * variance_bound * scale);
}

}  // namespace dynamite
