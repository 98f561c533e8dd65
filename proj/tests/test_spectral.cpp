#include "doctest.h"

#include "dynamite/spectral.hpp"
#include "oracles.hpp"

using namespace dynamite;

namespace {

Vector to_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), v.size()); }

Matrix rank_one(const Vector& pi) {
  Matrix m(pi.size(), pi.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) m.row(r) = pi.transpose();
  return m;
}

// Lazy reversible fixtures shared by the sandwich and monotonicity checks.
struct Fixture {
  std::string name;
  Matrix m;
  Vector f;
};

std::vector<Fixture> lazy_reversible_fixtures() {
  std::vector<Fixture> out;
  for (std::size_t n : {4, 8, 16})
    for (std::size_t i = 1; i <= n / 2; ++i)
      if (n % (2 * i) == 0)
        out.push_back({"cycle" + std::to_string(n) + "/f" + std::to_string(i), make_cycle(n).matrix(),
                       tabulate(make_cycle_function(n, i), n)});
  out.push_back({"uniform2", make_uniform_chain(2).matrix(), to_vector({0.0, 1.0})});
  // Lazy birth-death chain with non-uniform stationary law.
  Matrix bd(4, 4);
  bd << 0.6, 0.4, 0.0, 0.0,
        0.2, 0.5, 0.3, 0.0,
        0.0, 0.25, 0.5, 0.25,
        0.0, 0.0, 0.4, 0.6;
  out.push_back({"birth-death", bd, to_vector({0.0, 0.3, 1.0, 0.2})});
  return out;
}

}  // namespace

TEST_CASE("stationary distributions and eigenvalues") {
  CHECK((stationary_distribution(make_cycle(4).matrix()).array() - 0.25).abs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(second_absolute_eigenvalue(make_identity_chain(1).matrix()), GuardRejection);
  CHECK_THROWS_AS(second_absolute_eigenvalue(make_identity_chain(3).matrix()), GuardRejection);
  Matrix flip(2, 2);
  flip << 0.0, 1.0, 1.0, 0.0;
  CHECK_THROWS_AS(second_absolute_eigenvalue(flip), GuardRejection);

  const auto s = summarize(make_uniform_chain(2).matrix(), to_vector({0.0, 1.0}));
  CHECK(std::abs(s.lambda) < 1e-12);
  CHECK(s.tau_rel == doctest::Approx(1.0));
  CHECK(s.reversible);

  for (std::size_t n : {4, 8, 16}) {
    const double want = 0.5 + 0.5 * std::cos(2 * M_PI / n);
    CHECK(std::abs(second_absolute_eigenvalue(make_cycle(n).matrix()) - want) < 1e-12);
  }
}

TEST_CASE("autocovariances") {
  const Vector pi = to_vector({0.2, 0.5, 0.3});
  const Vector f = to_vector({1.0, -2.0, 0.5});
  for (std::size_t lag = 1; lag < 5; ++lag) CHECK(std::abs(autocovariance(rank_one(pi), f, lag)) < 1e-15);
  const Vector constant = Vector::Constant(8, 0.7);
  CHECK(std::abs(autocovariance(make_cycle(8).matrix(), constant, 3)) < 1e-15);

  const auto c = oracle::cycle(4);
  const std::vector<double> ind{0, 1, 1, 0};
  for (std::size_t lag = 1; lag <= 4; ++lag) {
    CHECK(std::abs(autocovariance(make_cycle(4).matrix(), to_vector(ind), lag) -
                   oracle::autocovariance(c, oracle::uniform(4), ind, lag)) < 1e-12);
  }
}

TEST_CASE("trace variance formula") {
  const Matrix m = make_cycle(4).matrix();
  const Vector f = tabulate(make_indicator({1, 2}, 4), 4);
  const auto s = summarize(m, f);
  CHECK(exact_trace_variance(m, f, 1).variance == doctest::Approx(s.variance));

  const Vector pi = to_vector({0.2, 0.5, 0.3});
  const Vector g = to_vector({1.0, 0.0, 3.0});
  const double vpi = summarize(rank_one(pi), g).variance;
  for (std::size_t t = 1; t <= 6; ++t)
    CHECK(std::abs(exact_trace_variance(rank_one(pi), g, t).variance - vpi / t) < 1e-14);

  const double brute = oracle::trace_variance(oracle::cycle(4), oracle::uniform(4), {0, 1, 1, 0}, 3);
  CHECK(std::abs(exact_trace_variance(m, f, 3).variance - brute) < 1e-12);

  // The incremental sweep agrees with the one-shot formula.
  const auto sweep = trace_variance_sweep(make_cycle(8).matrix(), tabulate(make_cycle_function(8, 2), 8), 40);
  for (std::size_t t : {1, 2, 7, 40})
    CHECK(std::abs(sweep[t - 1].variance -
                   exact_trace_variance(make_cycle(8).matrix(), tabulate(make_cycle_function(8, 2), 8), t).variance) <
          1e-13);
}

TEST_CASE("sandwich and monotonicity on lazy reversible fixtures") {
  for (const auto& fx : lazy_reversible_fixtures()) {
    CAPTURE(fx.name);
    const auto sweep = trace_variance_sweep(fx.m, fx.f, 64);
    for (std::size_t t = 1; t <= 64; ++t) {
      const auto v = check_sandwich(fx.m, fx.f, t);
      CHECK(v.pass);
      if (t > 1)
        CHECK(t * sweep[t - 1].variance >= (t - 1) * sweep[t - 2].variance - 1e-10);
    }
  }
  // Rank-one chain: lower bound is tight.
  const auto tight = check_sandwich(make_uniform_chain(2).matrix(), to_vector({0.0, 1.0}), 5);
  CHECK(tight.value == doctest::Approx(tight.lower));
  CHECK(check_sandwich(make_cycle(8).matrix(), tabulate(make_cycle_function(8, 1), 8), 64).pass);
  const auto wide = check_sandwich(make_cycle(8).matrix(), tabulate(make_cycle_function(8, 4), 8), 64);
  CHECK(wide.pass);
  CHECK(wide.value > 0.5 * wide.upper);
}

TEST_CASE("sandwich preconditions") {
  Matrix not_lazy(2, 2);
  not_lazy << 0.2, 0.8, 0.8, 0.2;
  CHECK_THROWS_AS(check_sandwich(not_lazy, to_vector({0.0, 1.0}), 3), InvalidArgument);
  Matrix cyclic(3, 3);  // lazy but not reversible
  cyclic << 0.5, 0.5, 0.0,
            0.0, 0.5, 0.5,
            0.5, 0.0, 0.5;
  CHECK_THROWS_AS(check_sandwich(cyclic, to_vector({0.0, 1.0, 0.0}), 3), InvalidArgument);
}

TEST_CASE("cycle separation") {
  const auto n8 = cycle_separation_profile(8, 64);
  REQUIRE(n8.size() == 3);
  CHECK(n8[0].trace_variance < n8[1].trace_variance);
  CHECK(n8[1].trace_variance < n8[2].trace_variance);
  const auto n16 = cycle_separation_profile(16, 256);
  CHECK(n16.back().trace_variance / n16.front().trace_variance >= 8.0);
  for (const auto& row : cycle_separation_profile(4, 1)) CHECK(row.trace_variance == doctest::Approx(0.25));
}

TEST_CASE("oversize chains are rejected") {
  CHECK_THROWS_AS(summarize(Matrix::Identity(kSpectralStateCap + 1, kSpectralStateCap + 1),
                            Vector::Zero(kSpectralStateCap + 1)),
                  GuardRejection);
}
