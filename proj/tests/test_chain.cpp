#include <map>

#include "doctest.h"

#include "dynamite/chain.hpp"
#include "dynamite/spectral.hpp"
#include "oracles.hpp"

using namespace dynamite;

TEST_CASE("identity chain holds its state") {
  const auto k = make_identity_chain(5);
  const auto tr = run_trace(k, std::size_t{3}, 3, 42);
  CHECK(tr.states == std::vector<std::size_t>{3, 3, 3});
}

TEST_CASE("traces replay under a fixed seed") {
  const auto k = make_cycle(4);
  CHECK(run_trace(k, std::size_t{0}, 5, 9).states == run_trace(k, std::size_t{0}, 5, 9).states);
  CHECK(run_trace(k, std::size_t{0}, 200, 9).states != run_trace(k, std::size_t{0}, 200, 10).states);
}

TEST_CASE("cycle step frequencies from state 0") {
  const auto k = make_cycle(4);
  Rng rng(derive_seed(1, "freq"));
  std::map<std::size_t, int> hits;
  const int steps = 100000;
  for (int i = 0; i < steps; ++i) ++hits[k.step(0, rng)];
  CHECK(hits.size() == 3);
  CHECK(std::abs(hits[0] / double(steps) - 0.5) < 0.01);
  CHECK(std::abs(hits[1] / double(steps) - 0.25) < 0.01);
  CHECK(std::abs(hits[3] / double(steps) - 0.25) < 0.01);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(run_trace(make_cycle(4), std::size_t{7}, 3, 1), InvalidArgument);
  CHECK_THROWS_AS(run_trace(make_cycle(4), std::size_t{0}, 0, 1), InvalidArgument);
  Matrix bad(2, 2);
  bad << 0.5, 0.4, 0.5, 0.5;
  CHECK_THROWS_AS(make_matrix_kernel(bad, {}), InvalidArgument);
  Matrix not_lazy(2, 2);
  not_lazy << 0.0, 1.0, 1.0, 0.0;
  KernelTraits lazy;
  lazy.lazy = true;
  CHECK_THROWS_AS(make_matrix_kernel(not_lazy, lazy), InvalidArgument);
  CHECK_THROWS_AS(make_cycle_function(8, 3), InvalidArgument);
  CHECK_THROWS_AS(make_cycle_function(8, 5), InvalidArgument);
}

TEST_CASE("tensor product") {
  SUBCASE("identity base gives identity on pairs") {
    const auto p = tensor_product(make_identity_chain(3));
    CHECK(p.matrix().isApprox(Matrix::Identity(9, 9)));
  }
  SUBCASE("uniform two-state base has all entries 1/4") {
    const auto p = tensor_product(make_uniform_chain(2));
    CHECK(p.matrix().rows() == 4);
    CHECK((p.matrix().array() - 0.25).abs().maxCoeff() < 1e-15);
  }
  SUBCASE("cycle product keeps the second eigenvalue") {
    const auto base = make_cycle(4);
    const auto p = tensor_product(base);
    CHECK(std::abs(second_absolute_eigenvalue(p.matrix()) - second_absolute_eigenvalue(base.matrix())) < 1e-9);
    CHECK(p.traits().base_steps_per_step == 2);
  }
}

TEST_CASE("trace chain") {
  SUBCASE("T = 1 is the base chain") {
    const auto base = make_cycle(5);
    const auto t = trace_chain(base, 1);
    CHECK(t.matrix().isApprox(base.matrix()));
    CHECK(t.traits().lazy);
  }
  SUBCASE("uniform two-state base, T = 2") {
    const auto t = trace_chain(make_uniform_chain(2), 2);
    CHECK((t.matrix().array() - 0.25).abs().maxCoeff() < 1e-15);
  }
  SUBCASE("cycle n=4, T=2: stochastic with pi(a1) M(a1,a2) stationary") {
    const auto t = trace_chain(make_cycle(4), 2);
    const Matrix& m = t.matrix();
    REQUIRE(m.rows() == 16);
    for (Eigen::Index r = 0; r < m.rows(); ++r) CHECK(std::abs(m.row(r).sum() - 1.0) < 1e-12);
    const Vector pi = stationary_distribution(m);
    const auto c = oracle::cycle(4);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) CHECK(std::abs(pi(a * 4 + b) - 0.25 * c[a][b]) < 1e-9);
  }
  SUBCASE("steps regenerate from the last coordinate") {
    const auto t = trace_chain(make_identity_chain(4), 3);
    Rng rng(1);
    CHECK(t.step({0, 1, 2}, rng) == std::vector<std::size_t>{2, 2, 2});
    CHECK(t.traits().base_steps_per_step == 3);
  }
  SUBCASE("lambda bound becomes L^T") {
    const auto t = trace_chain(make_cycle(8), 3);
    const double l = *make_cycle(8).traits().lambda_bound;
    CHECK(*t.traits().lambda_bound == doctest::Approx(l * l * l));
  }
}

TEST_CASE("trace average") {
  const auto f = make_indicator({1}, 3);
  CHECK(lift_to_trace_average(f, 3)({1, 1, 1}) == 1.0);
  CHECK(lift_to_trace_average(f, 2)({0, 1}) == 0.5);
  CHECK_THROWS_AS(lift_to_trace_average(f, 2)({0, 1, 1}), InvalidArgument);

  // Stationary expectation of the trace average equals the mean of f.
  const auto c = oracle::cycle(4);
  const double e = oracle::trace_expectation(c, oracle::uniform(4), {0, 1, 1, 0}, 3);
  CHECK(std::abs(e - 0.5) < 1e-12);
}

TEST_CASE("cycle kernel") {
  const auto k = make_cycle(4);
  const Matrix& m = k.matrix();
  CHECK(m(0, 0) == 0.5);
  CHECK(m(0, 1) == 0.25);
  CHECK(m(0, 2) == 0.0);
  CHECK(m(0, 3) == 0.25);
  for (std::size_t n : {3, 4, 7, 8, 16}) {
    const Vector pi = stationary_distribution(make_cycle(n).matrix());
    CHECK((pi.array() - 1.0 / n).abs().maxCoeff() < 1e-12);
  }
  const double tau = 1.0 / (1.0 - second_absolute_eigenvalue(make_cycle(8).matrix()));
  CHECK(tau >= 64.0 / 20.0);
  CHECK(tau <= 5.0 * 64.0);
  CHECK(*make_cycle(8).traits().lambda_bound == doctest::Approx(0.5 + 0.5 * std::cos(2 * M_PI / 8)));
}

TEST_CASE("cycle functions") {
  const auto f2 = make_cycle_function(8, 2);
  std::vector<double> on_one_to_eight;
  for (std::size_t x = 1; x <= 8; ++x) on_one_to_eight.push_back(f2(x % 8));
  CHECK(on_one_to_eight == std::vector<double>{0, 1, 1, 0, 0, 1, 1, 0});
  const auto f1 = make_cycle_function(8, 1);
  for (std::size_t x = 0; x < 8; ++x) CHECK(f1(x) == static_cast<double>(x % 2));
  for (std::size_t n : {4, 8, 12, 16})
    for (std::size_t i = 1; i <= n / 2; ++i) {
      if (n % (2 * i) != 0) continue;
      const auto s = summarize(make_cycle(n).matrix(), make_cycle_function(n, i));
      CHECK(std::abs(s.mean - 0.5) < 1e-12);
      CHECK(std::abs(s.variance - 0.25) < 1e-12);
    }
}

TEST_CASE("projection chains") {
  const auto cyc = make_cycle(8);
  SUBCASE("parity") {
    std::vector<std::size_t> cls(8);
    for (std::size_t x = 0; x < 8; ++x) cls[x] = x % 2;
    const auto p = project_chain(cyc, cls);
    Matrix want(2, 2);
    want << 0.5, 0.5, 0.5, 0.5;
    CHECK(p.matrix().isApprox(want));
  }
  SUBCASE("mod 4 is the 4-cycle") {
    std::vector<std::size_t> cls(8);
    for (std::size_t x = 0; x < 8; ++x) cls[x] = x % 4;
    CHECK(project_chain(cyc, cls).matrix().isApprox(make_cycle(4).matrix()));
  }
  SUBCASE("single class") {
    const auto p = project_chain(cyc, std::vector<std::size_t>(8, 0));
    CHECK(p.matrix().rows() == 1);
    CHECK(p.matrix()(0, 0) == doctest::Approx(1.0));
  }
  SUBCASE("non-lumpable partition is rejected") {
    std::vector<std::size_t> cls{0, 0, 0, 1, 1, 1, 1, 1};
    CHECK_THROWS_AS(project_chain(cyc, cls), InvalidArgument);
  }
}

TEST_CASE("lazify and step counting") {
  Matrix flip(2, 2);
  flip << 0.0, 1.0, 1.0, 0.0;
  KernelTraits t;
  t.lambda_bound = 0.5;
  t.reversible = true;
  const auto lazy = lazify(make_matrix_kernel(flip, t));
  CHECK(lazy.traits().lazy);
  CHECK(*lazy.traits().lambda_bound == 0.75);
  CHECK(lazy.matrix()(0, 0) == 0.5);

  auto counter = std::make_shared<std::atomic<std::uint64_t>>(0);
  const auto counted = count_steps(make_cycle(4), counter);
  run_trace(counted, std::size_t{0}, 17, 3);
  CHECK(counter->load() == 17);
}
