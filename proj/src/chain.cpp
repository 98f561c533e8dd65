#include "dynamite/chain.hpp"

#include <algorithm>
#include <numeric>

namespace dynamite {

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix trace_chain_matrix(const Matrix& base, std::size_t length) {
  const auto n = static_cast<std::size_t>(base.rows());
  std::size_t states = 1;
  for (std::size_t i = 0; i < length; ++i) states *= n;
  if (states > kMaxExplicitStates) throw GuardRejection("trace-chain matrix exceeds the explicit-state cap");

  // digits[s] = trace for index s, most significant coordinate first.
  std::vector<std::vector<std::size_t>> digits(states, std::vector<std::size_t>(length));
  for (std::size_t s = 0; s < states; ++s) {
    std::size_t rem = s;
    for (std::size_t i = length; i-- > 0;) {
      digits[s][i] = rem % n;
      rem /= n;
    }
  }
  // Probability of generating trace b from a depends on a only through a_T.
  std::vector<double> path_weight(states);
  for (std::size_t s = 0; s < states; ++s) {
    double w = 1.0;
    for (std::size_t i = 0; i + 1 < length; ++i) w *= base(digits[s][i], digits[s][i + 1]);
    path_weight[s] = w;
  }
  Matrix out = Matrix::Zero(states, states);
  for (std::size_t a = 0; a < states; ++a) {
    const std::size_t last = digits[a][length - 1];
    for (std::size_t b = 0; b < states; ++b) out(a, b) = base(last, digits[b][0]) * path_weight[b];
  }
  return out;
}

IndexKernel make_matrix_kernel(const Matrix& matrix, KernelTraits traits) {
  const auto n = static_cast<std::size_t>(matrix.rows());
  auto cdf = std::make_shared<std::vector<std::vector<double>>>(n);
  for (std::size_t r = 0; r < n; ++r) {
    auto& row = (*cdf)[r];
    row.resize(n);
    double acc = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      acc += matrix(r, c);
      row[c] = acc;
    }
  }
  StateSpace<std::size_t> space;
  space.size = n;
  space.contains = [n](const std::size_t& s) { return s < n; };
  space.describe = [](const std::size_t& s) { return std::to_string(s); };
  space.index_of = [](const std::size_t& s) { return s; };

  auto sampler = [cdf, matrix](const std::size_t& s, Rng& rng) -> std::size_t {
    const auto& row = (*cdf)[s];
    const double u = uniform01(rng) * row.back();
    auto it = std::upper_bound(row.begin(), row.end(), u);
    auto idx = static_cast<std::size_t>(it - row.begin());
    if (idx >= row.size()) idx = row.size() - 1;
    // Round-off can land on a zero-probability column; step back to mass.
    while (idx > 0 && matrix(s, idx) == 0.0) --idx;
    return idx;
  };
  return IndexKernel(std::move(sampler), std::move(space), traits, matrix);
}

IndexKernel make_cycle(std::size_t n) {
  require(n >= 3, "cycle requires n >= 3");
  KernelTraits traits;
  traits.lazy = true;
  traits.reversible = true;
  // Eigenvalues are 1/2 + cos(2 pi j/n)/2 >= 0, so the second absolute one is j = 1.
  traits.lambda_bound = 0.5 + 0.5 * std::cos(2.0 * M_PI / static_cast<double>(n));
  if (n > kMaxExplicitStates) {
    StateSpace<std::size_t> space;
    space.contains = [n](std::size_t x) { return x < n; };
    space.describe = [](std::size_t x) { return std::to_string(x); };
    space.size = n;
    space.index_of = [](std::size_t x) { return x; };
    auto sampler = [n](std::size_t x, Rng& rng) {
      const double u = uniform01(rng);
      if (u < 0.5) return x;
      return u < 0.75 ? (x + 1) % n : (x + n - 1) % n;
    };
    return IndexKernel(sampler, space, traits);
  }
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 0.5;
    m(i, (i + 1) % n) += 0.25;
    m(i, (i + n - 1) % n) += 0.25;
  }
  return make_matrix_kernel(m, traits);
}

IndexKernel make_identity_chain(std::size_t n) {
  require(n >= 1, "identity chain requires at least one state");
  KernelTraits traits;
  traits.lazy = true;
  traits.reversible = true;
  return make_matrix_kernel(Matrix::Identity(n, n), traits);
}

IndexKernel make_uniform_chain(std::size_t n) {
  require(n >= 1, "uniform chain requires at least one state");
  KernelTraits traits;
  traits.lazy = n <= 2;
  traits.reversible = true;
  traits.lambda_bound = 0.0;
  return make_matrix_kernel(Matrix::Constant(n, n, 1.0 / static_cast<double>(n)), traits);
}

ScalarFunction<std::size_t> make_cycle_function(std::size_t n, std::size_t half_width) {
  require(half_width >= 1 && 2 * half_width <= n,
          "cycle function block half-width i must satisfy 1 <= i <= n/2");
  require(n % (2 * half_width) == 0, "cycle function requires 2i to divide n (got n=" + std::to_string(n) +
                                         ", i=" + std::to_string(half_width) + ")");
  const std::size_t period = 2 * half_width;
  return ScalarFunction<std::size_t>(
      [period, half_width](const std::size_t& x) { return x % period < half_width ? 0.0 : 1.0; }, 0.0, 1.0);
}

ScalarFunction<std::size_t> make_indicator(std::vector<std::size_t> states, std::size_t n) {
  std::vector<bool> member(n, false);
  for (auto s : states) {
    require(s < n, "indicator state out of range");
    member[s] = true;
  }
  return ScalarFunction<std::size_t>(
      [member = std::move(member)](const std::size_t& x) { return x < member.size() && member[x] ? 1.0 : 0.0; },
      0.0, 1.0);
}

IndexKernel project_chain(const IndexKernel& kernel, const std::vector<std::size_t>& classes) {
  const Matrix& m = kernel.matrix();
  const auto n = static_cast<std::size_t>(m.rows());
  require(classes.size() == n, "partition must label every state");
  const std::size_t k = *std::max_element(classes.begin(), classes.end()) + 1;
  std::vector<std::size_t> representative(k, n);
  for (std::size_t x = 0; x < n; ++x)
    if (representative[classes[x]] == n) representative[classes[x]] = x;
  for (std::size_t c = 0; c < k; ++c) require(representative[c] != n, "partition labels must be contiguous 0..K-1");

  // mass[x][c] = M(x, [c])
  Matrix mass = Matrix::Zero(n, k);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) mass(x, classes[y]) += m(x, y);

  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t rep = representative[classes[x]];
    for (std::size_t c = 0; c < k; ++c) {
      if (std::abs(mass(x, c) - mass(rep, c)) > 1e-9) {
        std::ostringstream os;
        os << "partition is not lumpable: states " << rep << " and " << x << " send mass " << mass(rep, c)
           << " vs " << mass(x, c) << " to class " << c;
        throw InvalidArgument(os.str());
      }
    }
  }
  Matrix lumped(k, k);
  for (std::size_t c = 0; c < k; ++c) lumped.row(c) = mass.row(representative[c]);

  KernelTraits traits;
  traits.lazy = kernel.traits().lazy;
  traits.reversible = kernel.traits().reversible;
  // Lumped eigenvalues are a subset of the original ones.
  traits.lambda_bound = k > 1 ? kernel.traits().lambda_bound : std::optional<double>(0.0);
  return make_matrix_kernel(lumped, traits);
}

Vector tabulate(const ScalarFunction<std::size_t>& f, std::size_t n) {
  Vector v(n);
  for (std::size_t x = 0; x < n; ++x) v(x) = f(x);
  return v;
}

}  // namespace dynamite
