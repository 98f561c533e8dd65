#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dynamite/errors.hpp"
#include "dynamite/random.hpp"

namespace dynamite {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kRowSumTolerance = 1e-12;

// Largest explicit matrix the constructions will build (N states).
inline constexpr std::size_t kMaxExplicitStates = 4096;

/// How a kernel's states are described. Enumerable spaces carry a size and
/// an index map that addresses rows of the explicit matrix; opaque spaces
/// only need a membership test and a serializer for reports.
template <class State>
struct StateSpace {
  std::function<bool(const State&)> contains;
  std::function<std::string(const State&)> describe;
  std::optional<std::size_t> size;
  std::function<std::size_t(const State&)> index_of;
};

struct KernelTraits {
  bool lazy = false;
  bool reversible = false;
  // Upper bound on the second absolute eigenvalue, when known.
  std::optional<double> lambda_bound;
  // Base-chain transitions performed by one step of this kernel.
  std::uint64_t base_steps_per_step = 1;
};

/// A samplable Markov transition with optional explicit transition matrix.
/// Immutable after construction; safe to share across threads as long as
/// each caller owns its Rng.
template <class State>
class TransitionKernel {
 public:
  using state_type = State;
  using Sampler = std::function<State(const State&, Rng&)>;

  TransitionKernel(Sampler sampler, StateSpace<State> space, KernelTraits traits,
                   std::optional<Matrix> matrix = std::nullopt)
      : sampler_(std::move(sampler)),
        space_(std::move(space)),
        traits_(traits),
        matrix_(std::move(matrix)) {
    require(static_cast<bool>(sampler_), "kernel requires a sampler");
    if (traits_.lambda_bound) {
      const double l = *traits_.lambda_bound;
      require(l >= 0.0 && l < 1.0, "eigenvalue bound must lie in [0,1), got " + std::to_string(l));
    }
    if (matrix_) validate_matrix();
  }

  State step(const State& state, Rng& rng) const { return sampler_(state, rng); }

  bool contains(const State& state) const {
    return !space_.contains || space_.contains(state);
  }

  std::string describe(const State& state) const {
    return space_.describe ? space_.describe(state) : std::string("<state>");
  }

  const StateSpace<State>& space() const { return space_; }
  const KernelTraits& traits() const { return traits_; }

  bool has_matrix() const { return matrix_.has_value(); }
  const Matrix& matrix() const {
    if (!matrix_) throw InvalidArgument("kernel has no explicit transition matrix");
    return *matrix_;
  }

  std::size_t index_of(const State& state) const {
    if (!space_.index_of) throw InvalidArgument("state space is not enumerable");
    return space_.index_of(state);
  }

 private:
  void validate_matrix() const {
    const Matrix& m = *matrix_;
    require(m.rows() == m.cols() && m.rows() > 0, "transition matrix must be square and nonempty");
    if (space_.size) require(static_cast<std::size_t>(m.rows()) == *space_.size,
                             "transition matrix size does not match the state space");
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double sum = m.row(r).sum();
      if (std::abs(sum - 1.0) > kRowSumTolerance || m.row(r).minCoeff() < 0.0) {
        std::ostringstream os;
        os << "row " << r << " is not a probability vector (sum " << sum << ")";
        throw InvalidArgument(os.str());
      }
      if (traits_.lazy && m(r, r) < 0.5 - kRowSumTolerance) {
        std::ostringstream os;
        os << "kernel claims laziness but M(" << r << "," << r << ") = " << m(r, r);
        throw InvalidArgument(os.str());
      }
    }
  }

  Sampler sampler_;
  StateSpace<State> space_;
  KernelTraits traits_;
  std::optional<Matrix> matrix_;
};

using IndexKernel = TransitionKernel<std::size_t>;

/// A bounded real function with declared range [lo, hi].
template <class State>
class ScalarFunction {
 public:
  using Evaluator = std::function<double(const State&)>;

  ScalarFunction(Evaluator eval, double lo, double hi) : eval_(std::move(eval)), lo_(lo), hi_(hi) {
    require(static_cast<bool>(eval_), "function requires an evaluator");
    require(hi >= lo, "function range must satisfy lo <= hi");
  }

  double operator()(const State& state) const {
    const double v = eval_(state);
    if (v < lo_ - 1e-12 || v > hi_ + 1e-12) {
      throw InvalidArgument("function value " + std::to_string(v) + " outside declared range [" +
                            std::to_string(lo_) + "," + std::to_string(hi_) + "]");
    }
    return v;
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double range() const { return hi_ - lo_; }

 private:
  Evaluator eval_;
  double lo_;
  double hi_;
};

template <class State>
struct Trace {
  std::vector<State> states;
  std::uint64_t seed = 0;
  // First index that is in the stationary regime (nonzero after warm-up).
  std::size_t stationary_from = 0;
};

/// Runs `length` steps from `start`. The start state itself is not part of
/// the trace: states[0] is one kernel step away from it.
template <class State>
Trace<State> run_trace(const TransitionKernel<State>& kernel, const State& start,
                       std::size_t length, std::uint64_t seed) {
  require(length >= 1, "trace length must be at least 1");
  if (!kernel.contains(start)) {
    throw InvalidArgument("start state " + kernel.describe(start) + " is not in the state space");
  }
  Rng rng(seed);
  Trace<State> trace;
  trace.seed = seed;
  trace.states.reserve(length);
  State current = start;
  for (std::size_t t = 0; t < length; ++t) {
    current = kernel.step(current, rng);
    trace.states.push_back(current);
  }
  return trace;
}

// Dense Kronecker product; pair (a,b) maps to row a*N + b.
Matrix kronecker(const Matrix& a, const Matrix& b);

/// Two coordinates evolving independently under the same kernel.
template <class State>
TransitionKernel<std::pair<State, State>> tensor_product(const TransitionKernel<State>& kernel) {
  using Pair = std::pair<State, State>;
  auto base = std::make_shared<const TransitionKernel<State>>(kernel);

  StateSpace<Pair> space;
  space.contains = [base](const Pair& p) { return base->contains(p.first) && base->contains(p.second); };
  space.describe = [base](const Pair& p) {
    return "(" + base->describe(p.first) + "," + base->describe(p.second) + ")";
  };
  std::optional<Matrix> matrix;
  if (kernel.space().size) {
    const std::size_t n = *kernel.space().size;
    space.size = n * n;
    space.index_of = [base, n](const Pair& p) { return base->index_of(p.first) * n + base->index_of(p.second); };
    if (kernel.has_matrix() && n * n <= kMaxExplicitStates) matrix = kronecker(kernel.matrix(), kernel.matrix());
  }

  KernelTraits traits;
  traits.reversible = kernel.traits().reversible;
  traits.lambda_bound = kernel.traits().lambda_bound;
  traits.base_steps_per_step = 2 * kernel.traits().base_steps_per_step;

  auto sampler = [base](const Pair& p, Rng& rng) {
    State a = base->step(p.first, rng);
    State b = base->step(p.second, rng);
    return Pair(std::move(a), std::move(b));
  };
  return TransitionKernel<Pair>(std::move(sampler), std::move(space), traits, std::move(matrix));
}

/// Enumerated trace-chain matrix over N^T lexicographically ordered traces.
Matrix trace_chain_matrix(const Matrix& base, std::size_t length);

/// The chain over length-T traces: one step regenerates a whole trace,
/// starting from the last coordinate of the current one.
template <class State>
TransitionKernel<std::vector<State>> trace_chain(const TransitionKernel<State>& kernel,
                                                 std::size_t length) {
  using Seq = std::vector<State>;
  require(length >= 1, "trace-chain length T must be at least 1");
  auto base = std::make_shared<const TransitionKernel<State>>(kernel);

  StateSpace<Seq> space;
  space.contains = [base, length](const Seq& s) {
    if (s.size() != length) return false;
    for (const auto& x : s)
      if (!base->contains(x)) return false;
    return true;
  };
  space.describe = [base](const Seq& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + base->describe(s[i]);
    return out + "]";
  };

  std::optional<Matrix> matrix;
  if (kernel.space().size) {
    const std::size_t n = *kernel.space().size;
    double total = std::pow(static_cast<double>(n), static_cast<double>(length));
    if (total <= static_cast<double>(std::numeric_limits<std::size_t>::max() / 2)) {
      const auto states = static_cast<std::size_t>(total);
      space.size = states;
      space.index_of = [base, n](const Seq& s) {
        std::size_t idx = 0;
        for (const auto& x : s) idx = idx * n + base->index_of(x);
        return idx;
      };
      if (kernel.has_matrix() && states <= kMaxExplicitStates) matrix = trace_chain_matrix(kernel.matrix(), length);
    }
  }

  KernelTraits traits;
  if (length == 1) {
    traits = kernel.traits();
  } else if (kernel.traits().lambda_bound) {
    traits.lambda_bound = std::pow(*kernel.traits().lambda_bound, static_cast<double>(length));
  }
  traits.base_steps_per_step = length * kernel.traits().base_steps_per_step;

  auto sampler = [base, length](const Seq& current, Rng& rng) {
    Seq next;
    next.reserve(length);
    next.push_back(base->step(current.back(), rng));
    for (std::size_t i = 1; i < length; ++i) next.push_back(base->step(next.back(), rng));
    return next;
  };
  return TransitionKernel<Seq>(std::move(sampler), std::move(space), traits, std::move(matrix));
}

/// f_avg over a length-T trace: the arithmetic mean of f along it.
template <class State>
ScalarFunction<std::vector<State>> lift_to_trace_average(const ScalarFunction<State>& f,
                                                         std::size_t length) {
  require(length >= 1, "trace-average length T must be at least 1");
  auto eval = [f, length](const std::vector<State>& trace) {
    require(trace.size() == length, "trace has the wrong length for this trace average");
    double sum = 0.0;
    for (const auto& x : trace) sum += f(x);
    return sum / static_cast<double>(length);
  };
  return ScalarFunction<std::vector<State>>(std::move(eval), f.lo(), f.hi());
}

/// Holds with probability 1/2, otherwise defers to the wrapped kernel.
/// Halves the spectral gap: a bound L on the wrapped chain becomes (1+L)/2.
template <class State>
TransitionKernel<State> lazify(const TransitionKernel<State>& kernel) {
  auto base = std::make_shared<const TransitionKernel<State>>(kernel);
  KernelTraits traits = kernel.traits();
  traits.lazy = true;
  if (traits.lambda_bound) traits.lambda_bound = 0.5 * (1.0 + *traits.lambda_bound);
  std::optional<Matrix> matrix;
  if (kernel.has_matrix()) {
    const Matrix& m = kernel.matrix();
    matrix = 0.5 * (Matrix::Identity(m.rows(), m.cols()) + m);
  }
  auto sampler = [base](const State& s, Rng& rng) {
    if (uniform01(rng) < 0.5) return s;
    return base->step(s, rng);
  };
  return TransitionKernel<State>(std::move(sampler), kernel.space(), traits, std::move(matrix));
}

using StepCounter = std::shared_ptr<std::atomic<std::uint64_t>>;

/// Same law as `kernel`; every step increments `counter`.
template <class State>
TransitionKernel<State> count_steps(const TransitionKernel<State>& kernel, StepCounter counter) {
  auto base = std::make_shared<const TransitionKernel<State>>(kernel);
  auto sampler = [base, counter](const State& s, Rng& rng) {
    counter->fetch_add(1, std::memory_order_relaxed);
    return base->step(s, rng);
  };
  std::optional<Matrix> matrix;
  if (kernel.has_matrix()) matrix = kernel.matrix();
  return TransitionKernel<State>(std::move(sampler), kernel.space(), kernel.traits(), std::move(matrix));
}

// ---- index-state chains -------------------------------------------------

/// Kernel on states 0..N-1 that samples rows of `matrix`.
IndexKernel make_matrix_kernel(const Matrix& matrix, KernelTraits traits);

/// Lazy cycle on Z_n: hold 1/2, move to either neighbour with 1/4.
IndexKernel make_cycle(std::size_t n);

/// M = I on N states. Absorbing everywhere, so no eigenvalue bound.
IndexKernel make_identity_chain(std::size_t n);

/// Every row equal to the uniform distribution (rank one, lambda = 0).
IndexKernel make_uniform_chain(std::size_t n);

/// f_i on the n-cycle: 0 iff x mod 2i < i. Requires 2i | n.
ScalarFunction<std::size_t> make_cycle_function(std::size_t n, std::size_t half_width);

ScalarFunction<std::size_t> make_indicator(std::vector<std::size_t> states, std::size_t n);

/// Lumped kernel on equivalence classes. `classes[x]` is the class label of
/// state x; labels must be 0..K-1 and every label used.
IndexKernel project_chain(const IndexKernel& kernel, const std::vector<std::size_t>& classes);

/// Values of f on states 0..n-1.
Vector tabulate(const ScalarFunction<std::size_t>& f, std::size_t n);

}  // namespace dynamite
