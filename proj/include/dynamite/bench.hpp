#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dynamite/chain.hpp"
#include "dynamite/coloring.hpp"
#include "dynamite/dynamite.hpp"
#include "dynamite/planted.hpp"
#include "dynamite/spectral.hpp"

namespace dynamite {

/// An explicit index chain with an attached function, as selected on the
/// command line (`--chain cycle --n 8 --fn cycle-f --i 1`).
struct ChainProblem {
  std::string label;
  IndexKernel kernel;
  ScalarFunction<std::size_t> f;
};

struct ChainSelector {
  std::string chain = "cycle";  // cycle | two-state | uniform
  std::size_t n = 8;
  std::string fn = "cycle-f";   // cycle-f | indicator
  std::size_t half_width = 1;   // for cycle-f
  std::vector<std::size_t> states;  // for indicator
};

ChainProblem build_chain_problem(const ChainSelector& selector);

inline const std::vector<std::string>& chain_methods() {
  static const std::vector<std::string> m{"dynamite", "mcmc-pro", "warm-start", "static-hoeffding",
                                          "static-bernstein"};
  return m;
}

/// One replicate of `method` on an explicit chain. Stationary methods draw
/// their initial state(s) from the exact stationary distribution on the
/// "initial" stream; warm-start starts from state 0. Static baselines use
/// m_H, or m_B at the exact stationary variance.
EstimateReport run_chain_method(const std::string& method, const ChainProblem& problem,
                                const SpectralSummary& summary, double lambda, double epsilon, double delta,
                                std::uint64_t seed);

/// A benchmark problem: `cycle:<n>:<i>` or `planted:<n>:<r>:<p>:<q>:<graph-seed>:<k>`.
struct BenchProblem {
  enum class Kind { kCycle, kPlanted };
  Kind kind = Kind::kCycle;
  std::string label;
  std::size_t n = 0;
  std::size_t half_width = 1;
  PlantedParams planted;
  std::uint32_t k = 0;
};

BenchProblem parse_bench_problem(const std::string& text);

struct BenchConfig {
  std::vector<BenchProblem> problems;
  std::vector<std::string> methods{"dynamite", "mcmc-pro", "static-hoeffding", "static-bernstein"};
  double epsilon = 0.02;
  double delta = 0.1;
  std::size_t batches = 20;
  std::uint64_t replicates = 1;
  std::uint64_t seed = 0;
  LambdaPolicy planted_lambda{LambdaPolicy::Mode::kOracle, 0.0};
  std::size_t workers = 0;  // 0 = hardware concurrency
  bool timing = false;
};

/// Error is |estimate - mean| for chains and |estimate/count - 1| for
/// counting; coverage is the fraction of replicates with error <= epsilon.
struct BenchRow {
  std::string method;
  std::string problem;
  std::size_t batch = 0;
  std::uint64_t replicates = 0;
  double steps = 0.0;  // mean total base-chain steps per replicate
  double mean_abs_error = 0.0;
  double coverage = 0.0;
  double wall_clock_seconds = 0.0;  // 0 unless timing is enabled
};

inline constexpr const char* kBenchCsvHeader =
    "method,problem,batch,replicates,steps,mean_abs_error,coverage,wall_clock_s";

/// Rows in problem, method, batch order. Replicate r of batch b uses seed
/// derive_seed(seed, b * replicates + r), shared across methods.
std::vector<BenchRow> run_bench(const BenchConfig& config);

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace dynamite
