#include "dynamite/bench.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <cmath>
#include <sstream>

#include "dynamite/parallel.hpp"

namespace dynamite {

ChainProblem build_chain_problem(const ChainSelector& s) {
  require(s.n >= 1, "chain needs at least one state");
  ChainProblem out{"", make_identity_chain(1), make_indicator({0}, 1)};
  std::size_t n = s.n;
  if (s.chain == "cycle") {
    out.kernel = make_cycle(n);
  } else if (s.chain == "two-state") {
    n = 2;
    out.kernel = make_uniform_chain(2);
  } else if (s.chain == "uniform") {
    out.kernel = make_uniform_chain(n);
  } else {
    throw InvalidArgument("unknown chain '" + s.chain + "' (expected cycle, two-state or uniform)");
  }
  if (s.fn == "cycle-f") {
    out.f = make_cycle_function(n, s.half_width);
    out.label = s.chain + ":" + std::to_string(n) + ":f" + std::to_string(s.half_width);
  } else if (s.fn == "indicator") {
    require(!s.states.empty(), "indicator function needs at least one state");
    out.f = make_indicator(s.states, n);
    out.label = s.chain + ":" + std::to_string(n) + ":indicator";
  } else {
    throw InvalidArgument("unknown function '" + s.fn + "' (expected cycle-f or indicator)");
  }
  return out;
}

EstimateReport run_chain_method(const std::string& method, const ChainProblem& problem,
                                const SpectralSummary& summary, double lambda, double epsilon, double delta,
                                std::uint64_t seed) {
  Rng init = make_stream(seed, "initial");
  const std::size_t x = sample_from(summary.pi, init);
  const std::size_t y = sample_from(summary.pi, init);
  const auto& kernel = problem.kernel;
  const auto& f = problem.f;
  if (method == "dynamite") return dynamite_estimate(std::pair{x, y}, kernel, lambda, f, epsilon, delta, seed);
  if (method == "mcmc-pro") return mcmc_pro(std::pair{x, y}, kernel, lambda, f, epsilon, delta, seed);
  if (method == "warm-start")
    return warm_start(std::size_t{0}, kernel, lambda, summary.pi_min, f, epsilon, delta, seed);

  detail::validate_run(lambda, epsilon, delta);
  ConcentrationParams params{lambda, std::max(f.range(), 1e-300), delta, 1};
  std::uint64_t m = 0;
  if (method == "static-hoeffding") {
    m = hoeffding_sample_complexity(params, epsilon);
  } else if (method == "static-bernstein") {
    m = bernstein_sample_complexity(params, summary.variance, epsilon);
  } else {
    throw InvalidArgument("unknown method '" + method + "'");
  }
  EstimateReport report = static_report(method, kernel, f, m, x, seed);
  report.lambda = lambda;
  report.epsilon = epsilon;
  report.delta = delta;
  return report;
}

namespace {

template <class T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  if constexpr (std::is_floating_point_v<T>) {
    std::size_t used = 0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || text.empty()) throw InvalidArgument("bad " + what + " '" + text + "'");
  } else {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) throw InvalidArgument("bad " + what + " '" + text + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

struct Outcome {
  double steps = 0.0;
  double error = 0.0;
  double seconds = 0.0;
};

PhaseEstimator counting_estimator(const std::string& method) {
  if (method == "warm-start")
    throw InvalidArgument("method warm-start does not apply to counting problems");
  return parse_phase_estimator(method);
}

}  // namespace

BenchProblem parse_bench_problem(const std::string& text) {
  const auto parts = split(text, ':');
  BenchProblem p;
  p.label = text;
  if (!parts.empty() && parts[0] == "cycle" && parts.size() == 3) {
    p.kind = BenchProblem::Kind::kCycle;
    p.n = parse_number<std::size_t>(parts[1], "cycle size");
    p.half_width = parse_number<std::size_t>(parts[2], "half width");
    make_cycle_function(p.n, p.half_width);  // validates 2i | n
    return p;
  }
  if (!parts.empty() && parts[0] == "planted" && parts.size() == 7) {
    p.kind = BenchProblem::Kind::kPlanted;
    p.planted.n = parse_number<std::size_t>(parts[1], "vertex count");
    p.planted.r = parse_number<std::size_t>(parts[2], "community count");
    p.planted.p = parse_number<double>(parts[3], "p");
    p.planted.q = parse_number<double>(parts[4], "q");
    p.planted.seed = parse_number<std::uint64_t>(parts[5], "graph seed");
    p.k = parse_number<std::uint32_t>(parts[6], "color count");
    p.planted.validate();
    return p;
  }
  throw InvalidArgument("bad problem '" + text +
                        "' (expected cycle:<n>:<i> or planted:<n>:<r>:<p>:<q>:<seed>:<k>, k=0 for d_max+2)");
}

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  require(config.epsilon > 0.0 && config.epsilon < 1.0, "epsilon must lie in (0,1)");
  require(config.delta > 0.0 && config.delta < 1.0, "delta must lie in (0,1)");
  require(config.batches >= 1 && config.replicates >= 1, "batches and replicates must be at least 1");
  for (const auto& m : config.methods)
    require(std::find(chain_methods().begin(), chain_methods().end(), m) != chain_methods().end(),
            "unknown method '" + m + "'");

  std::vector<BenchRow> rows;
  const std::size_t per_cell = config.batches * config.replicates;
  for (const auto& problem : config.problems) {
    std::function<Outcome(const std::string&, std::uint64_t)> run_one;
    std::optional<ChainProblem> chain;
    std::optional<SpectralSummary> summary;
    Graph graph;
    std::uint32_t k = problem.k;
    double truth = 0.0;
    if (problem.kind == BenchProblem::Kind::kCycle) {
      chain = build_chain_problem({"cycle", problem.n, "cycle-f", problem.half_width, {}});
      summary = summarize(chain->kernel.matrix(), chain->f);
      run_one = [&](const std::string& method, std::uint64_t seed) {
        detail::Stopwatch watch;
        const auto r = run_chain_method(method, *chain, *summary, summary->lambda, config.epsilon, config.delta, seed);
        return Outcome{static_cast<double>(r.total_steps), std::abs(r.estimate - summary->mean), watch.seconds()};
      };
    } else {
      graph = generate_planted(problem.planted).graph;
      if (k == 0) k = static_cast<std::uint32_t>(graph.max_degree() + 2);
      truth = static_cast<double>(brute_force_count(graph, k));
      run_one = [&](const std::string& method, std::uint64_t seed) {
        detail::Stopwatch watch;
        CountOptions options;
        options.estimator = counting_estimator(method);
        options.lambda = config.planted_lambda;
        options.seed = seed;
        const auto r = jvv_count(graph, k, config.epsilon, config.delta, options);
        return Outcome{static_cast<double>(r.total_steps), std::abs(r.estimate() / truth - 1.0), watch.seconds()};
      };
    }
    for (const auto& method : config.methods) {
      const auto outcomes = parallel_map(
          per_cell, [&](std::size_t idx) { return run_one(method, derive_seed(config.seed, std::uint64_t{idx})); },
          config.workers);
      for (std::size_t b = 0; b < config.batches; ++b) {
        BenchRow row;
        row.method = method;
        row.problem = problem.label;
        row.batch = b;
        row.replicates = config.replicates;
        std::size_t covered = 0;
        for (std::uint64_t r = 0; r < config.replicates; ++r) {
          const auto& o = outcomes[b * config.replicates + r];
          row.steps += o.steps;
          row.mean_abs_error += o.error;
          if (o.error <= config.epsilon) ++covered;
          if (config.timing) row.wall_clock_seconds += o.seconds;
        }
        const double reps = static_cast<double>(config.replicates);
        row.steps /= reps;
        row.mean_abs_error /= reps;
        row.coverage = static_cast<double>(covered) / reps;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchCsvHeader << '\n';
  out.precision(12);
  for (const auto& r : rows) {
    out << r.method << ',' << r.problem << ',' << r.batch << ',' << r.replicates << ',' << r.steps << ','
        << r.mean_abs_error << ',' << r.coverage << ',' << r.wall_clock_seconds << '\n';
  }
}

}  // namespace dynamite
