// dynamite-cli: chain analysis, mean estimation, coloring counting, planted
// graph generation and the method comparison benchmark.
//
// Exit codes: 0 success, 1 internal error, 2 configuration error,
// 3 guard rejection, 4 statistical-run failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "dynamite/bench.hpp"
#include "dynamite/json_io.hpp"
#include "dynamite/parallel.hpp"

namespace {

using namespace dynamite;

constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;
constexpr int kExitStatistical = 4;

struct Output {
  std::string path;
  bool timing = false;
};

// Relative output paths land under $DYNAMITE_OUTPUT_DIR when it is set.
std::string resolve_output(const std::string& path) {
  if (path.empty() || path == "-") return "";
  std::filesystem::path p(path);
  if (const char* dir = std::getenv("DYNAMITE_OUTPUT_DIR"); dir != nullptr && *dir != '\0' && p.is_relative())
    p = std::filesystem::path(dir) / p;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  return p.string();
}

void emit(const std::string& text, const std::string& path) {
  const std::string target = resolve_output(path);
  if (target.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(target);
  if (!out) throw InvalidArgument("cannot write " + target);
  out << text;
}

void emit_json(const Json& j, const std::string& path) { emit(j.dump(2) + "\n", path); }

// "oracle" or a number in [0,1).
struct LambdaFlag {
  std::string text = "oracle";

  bool is_oracle() const { return text == "oracle"; }
  double value() const {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || !(v >= 0.0 && v < 1.0))
      throw InvalidArgument("--lambda must be 'oracle' or a number in [0,1), got '" + text + "'");
    return v;
  }
};

void add_chain_flags(CLI::App* cmd, ChainSelector& s) {
  cmd->add_option("--chain", s.chain, "cycle | two-state | uniform")->capture_default_str();
  cmd->add_option("--n", s.n, "number of states")->capture_default_str();
  cmd->add_option("--fn", s.fn, "cycle-f | indicator")->capture_default_str();
  cmd->add_option("--i", s.half_width, "half width of the cycle function")->capture_default_str();
  cmd->add_option("--states", s.states, "states where the indicator is 1")->delimiter(',');
}

void require_spectral_size(const ChainProblem& problem) {
  if (!problem.kernel.has_matrix() || static_cast<std::size_t>(problem.kernel.matrix().rows()) > kSpectralStateCap)
    throw GuardRejection("chain " + problem.label + " is too large for exact analysis (cap " +
                         std::to_string(kSpectralStateCap) + " states); pass an explicit --lambda");
}

// ---------------------------------------------------------------- analyze

struct AnalyzeConfig {
  ChainSelector chain;
  std::vector<std::size_t> horizons{1};
  Output out;
};

void cmd_analyze(const AnalyzeConfig& c) {
  const auto problem = build_chain_problem(c.chain);
  require_spectral_size(problem);
  const Matrix& m = problem.kernel.matrix();
  const auto summary = summarize(m, problem.f);
  const Vector f = tabulate(problem.f, static_cast<std::size_t>(m.rows()));
  std::size_t max_t = 1;
  for (auto t : c.horizons) {
    require(t >= 1, "--T values must be at least 1");
    max_t = std::max(max_t, t);
  }
  const auto sweep = trace_variance_sweep(m, f, max_t);
  Json profiles = Json::array();
  for (auto t : c.horizons) {
    Json p = to_json(sweep[t - 1]);
    if (summary.reversible && problem.kernel.traits().lazy) p["sandwich"] = to_json(check_sandwich(m, f, t));
    profiles.push_back(p);
  }
  emit_json(Json{{"problem", problem.label}, {"summary", to_json(summary)}, {"profiles", profiles}}, c.out.path);
}

// --------------------------------------------------------------- estimate

struct EstimateConfig {
  ChainSelector chain;
  std::string method = "dynamite";
  double epsilon = 0.05;
  double delta = 0.1;
  LambdaFlag lambda;
  std::uint64_t seed = 0;
  std::uint64_t replicates = 1;
  std::size_t threads = 0;
  Output out;
};

void cmd_estimate(const EstimateConfig& c) {
  require(c.replicates >= 1, "--replicates must be at least 1");
  const auto problem = build_chain_problem(c.chain);
  require_spectral_size(problem);
  const auto summary = summarize(problem.kernel.matrix(), problem.f);
  const double lambda = c.lambda.is_oracle() ? summary.lambda : c.lambda.value();
  detail::validate_run(lambda, c.epsilon, c.delta);
  const auto reports = parallel_map(
      c.replicates,
      [&](std::size_t r) {
        return run_chain_method(c.method, problem, summary, lambda, c.epsilon, c.delta,
                                derive_seed(c.seed, std::uint64_t{r}));
      },
      c.threads);

  Json list = Json::array();
  std::uint64_t covered = 0;
  double error = 0.0;
  double steps = 0.0;
  for (const auto& r : reports) {
    list.push_back(to_json(r, c.out.timing));
    const double e = std::abs(r.estimate - summary.mean);
    error += e;
    steps += static_cast<double>(r.total_steps);
    if (e <= c.epsilon) ++covered;
  }
  const double n = static_cast<double>(reports.size());
  Json aggregate{{"replicates", reports.size()},
                 {"true_mean", summary.mean},
                 {"coverage", static_cast<double>(covered) / n},
                 {"mean_abs_error", error / n},
                 {"mean_steps", steps / n}};
  emit_json(Json{{"problem", problem.label}, {"reports", list}, {"aggregate", aggregate}}, c.out.path);
}

// ------------------------------------------------------------------ count

struct CountConfig {
  std::string graph_path;
  std::uint32_t k = 0;
  double epsilon = 0.25;
  double delta = 0.25;
  std::string estimator = "dynamite";
  std::string lambda = "heuristic";
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> shuffle_seed;
  bool exact = false;
  Output out;
};

void cmd_count(const CountConfig& c) {
  const Graph graph = read_graph_file(c.graph_path);
  CountOptions options;
  options.estimator = parse_phase_estimator(c.estimator);
  options.seed = c.seed;
  options.shuffle_seed = c.shuffle_seed;
  if (c.lambda == "heuristic") {
    options.lambda.mode = LambdaPolicy::Mode::kHeuristic;
  } else if (c.lambda == "oracle") {
    options.lambda.mode = LambdaPolicy::Mode::kOracle;
  } else {
    options.lambda.mode = LambdaPolicy::Mode::kExplicit;
    options.lambda.value = LambdaFlag{c.lambda}.value();
  }
  const auto result = jvv_count(graph, c.k, c.epsilon, c.delta, options);
  if (result.lambda_defaulted)
    std::cerr << "warning: phase eigenvalue bounds use the heuristic 1 - 1/(n^2 k); pass --lambda to override\n";
  Json j = to_json(result, c.out.timing);
  if (c.exact) {
    const std::uint64_t exact = brute_force_count(graph, c.k);
    j["exact"] = exact;
    j["relative_error"] = exact > 0 ? std::abs(result.estimate() / static_cast<double>(exact) - 1.0) : 0.0;
  }
  emit_json(j, c.out.path);
}

// ---------------------------------------------------------------- planted

struct PlantedConfig {
  PlantedParams params;
  std::string sidecar;
  Output out;
};

void cmd_planted(const PlantedConfig& c) {
  const auto g = generate_planted(c.params);
  emit_json(graph_to_json(g.graph), c.out.path);
  if (!c.sidecar.empty()) emit_json(planted_sidecar(g, c.params), c.sidecar);
}

// ------------------------------------------------------------------ bench

struct BenchFlags {
  BenchConfig config;
  std::vector<std::string> problems;
  bool preset = false;
  std::string planted_lambda = "oracle";
  Output out;
};

void cmd_bench(BenchFlags& b) {
  std::vector<std::string> problems = b.problems;
  if (b.preset) {
    for (const char* p : {"cycle:16:1", "cycle:16:8", "planted:4:2:1:0.5:3:0"}) problems.emplace_back(p);
  }
  for (const auto& p : problems) b.config.problems.push_back(parse_bench_problem(p));
  if (b.planted_lambda == "oracle") {
    b.config.planted_lambda = {LambdaPolicy::Mode::kOracle, 0.0};
  } else if (b.planted_lambda == "heuristic") {
    b.config.planted_lambda = {LambdaPolicy::Mode::kHeuristic, 0.0};
  } else {
    b.config.planted_lambda = {LambdaPolicy::Mode::kExplicit, LambdaFlag{b.planted_lambda}.value()};
  }
  b.config.timing = b.out.timing;
  std::ostringstream csv;
  write_csv(csv, run_bench(b.config));
  emit(csv.str(), b.out.path);
}

void add_output_flags(CLI::App* cmd, Output& out) {
  cmd->add_option("--output,-o", out.path, "output file (default stdout)");
  cmd->add_flag("--timing", out.timing, "include wall-clock times");
}

}  // namespace

int main(int argc, char** argv) {
  const CLI::Validator kOpenUnit(
      [](std::string& v) {
        double x = 0.0;
        try {
          x = std::stod(v);
        } catch (const std::exception&) {
          return "not a number: " + v;
        }
        return x > 0.0 && x < 1.0 ? std::string() : "must lie in (0,1), got " + v;
      },
      "(0,1)");
  CLI::App app{"DynaMITE: adaptive MCMC mean estimation and approximate counting"};
  app.require_subcommand(1);

  AnalyzeConfig analyze;
  auto* a = app.add_subcommand("analyze-chain", "exact spectral summary and trace-variance sweep");
  add_chain_flags(a, analyze.chain);
  a->add_option("--T", analyze.horizons, "trace lengths to report")->delimiter(',');
  a->add_option("--output,-o", analyze.out.path, "output file (default stdout)");

  EstimateConfig estimate;
  auto* e = app.add_subcommand("estimate", "estimate a stationary mean");
  add_chain_flags(e, estimate.chain);
  e->add_option("--method", estimate.method)
      ->check(CLI::IsMember(chain_methods()))
      ->capture_default_str();
  e->add_option("--epsilon", estimate.epsilon)->check(kOpenUnit)->capture_default_str();
  e->add_option("--delta", estimate.delta)->check(kOpenUnit)->capture_default_str();
  e->add_option("--lambda", estimate.lambda.text, "eigenvalue bound or 'oracle'")->capture_default_str();
  e->add_option("--seed", estimate.seed)->capture_default_str();
  e->add_option("--replicates", estimate.replicates)->capture_default_str();
  e->add_option("--threads", estimate.threads, "worker threads (0 = all cores)");
  add_output_flags(e, estimate.out);

  CountConfig count;
  auto* c = app.add_subcommand("count-colorings", "approximately count proper k-colorings");
  c->add_option("--graph", count.graph_path, "graph JSON file")->required();
  c->add_option("--k", count.k, "number of colors")->required();
  c->add_option("--epsilon", count.epsilon)->check(kOpenUnit)->capture_default_str();
  c->add_option("--delta", count.delta)->check(kOpenUnit)->capture_default_str();
  c->add_option("--estimator", count.estimator, "dynamite | mcmc-pro | static-hoeffding | static-bernstein")
      ->capture_default_str();
  c->add_option("--lambda", count.lambda, "heuristic | oracle | <number>")->capture_default_str();
  c->add_option("--seed", count.seed)->capture_default_str();
  c->add_option("--shuffle-seed", count.shuffle_seed, "permute the edge order");
  c->add_flag("--exact", count.exact, "also brute-force the exact count");
  add_output_flags(c, count.out);

  PlantedConfig planted;
  auto* g = app.add_subcommand("gen-planted", "generate a planted-partition graph");
  g->add_option("--n", planted.params.n)->required();
  g->add_option("--r", planted.params.r)->required();
  g->add_option("--p", planted.params.p)->required();
  g->add_option("--q", planted.params.q)->required();
  g->add_option("--seed", planted.params.seed)->capture_default_str();
  g->add_option("--communities", planted.sidecar, "write community labels and parameters here");
  g->add_option("--output,-o", planted.out.path, "graph JSON file (default stdout)");

  BenchFlags bench;
  auto* b = app.add_subcommand("bench-compare", "compare estimators, one CSV row per method, problem and batch");
  b->add_option("--problem", bench.problems, "cycle:<n>:<i> or planted:<n>:<r>:<p>:<q>:<seed>:<k>");
  b->add_flag("--preset", bench.preset, "add the cycle family and a small planted counting instance");
  b->add_option("--methods", bench.config.methods)->delimiter(',')->check(CLI::IsMember(chain_methods()));
  b->add_option("--epsilon", bench.config.epsilon)->check(kOpenUnit)->capture_default_str();
  b->add_option("--delta", bench.config.delta)->check(kOpenUnit)->capture_default_str();
  b->add_option("--batches", bench.config.batches)->capture_default_str();
  b->add_option("--replicates", bench.config.replicates)->capture_default_str();
  b->add_option("--seed", bench.config.seed)->capture_default_str();
  b->add_option("--threads", bench.config.workers, "worker threads (0 = all cores)");
  b->add_option("--planted-lambda", bench.planted_lambda, "heuristic | oracle | <number>")->capture_default_str();
  add_output_flags(b, bench.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*a) cmd_analyze(analyze);
    if (*e) cmd_estimate(estimate);
    if (*c) cmd_count(count);
    if (*g) cmd_planted(planted);
    if (*b) cmd_bench(bench);
  } catch (const InvalidArgument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const GuardRejection& err) {
    std::cerr << "rejected: " << err.what() << "\n";
    return kExitGuard;
  } catch (const EstimationFailure& err) {
    std::cerr << "estimation failed: " << err.what() << "\n";
    return kExitStatistical;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
