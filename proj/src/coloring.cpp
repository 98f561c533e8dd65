#include "dynamite/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

#include "dynamite/spectral.hpp"

namespace dynamite {
namespace {

Edge normalized(Vertex u, Vertex v) { return u < v ? Edge{u, v} : Edge{v, u}; }

void check_brute_force_guard(const Graph& graph, std::uint32_t k, double limit) {
  const double total = std::pow(static_cast<double>(k), static_cast<double>(graph.vertex_count()));
  if (total > limit) {
    std::ostringstream os;
    os << "k^n = " << total << " exceeds the enumeration guard " << limit;
    throw GuardRejection(os.str());
  }
}

bool colors_in_range(const Graph& graph, const Coloring& coloring) {
  if (coloring.colors.size() != graph.vertex_count() || coloring.k == 0) return false;
  return std::all_of(coloring.colors.begin(), coloring.colors.end(),
                     [&](std::uint32_t c) { return c >= 1 && c <= coloring.k; });
}

// Depth-first enumeration of proper colorings; `visit` sees each one.
template <class Visit>
void for_each_proper(const Graph& graph, std::uint32_t k, Visit&& visit) {
  const std::size_t n = graph.vertex_count();
  Coloring c{std::vector<std::uint32_t>(n, 0), k};
  if (n == 0) {
    visit(c);
    return;
  }
  std::size_t v = 0;
  while (true) {
    // Advance the color of vertex v to the next value consistent with the
    // already-colored lower-indexed neighbours.
    std::uint32_t next = c.colors[v] + 1;
    for (; next <= k; ++next) {
      bool ok = true;
      for (Vertex w : graph.neighbors(v))
        if (w < v && c.colors[w] == next) {
          ok = false;
          break;
        }
      if (ok) break;
    }
    if (next > k) {
      c.colors[v] = 0;
      if (v == 0) return;
      --v;
      continue;
    }
    c.colors[v] = next;
    if (v + 1 == n) {
      visit(c);
    } else {
      ++v;
    }
  }
}

}  // namespace

Graph::Graph(std::size_t n, const std::vector<Edge>& edges) : adjacency_(n) {
  for (const auto& [u, v] : edges) add_edge(u, v);
}

bool Graph::add_edge(Vertex u, Vertex v) {
  require(u < vertex_count() && v < vertex_count(),
          "edge (" + std::to_string(u) + "," + std::to_string(v) + ") references a missing vertex");
  require(u != v, "self-loop at vertex " + std::to_string(u));
  if (has_edge(u, v)) return false;
  edges_.push_back(normalized(u, v));
  adjacency_[u].push_back(v);
  adjacency_[v].push_back(u);
  return true;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (u >= vertex_count() || v >= vertex_count()) return false;
  const auto& a = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
  const Vertex other = adjacency_[u].size() <= adjacency_[v].size() ? v : u;
  return std::find(a.begin(), a.end(), other) != a.end();
}

std::size_t Graph::max_degree() const {
  std::size_t d = 0;
  for (const auto& adj : adjacency_) d = std::max(d, adj.size());
  return d;
}

Graph Graph::without(const std::vector<Edge>& removed) const {
  std::vector<Edge> drop;
  for (const auto& [u, v] : removed) drop.push_back(normalized(u, v));
  std::sort(drop.begin(), drop.end());
  Graph out(vertex_count());
  for (const auto& e : edges_)
    if (!std::binary_search(drop.begin(), drop.end(), e)) out.add_edge(e.first, e.second);
  return out;
}

std::string describe(const Coloring& coloring) {
  std::string out = "[";
  for (std::size_t i = 0; i < coloring.colors.size(); ++i)
    out += (i ? "," : "") + std::to_string(coloring.colors[i]);
  return out + "]";
}

bool is_proper(const Graph& graph, const Coloring& coloring) {
  require(coloring.colors.size() == graph.vertex_count(),
          "coloring has " + std::to_string(coloring.colors.size()) + " entries for " +
              std::to_string(graph.vertex_count()) + " vertices");
  require(colors_in_range(graph, coloring), "coloring uses a color outside 1..k");
  for (const auto& [u, v] : graph.edges())
    if (coloring.colors[u] == coloring.colors[v]) return false;
  return true;
}

bool can_recolor(const Graph& graph, const Coloring& coloring, Vertex u, std::uint32_t color) {
  for (Vertex w : graph.neighbors(u))
    if (coloring.colors[w] == color) return false;
  return true;
}

Coloring glauber_move(const Graph& graph, const Coloring& coloring, Vertex u, std::uint32_t color) {
  require(u < graph.vertex_count() && color >= 1 && color <= coloring.k, "Glauber move out of range");
  Coloring next = coloring;
  if (can_recolor(graph, coloring, u, color)) next.colors[u] = color;
  return next;
}

Coloring glauber_step(const Graph& graph, std::uint32_t k, const Coloring& coloring, Rng& rng) {
  require(coloring.k == k, "coloring carries a different k");
  if (!is_proper(graph, coloring)) throw InvalidArgument("Glauber step requires a proper coloring");
  require(graph.vertex_count() > 0, "Glauber dynamics needs at least one vertex");
  const auto color = static_cast<std::uint32_t>(uniform_index(rng, k) + 1);
  const Vertex u = uniform_index(rng, graph.vertex_count());
  return glauber_move(graph, coloring, u, color);
}

Coloring restricted_glauber_step(const Graph& graph, std::uint32_t k, const std::vector<Vertex>& subset,
                                 const Coloring& coloring, Rng& rng) {
  require(!subset.empty(), "restricted Glauber step needs a nonempty vertex subset");
  require(coloring.k == k, "coloring carries a different k");
  if (!is_proper(graph, coloring)) throw InvalidArgument("Glauber step requires a proper coloring");
  const auto color = static_cast<std::uint32_t>(uniform_index(rng, k) + 1);
  const Vertex u = uniform_index(rng, graph.vertex_count());
  if (std::find(subset.begin(), subset.end(), u) == subset.end()) return coloring;
  return glauber_move(graph, coloring, u, color);
}

TransitionKernel<Coloring> glauber_kernel(const Graph& graph, std::uint32_t k) {
  require(k >= 1, "k must be at least 1");
  require(graph.vertex_count() > 0, "Glauber dynamics needs at least one vertex");
  auto g = std::make_shared<const Graph>(graph);
  StateSpace<Coloring> space;
  space.contains = [g, k](const Coloring& c) {
    return c.k == k && colors_in_range(*g, c) && is_proper(*g, c);
  };
  space.describe = [](const Coloring& c) { return describe(c); };
  KernelTraits traits;
  traits.reversible = true;  // symmetric: every legal move has probability 1/(nk) both ways
  // The hot loop skips the properness check; the kernel preserves it.
  auto sampler = [g, k](const Coloring& c, Rng& rng) {
    const auto color = static_cast<std::uint32_t>(uniform_index(rng, k) + 1);
    const Vertex u = uniform_index(rng, g->vertex_count());
    Coloring next = c;
    if (can_recolor(*g, c, u, color)) next.colors[u] = color;
    return next;
  };
  return TransitionKernel<Coloring>(std::move(sampler), std::move(space), traits);
}

std::uint64_t brute_force_count(const Graph& graph, std::uint32_t k) {
  require(k >= 1, "k must be at least 1");
  check_brute_force_guard(graph, k, kBruteForceLimit);
  std::uint64_t count = 0;
  for_each_proper(graph, k, [&](const Coloring&) { ++count; });
  return count;
}

std::vector<Coloring> enumerate_colorings(const Graph& graph, std::uint32_t k) {
  require(k >= 1, "k must be at least 1");
  check_brute_force_guard(graph, k, kBruteForceLimit);
  std::vector<Coloring> out;
  for_each_proper(graph, k, [&](const Coloring& c) { out.push_back(c); });
  return out;
}

Matrix exact_glauber_matrix(const Graph& graph, std::uint32_t k, const std::vector<Coloring>& states) {
  const std::size_t count = states.size();
  if (count > kMaxExplicitStates) throw GuardRejection("too many colorings for an explicit Glauber matrix");
  std::map<std::vector<std::uint32_t>, std::size_t> index;
  for (std::size_t i = 0; i < count; ++i) index.emplace(states[i].colors, i);
  const double p = 1.0 / (static_cast<double>(graph.vertex_count()) * static_cast<double>(k));
  Matrix m = Matrix::Zero(count, count);
  for (std::size_t i = 0; i < count; ++i) {
    for (Vertex u = 0; u < graph.vertex_count(); ++u) {
      for (std::uint32_t c = 1; c <= k; ++c) {
        const Coloring next = glauber_move(graph, states[i], u, c);
        m(i, index.at(next.colors)) += p;
      }
    }
  }
  return m;
}

Coloring greedy_coloring(const Graph& graph, std::uint32_t k) {
  Coloring c{std::vector<std::uint32_t>(graph.vertex_count(), 0), k};
  for (Vertex v = 0; v < graph.vertex_count(); ++v) {
    std::uint32_t color = 1;
    for (; color <= k; ++color)
      if (can_recolor(graph, c, v, color)) break;
    if (color > k) throw GuardRejection("greedy coloring ran out of colors at vertex " + std::to_string(v));
    c.colors[v] = color;
  }
  return c;
}

bool glauber_irreducible(const Graph& graph, std::uint32_t k) {
  const auto states = enumerate_colorings(graph, k);
  if (states.empty()) return false;
  std::map<std::vector<std::uint32_t>, std::size_t> index;
  for (std::size_t i = 0; i < states.size(); ++i) index.emplace(states[i].colors, i);
  std::vector<bool> seen(states.size(), false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t s = frontier.front();
    frontier.pop();
    for (Vertex u = 0; u < graph.vertex_count(); ++u) {
      for (std::uint32_t c = 1; c <= k; ++c) {
        if (!can_recolor(graph, states[s], u, c)) continue;
        auto colors = states[s].colors;
        colors[u] = c;
        const std::size_t t = index.at(colors);
        if (!seen[t]) {
          seen[t] = true;
          ++reached;
          frontier.push(t);
        }
      }
    }
  }
  return reached == states.size();
}

void check_ergodicity_floor(const Graph& graph, std::uint32_t k) {
  const std::size_t floor = graph.max_degree() + 2;
  if (k >= floor) return;
  const double total = std::pow(static_cast<double>(k), static_cast<double>(graph.vertex_count()));
  constexpr double kIrreducibilityCheckLimit = 1e6;
  if (total <= kIrreducibilityCheckLimit && glauber_irreducible(graph, k)) return;
  std::ostringstream os;
  os << "k = " << k << " is below the ergodicity floor d_max + 2 = " << floor;
  if (total <= kIrreducibilityCheckLimit) os << " and Glauber dynamics is reducible on this graph";
  throw GuardRejection(os.str());
}

ScalarFunction<Coloring> phase_indicator(const Edge& edge) {
  return ScalarFunction<Coloring>(
      [edge](const Coloring& c) { return c.colors[edge.first] != c.colors[edge.second] ? 1.0 : 0.0; }, 0.0, 1.0);
}

std::vector<PhaseSpec> build_phase_sequence(const Graph& graph, std::optional<std::uint64_t> shuffle_seed) {
  std::vector<Edge> order = graph.edges();
  if (shuffle_seed) {
    Rng rng(derive_seed(*shuffle_seed, "edge-order"));
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::vector<PhaseSpec> phases;
  Graph current(graph.vertex_count());
  for (std::size_t i = 0; i < order.size(); ++i) {
    phases.push_back({i + 1, order[i], current});
    current.add_edge(order[i].first, order[i].second);
  }
  return phases;
}

std::pair<std::uint64_t, std::uint64_t> exact_phase_ratio(const PhaseSpec& phase, std::uint32_t k) {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;
  check_brute_force_guard(phase.sampling_graph, k, kBruteForceLimit);
  for_each_proper(phase.sampling_graph, k, [&](const Coloring& c) {
    ++denominator;
    if (c.colors[phase.edge.first] != c.colors[phase.edge.second]) ++numerator;
  });
  return {numerator, denominator};
}

std::string to_string(PhaseEstimator e) {
  switch (e) {
    case PhaseEstimator::kDynamite:
      return "dynamite";
    case PhaseEstimator::kMcmcPro:
      return "mcmc-pro";
    case PhaseEstimator::kStaticHoeffding:
      return "static-hoeffding";
    case PhaseEstimator::kStaticBernstein:
      return "static-bernstein";
  }
  return "unknown";
}

PhaseEstimator parse_phase_estimator(const std::string& name) {
  for (auto e : {PhaseEstimator::kDynamite, PhaseEstimator::kMcmcPro, PhaseEstimator::kStaticHoeffding,
                 PhaseEstimator::kStaticBernstein})
    if (to_string(e) == name) return e;
  throw InvalidArgument("unknown estimator '" + name + "'");
}

double CountResult::estimate() const { return std::exp(log_estimate); }

std::string decimal_from_log(double log_value) {
  const double log10v = log_value / std::log(10.0);
  char buf[64];
  if (log10v < 15.0) {
    std::snprintf(buf, sizeof buf, "%.0f", std::exp(log_value));
    return buf;
  }
  // Digits beyond double precision carry no information; pad them with zeros.
  auto exponent = static_cast<long>(std::floor(log10v));
  double mantissa = std::pow(10.0, log10v - static_cast<double>(exponent));
  std::snprintf(buf, sizeof buf, "%.14f", mantissa);
  std::string digits;
  for (const char* c = buf; *c; ++c)
    if (*c != '.') digits += *c;
  if (digits.size() > 15) {  // mantissa rounded up to 10.000...
    digits.pop_back();
    ++exponent;
  }
  digits.resize(static_cast<std::size_t>(exponent) + 1, '0');
  return digits;
}

namespace {

double phase_lambda(const Graph& sampling, std::uint32_t k, const LambdaPolicy& policy) {
  switch (policy.mode) {
    case LambdaPolicy::Mode::kExplicit:
      require(policy.value >= 0.0 && policy.value < 1.0, "explicit eigenvalue bound must lie in [0,1)");
      return 0.5 * (1.0 + policy.value);
    case LambdaPolicy::Mode::kOracle: {
      const auto states = enumerate_colorings(sampling, k);
      if (states.size() > kSpectralStateCap) throw GuardRejection("phase chain too large for the oracle bound");
      const Matrix raw = exact_glauber_matrix(sampling, k, states);
      const Matrix m = 0.5 * (Matrix::Identity(raw.rows(), raw.cols()) + raw);
      return states.size() == 1 ? 0.0 : second_absolute_eigenvalue(m);
    }
    case LambdaPolicy::Mode::kHeuristic:
    default: {
      const double n = static_cast<double>(sampling.vertex_count());
      const double raw = 1.0 - 1.0 / (n * n * static_cast<double>(k));
      return 0.5 * (1.0 + raw);
    }
  }
}

EstimateReport estimate_phase(const PhaseSpec& phase, std::uint32_t k, double lambda, double epsilon,
                              double delta, PhaseEstimator estimator, std::uint64_t seed,
                              const TransitionKernel<Coloring>& kernel) {
  const Coloring start = greedy_coloring(phase.sampling_graph, k);
  const auto f = phase_indicator(phase.edge);
  // pi is uniform on a subset of [k]^n, so pi_min >= k^-n.
  const auto pi_min = MinProbability::from_log_inverse(static_cast<double>(phase.sampling_graph.vertex_count()) *
                                                       std::log(static_cast<double>(k)));
  if (estimator == PhaseEstimator::kDynamite) return warm_start(start, kernel, lambda, pi_min, f, epsilon, delta, seed);

  // Other estimators share the same warm-up and delta/4 correction.
  const std::uint64_t warmup = uniform_mixing_steps(lambda, pi_min);
  EstimateReport report;
  ConcentrationParams params{lambda, 1.0, delta / 4.0, 1};
  if (estimator == PhaseEstimator::kMcmcPro) {
    report = mcmc_pro(advance_product_chain(start, kernel, warmup, seed), kernel, lambda, f, epsilon, delta / 4.0,
                      seed);
    report.warmup_steps = 2 * warmup;
  } else {
    Rng rng = make_stream(seed, "warm-up");
    Coloring mixed = start;
    for (std::uint64_t t = 0; t < warmup; ++t) mixed = kernel.step(mixed, rng);
    const std::uint64_t budget = estimator == PhaseEstimator::kStaticHoeffding
                                     ? hoeffding_sample_complexity(params, epsilon)
                                     : bernstein_sample_complexity(params, 0.25, epsilon);
    report = static_report(to_string(estimator), kernel, f, budget, mixed, seed);
    report.warmup_steps = warmup;
  }
  report.lambda = lambda;
  report.epsilon = epsilon;
  report.delta = delta;
  report.total_steps += report.warmup_steps;
  return report;
}

}  // namespace

CountResult jvv_count(const Graph& graph, std::uint32_t k, double epsilon, double delta,
                      const CountOptions& options) {
  require(k >= 1, "k must be at least 1");
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");

  const auto phases = build_phase_sequence(graph, options.shuffle_seed);
  CountResult result;
  result.estimator = to_string(options.estimator);
  result.epsilon = epsilon;
  result.delta = delta;
  result.lambda_defaulted = options.lambda.mode == LambdaPolicy::Mode::kHeuristic && !phases.empty();
  result.log_estimate = static_cast<double>(graph.vertex_count()) * std::log(static_cast<double>(k));
  for (const auto& phase : phases) result.edge_order.push_back(phase.edge);
  for (std::size_t i = 0; i < phases.size(); ++i) {
    try {
      check_ergodicity_floor(phases[i].sampling_graph, k);
    } catch (const GuardRejection& e) {
      throw GuardRejection("phase " + std::to_string(i + 1) + " of " + std::to_string(phases.size()) +
                           " (sampling graph): " + e.what());
    }
  }

  if (!phases.empty()) {
    const double count = static_cast<double>(phases.size());
    result.phase_epsilon = epsilon / count;
    result.phase_delta = delta / count;
    const double r_min = 1.0 - static_cast<double>(graph.max_degree()) / static_cast<double>(k);
    result.relative_error_bound =
        r_min > 0.0 ? std::pow(1.0 + result.phase_epsilon / r_min, count) - 1.0 : INFINITY;
  }

  for (const auto& phase : phases) {
    const auto kernel = lazify(glauber_kernel(phase.sampling_graph, k));
    const double lambda = phase_lambda(phase.sampling_graph, k, options.lambda);
    EstimateReport report = estimate_phase(phase, k, lambda, result.phase_epsilon, result.phase_delta,
                                           options.estimator, derive_seed(options.seed, phase.index), kernel);
    if (report.estimate <= 0.0) {
      std::ostringstream os;
      os << "phase " << phase.index << " (edge " << phase.edge.first << "-" << phase.edge.second
         << ") estimated a zero ratio; the eigenvalue bound " << lambda << " is likely too small";
      throw EstimationFailure(os.str());
    }
    result.ratios.push_back(report.estimate);
    result.phase_lambdas.push_back(lambda);
    result.log_estimate += std::log(report.estimate);
    result.total_steps += report.total_steps;
    result.phase_reports.push_back(std::move(report));
  }
  result.estimate_decimal = decimal_from_log(result.log_estimate);
  return result;
}

}  // namespace dynamite
