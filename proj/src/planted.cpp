#include "dynamite/planted.hpp"

#include <cmath>

namespace dynamite {

void PlantedParams::validate() const {
  require(n >= 1, "planted model needs at least one vertex");
  require(r >= 1, "planted model needs at least one community");
  require(n % r == 0, "community count r=" + std::to_string(r) + " must divide n=" + std::to_string(n));
  require(p >= 0.0 && p <= 1.0, "p must lie in [0,1]");
  require(q >= 0.0 && q <= 1.0, "q must lie in [0,1]");
  require(r > 1 || q == 0.0, "a single community admits no cross edges (q must be 0)");
  require(cross_probability() <= 1.0, "q/(r-1) must lie in [0,1]");
}

std::vector<Vertex> PartitionedGraph::members(std::size_t community) const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < communities.size(); ++v)
    if (communities[v] == community) out.push_back(v);
  return out;
}

PartitionedGraph generate_planted(const PlantedParams& params) {
  params.validate();
  const std::size_t size = params.n / params.r;
  PartitionedGraph out;
  out.graph = Graph(params.n);
  out.community_count = params.r;
  out.communities.resize(params.n);
  for (Vertex v = 0; v < params.n; ++v) out.communities[v] = v / size;

  Rng rng(derive_seed(params.seed, "planted"));
  const double cross = params.cross_probability();
  for (Vertex u = 0; u < params.n; ++u) {
    for (Vertex v = u + 1; v < params.n; ++v) {
      const double prob = out.communities[u] == out.communities[v] ? params.p : cross;
      // Always draw so the stream position does not depend on p and q.
      const double draw = uniform01(rng);
      if (draw < prob) out.graph.add_edge(u, v);
    }
  }
  return out;
}

std::vector<Edge> cut_set(const PartitionedGraph& graph, std::size_t community) {
  require(community < graph.community_count, "community index out of range");
  std::vector<Edge> out;
  for (const auto& e : graph.graph.edges()) {
    const bool a = graph.communities[e.first] == community;
    const bool b = graph.communities[e.second] == community;
    if (a != b) out.push_back(e);
  }
  return out;
}

namespace {

bool cut_monochromatic(const std::vector<Edge>& cut, const Coloring& c) {
  for (const auto& [u, v] : cut)
    if (c.colors[u] == c.colors[v]) return true;
  return false;
}

}  // namespace

ZetaEstimate zeta_estimate(const PartitionedGraph& graph, std::size_t community, std::uint32_t k,
                           const ZetaOptions& options) {
  require(k >= 1, "k must be at least 1");
  const auto cut = cut_set(graph, community);
  ZetaEstimate out;
  out.cut_size = cut.size();
  if (cut.empty()) {
    out.exact = true;
    return out;
  }
  const Graph reduced = graph.graph.without(cut);
  const double total = std::pow(static_cast<double>(k), static_cast<double>(reduced.vertex_count()));
  constexpr double kExactLimit = 1e6;
  const bool exact = options.mode == ZetaMode::kExact || (options.mode == ZetaMode::kAuto && total <= kExactLimit);

  if (exact) {
    const auto states = enumerate_colorings(reduced, k);
    require(!states.empty(), "graph has no proper k-coloring");
    std::uint64_t hits = 0;
    for (const auto& c : states)
      if (cut_monochromatic(cut, c)) ++hits;
    out.value = static_cast<double>(hits) / static_cast<double>(states.size());
    out.samples = states.size();
    out.exact = true;
    return out;
  }

  require(options.samples >= 1, "sampled zeta needs at least one sample");
  check_ergodicity_floor(reduced, k);
  const auto kernel = lazify(glauber_kernel(reduced, k));
  const double n = static_cast<double>(reduced.vertex_count());
  const double lambda = 0.5 * (1.0 + (1.0 - 1.0 / (n * n * static_cast<double>(k))));
  const auto pi_min = MinProbability::from_log_inverse(n * std::log(static_cast<double>(k)));
  const std::uint64_t warmup = uniform_mixing_steps(lambda, pi_min);
  const std::uint64_t thinning = options.thinning > 0 ? options.thinning : warmup;

  Rng rng(derive_seed(options.seed, "zeta"));
  Coloring state = greedy_coloring(reduced, k);
  for (std::uint64_t t = 0; t < warmup; ++t) state = kernel.step(state, rng);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    for (std::uint64_t t = 0; t < thinning; ++t) state = kernel.step(state, rng);
    if (cut_monochromatic(cut, state)) ++hits;
  }
  const double m = static_cast<double>(options.samples);
  out.value = static_cast<double>(hits) / m;
  out.standard_error = std::sqrt(out.value * (1.0 - out.value) / m);
  out.radius = 1.96 * out.standard_error;
  out.samples = options.samples;
  return out;
}

}  // namespace dynamite
