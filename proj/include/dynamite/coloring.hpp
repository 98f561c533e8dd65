#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynamite/chain.hpp"
#include "dynamite/dynamite.hpp"

namespace dynamite {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;  // stored with first < second

/// Undirected simple graph on vertices 0..n-1. Edges keep insertion order;
/// duplicates are dropped and self-loops rejected.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adjacency_(n) {}
  Graph(std::size_t n, const std::vector<Edge>& edges);

  /// Returns false if the edge was already present.
  bool add_edge(Vertex u, Vertex v);
  bool has_edge(Vertex u, Vertex v) const;

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_.at(v); }
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }
  std::size_t max_degree() const;

  /// Copy of this graph with the listed edges removed.
  Graph without(const std::vector<Edge>& removed) const;

 private:
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<Edge> edges_;
};

/// Color assignment with colors 1..k.
struct Coloring {
  std::vector<std::uint32_t> colors;
  std::uint32_t k = 0;

  bool operator==(const Coloring&) const = default;
};

std::string describe(const Coloring& coloring);

/// Throws InvalidArgument on a length or color-range mismatch.
bool is_proper(const Graph& graph, const Coloring& coloring);

bool can_recolor(const Graph& graph, const Coloring& coloring, Vertex u, std::uint32_t color);

/// The deterministic part of one Glauber move: recolor u with c if the
/// result stays proper, otherwise return the input unchanged.
Coloring glauber_move(const Graph& graph, const Coloring& coloring, Vertex u, std::uint32_t color);

/// One Glauber step: (u, c) uniform, recolor when legal, else hold.
Coloring glauber_step(const Graph& graph, std::uint32_t k, const Coloring& coloring, Rng& rng);

/// Glauber step restricted to `subset`: (u, c) is drawn over all vertices,
/// but the move only happens when u lies in the subset.
Coloring restricted_glauber_step(const Graph& graph, std::uint32_t k, const std::vector<Vertex>& subset,
                                 const Coloring& coloring, Rng& rng);

/// Glauber dynamics as a kernel over proper colorings (reversible, not lazy).
TransitionKernel<Coloring> glauber_kernel(const Graph& graph, std::uint32_t k);

/// Guard on k^n for exhaustive enumeration.
inline constexpr double kBruteForceLimit = 1e8;

std::uint64_t brute_force_count(const Graph& graph, std::uint32_t k);

/// All proper colorings in lexicographic order.
std::vector<Coloring> enumerate_colorings(const Graph& graph, std::uint32_t k);

/// Exact Glauber transition matrix over enumerate_colorings(graph, k).
Matrix exact_glauber_matrix(const Graph& graph, std::uint32_t k, const std::vector<Coloring>& states);

/// First-fit coloring in vertex order; throws GuardRejection when some
/// vertex runs out of colors.
Coloring greedy_coloring(const Graph& graph, std::uint32_t k);

/// Whether single-site recolorings connect all proper colorings.
bool glauber_irreducible(const Graph& graph, std::uint32_t k);

/// Accepts k >= d_max + 2, or a smaller k when the graph is small enough
/// to verify irreducibility exhaustively. Throws GuardRejection otherwise.
void check_ergodicity_floor(const Graph& graph, std::uint32_t k);

struct PhaseSpec {
  std::size_t index = 0;  // 1-based
  Edge edge;              // edge added at this phase
  Graph sampling_graph;   // all earlier edges, without `edge`
};

/// f_i(gamma) = 1 iff gamma(u) != gamma(v).
ScalarFunction<Coloring> phase_indicator(const Edge& edge);

/// Phases in the given edge order; with a shuffle seed the order is a
/// seeded permutation of the input order.
std::vector<PhaseSpec> build_phase_sequence(const Graph& graph,
                                            std::optional<std::uint64_t> shuffle_seed = std::nullopt);

/// Exact ratio #Gamma(G_i) / #Gamma(G_{i-1}) as (numerator, denominator).
std::pair<std::uint64_t, std::uint64_t> exact_phase_ratio(const PhaseSpec& phase, std::uint32_t k);

enum class PhaseEstimator { kDynamite, kMcmcPro, kStaticHoeffding, kStaticBernstein };

std::string to_string(PhaseEstimator e);
PhaseEstimator parse_phase_estimator(const std::string& name);

/// Where each phase's eigenvalue bound comes from. Explicit values and the
/// heuristic 1 - 1/(n^2 k) bound the raw Glauber chain and are adjusted to
/// (1+L)/2 for the lazified chain; the oracle computes the lazified chain's
/// exact value.
struct LambdaPolicy {
  enum class Mode { kHeuristic, kExplicit, kOracle };
  Mode mode = Mode::kHeuristic;
  double value = 0.0;
};

struct CountOptions {
  PhaseEstimator estimator = PhaseEstimator::kDynamite;
  LambdaPolicy lambda;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> shuffle_seed;
};

struct CountResult {
  double log_estimate = 0.0;  // natural log
  std::string estimate_decimal;
  std::vector<double> ratios;
  std::vector<EstimateReport> phase_reports;
  std::vector<double> phase_lambdas;  // bound used for the lazified chain
  std::vector<Edge> edge_order;
  std::uint64_t total_steps = 0;
  bool lambda_defaulted = false;
  std::string estimator;
  double epsilon = 0.0;
  double delta = 0.0;
  double phase_epsilon = 0.0;  // additive precision per phase, eps / #E
  double phase_delta = 0.0;
  // Relative error of the product implied by the per-phase guarantees:
  // prod (1 + phase_eps / r_min) - 1 with r_min = 1 - d_max/k.
  double relative_error_bound = 0.0;

  double estimate() const;
};

/// Decimal rendering of exp(log_value) that survives k^n magnitudes.
std::string decimal_from_log(double log_value);

/// Telescoping-product estimate of the number of proper k-colorings.
CountResult jvv_count(const Graph& graph, std::uint32_t k, double epsilon, double delta,
                      const CountOptions& options = {});

}  // namespace dynamite
