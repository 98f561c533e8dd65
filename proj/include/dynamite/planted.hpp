#pragma once

#include <cstdint>
#include <vector>

#include "dynamite/coloring.hpp"

namespace dynamite {

/// Simplified planted-partition model: r equal communities of size n/r,
/// within-community edge probability p, cross probability q/(r-1) per pair.
struct PlantedParams {
  std::size_t n = 0;
  std::size_t r = 1;
  double p = 0.0;
  double q = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
  double cross_probability() const { return r > 1 ? q / static_cast<double>(r - 1) : 0.0; }
};

struct PartitionedGraph {
  Graph graph;
  std::vector<std::size_t> communities;  // vertex -> community 0..r-1
  std::size_t community_count = 0;

  std::vector<Vertex> members(std::size_t community) const;
};

/// Vertices are assigned to communities in contiguous blocks of n/r.
PartitionedGraph generate_planted(const PlantedParams& params);

/// Edges with exactly one endpoint in community j.
std::vector<Edge> cut_set(const PartitionedGraph& graph, std::size_t community);

struct ZetaEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  double radius = 0.0;  // 95% normal-approximation half-width
  std::uint64_t samples = 0;
  std::size_t cut_size = 0;
  bool exact = false;
};

enum class ZetaMode { kAuto, kExact, kSampled };

struct ZetaOptions {
  ZetaMode mode = ZetaMode::kAuto;
  std::uint64_t samples = 1000;
  // Steps between recorded samples; 0 means use the warm-up length.
  std::uint64_t thinning = 0;
  std::uint64_t seed = 0;
};

/// Probability that some cut edge of community j is monochromatic under a
/// uniform proper coloring of the graph with the cut removed. Exact mode
/// enumerates; sampled mode uses warm-started lazy Glauber dynamics.
ZetaEstimate zeta_estimate(const PartitionedGraph& graph, std::size_t community, std::uint32_t k,
                           const ZetaOptions& options = {});

}  // namespace dynamite
