#pragma once

#include <string>

#include "json.hpp"

#include "dynamite/coloring.hpp"
#include "dynamite/dynamite.hpp"
#include "dynamite/planted.hpp"
#include "dynamite/spectral.hpp"

namespace dynamite {

using Json = nlohmann::json;

/// Graph JSON: {"n": <int>, "edges": [[u, v], ...]} with 0-indexed vertices.
Graph graph_from_json(const Json& j);
Json graph_to_json(const Graph& graph);
Graph read_graph_file(const std::string& path);

/// Wall-clock time is only emitted when `include_timing` is set, so that
/// reports of identical runs serialize identically by default.
Json to_json(const EstimateReport& report, bool include_timing = false);
Json to_json(const CountResult& result, bool include_timing = false);
Json to_json(const SpectralSummary& summary);
Json to_json(const VarianceProfile& profile);
Json to_json(const SandwichVerdict& verdict);

/// Sidecar for generated planted graphs: communities and parameters.
Json planted_sidecar(const PartitionedGraph& graph, const PlantedParams& params);

}  // namespace dynamite
