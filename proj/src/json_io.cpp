#include "dynamite/json_io.hpp"

#include <fstream>

namespace dynamite {

Graph graph_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw InvalidArgument("graph JSON must be an object with \"n\" and \"edges\"");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 0)
    throw InvalidArgument("graph JSON \"n\" must be a nonnegative integer");
  if (!j["edges"].is_array()) throw InvalidArgument("graph JSON \"edges\" must be an array");
  Graph g(j["n"].get<std::size_t>());
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        e[0].get<long long>() < 0 || e[1].get<long long>() < 0)
      throw InvalidArgument("graph JSON edges must be pairs of nonnegative integers");
    g.add_edge(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  return g;
}

Json graph_to_json(const Graph& graph) {
  Json edges = Json::array();
  for (const auto& [u, v] : graph.edges()) edges.push_back({u, v});
  return Json{{"n", graph.vertex_count()}, {"edges", edges}};
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open graph file " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw InvalidArgument("graph file " + path + " is not valid JSON: " + e.what());
  }
  return graph_from_json(j);
}

Json to_json(const EstimateReport& report, bool include_timing) {
  Json iterations = Json::array();
  for (const auto& it : report.iterations) {
    iterations.push_back({{"samples", it.samples},
                          {"mean", it.mean},
                          {"variance", it.variance},
                          {"variance_bound", it.variance_bound},
                          {"radius", it.radius}});
  }
  Json j{{"method", report.method},
         {"estimate", report.estimate},
         {"termination", to_string(report.termination)},
         {"total_steps", report.total_steps},
         {"warmup_steps", report.warmup_steps},
         {"trace_length", report.trace_length},
         {"lambda", report.lambda},
         {"epsilon", report.epsilon},
         {"delta", report.delta},
         {"seed", report.seed},
         {"iterations", iterations}};
  if (include_timing) j["wall_clock_seconds"] = report.wall_clock_seconds;
  return j;
}

Json to_json(const CountResult& result, bool include_timing) {
  Json phases = Json::array();
  for (std::size_t i = 0; i < result.phase_reports.size(); ++i) {
    phases.push_back({{"index", i + 1},
                      {"edge", {result.edge_order[i].first, result.edge_order[i].second}},
                      {"ratio", result.ratios[i]},
                      {"lambda", result.phase_lambdas[i]},
                      {"report", to_json(result.phase_reports[i], include_timing)}});
  }
  Json order = Json::array();
  for (const auto& [u, v] : result.edge_order) order.push_back({u, v});
  return Json{{"estimator", result.estimator},
              {"log_estimate", result.log_estimate},
              {"estimate", result.estimate_decimal},
              {"epsilon", result.epsilon},
              {"delta", result.delta},
              {"phase_epsilon", result.phase_epsilon},
              {"phase_delta", result.phase_delta},
              {"relative_error_bound", result.relative_error_bound},
              {"lambda_defaulted", result.lambda_defaulted},
              {"total_steps", result.total_steps},
              {"edge_order", order},
              {"phases", phases}};
}

Json to_json(const SpectralSummary& s) {
  std::vector<double> pi(s.pi.data(), s.pi.data() + s.pi.size());
  return Json{{"pi", pi},          {"lambda", s.lambda},     {"tau_rel", s.tau_rel},     {"mean", s.mean},
              {"variance", s.variance}, {"pi_min", s.pi_min}, {"reversible", s.reversible}};
}

Json to_json(const VarianceProfile& p) {
  return Json{{"T", p.horizon}, {"trace_variance", p.variance}, {"autocovariances", p.autocovariances}};
}

Json to_json(const SandwichVerdict& v) {
  return Json{{"lower", v.lower}, {"value", v.value}, {"upper", v.upper}, {"pass", v.pass}};
}

Json planted_sidecar(const PartitionedGraph& graph, const PlantedParams& params) {
  return Json{{"communities", graph.communities},
              {"params",
               {{"n", params.n}, {"r", params.r}, {"p", params.p}, {"q", params.q}, {"seed", params.seed}}}};
}

}  // namespace dynamite
