#include <map>
#include <sstream>

#include "cablerouting/solution.hpp"
#include "json.hpp"

namespace cablerouting {

using ojson = nlohmann::ordered_json;

std::string serialize_solution(const Solution& s, const Instance& inst) {
  const CostBreakdown cost = evaluate_f2(s, inst.graph);
  std::ostringstream out;
  out << "{\n";
  out << "  \"schema_version\": " << ojson(kSolutionSchema).dump() << ",\n";
  out << "  \"instance_name\": " << ojson(inst.name).dump() << ",\n";
  out << "  \"feeders\": [";
  for (std::size_t f = 0; f < s.feeders.size(); ++f) {
    const Feeder& feeder = s.feeders[f];
    ojson stations = ojson::array();
    for (int st : feeder.stations) stations.push_back(inst.node_of(st));
    ojson routes = ojson::array();
    for (const auto& r : feeder.routes) routes.push_back(r ? ojson(r->nodes) : ojson(nullptr));
    ojson obj{{"stations", stations}, {"routes", routes}};
    out << (f == 0 ? "\n    " : ",\n    ") << obj.dump();
  }
  out << (s.feeders.empty() ? "],\n" : "\n  ],\n");
  ojson c{{"trench_cost", cost.trench_cost},
          {"cable_cost", cost.cable_cost},
          {"total", cost.total},
          {"total_cable_length", cost.total_cable_length}};
  out << "  \"cost_breakdown\": " << c.dump() << "\n";
  out << "}\n";
  return out.str();
}

Solution deserialize_solution(const std::string& text, const Instance& inst) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw StructuralError("solution parse error at byte offset " + std::to_string(e.byte));
  }
  if (doc.value("schema_version", std::string()) != kSolutionSchema) {
    throw StructuralError("solution schema mismatch");
  }
  std::map<int, int> station_at_node;
  for (int i = 0; i < static_cast<int>(inst.substations.size()); ++i) {
    station_at_node[inst.node_of(i)] = i;
  }
  const RoadGraph& g = inst.graph;
  Solution s;
  try {
    for (const ojson& f : doc.at("feeders")) {
      Feeder feeder;
      for (int node : f.at("stations").get<std::vector<int>>()) {
        auto it = station_at_node.find(node);
        if (it == station_at_node.end()) {
          throw StructuralError("node " + std::to_string(node) + " is not a substation");
        }
        feeder.stations.push_back(it->second);
      }
      for (const ojson& r : f.at("routes")) {
        if (r.is_null()) {
          feeder.routes.emplace_back();
          continue;
        }
        RoutedPath path;
        path.nodes = r.get<std::vector<int>>();
        for (std::size_t k = 0; k + 1 < path.nodes.size(); ++k) {
          auto e = g.find_edge(path.nodes[k], path.nodes[k + 1]);
          if (!e) throw StructuralError("route uses a non-existent road segment");
          path.edges.push_back(*e);
          path.length += g.edge(*e).length;
        }
        feeder.routes.push_back(std::move(path));
      }
      feeder.load = feeder_load(feeder.stations, inst);
      s.feeders.push_back(std::move(feeder));
    }
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("malformed solution: ") + e.what());
  }
  return s;
}

}  // namespace cablerouting
