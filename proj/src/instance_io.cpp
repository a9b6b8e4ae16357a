#include <fstream>
#include <sstream>

#include "cablerouting/instance.hpp"
#include "json.hpp"

namespace cablerouting {

using ojson = nlohmann::ordered_json;

namespace {

const char* level_name(Level level) { return level == Level::kHv ? "HV" : "MV"; }

Level level_from_string(const std::string& s) {
  if (s == "HV") return Level::kHv;
  if (s == "MV") return Level::kMv;
  throw InstanceError("unknown substation level '" + s + "'");
}

void write_array(std::ostringstream& out, const char* key, const ojson& arr,
                 bool trailing_comma) {
  out << "  \"" << key << "\": [";
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out << (i == 0 ? "\n    " : ",\n    ") << arr[i].dump();
  }
  out << (arr.empty() ? "]" : "\n  ]") << (trailing_comma ? ",\n" : "\n");
}

template <class T>
T required(const ojson& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InstanceError(std::string("missing field '") + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InstanceError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string serialize_instance(const Instance& inst) {
  ojson nodes = ojson::array();
  for (const RoadNode& n : inst.graph.nodes()) {
    nodes.push_back(ojson{{"id", n.id}, {"x", n.x}, {"y", n.y}, {"kind", to_string(n.kind)}});
  }
  ojson edges = ojson::array();
  for (const RoadEdge& e : inst.graph.edges()) {
    edges.push_back(ojson{{"id", e.id},
                          {"u", e.u},
                          {"v", e.v},
                          {"length", e.length},
                          {"c_tr", e.trench_cost},
                          {"c_ca", e.cable_cost},
                          {"c_max", e.max_cables}});
  }
  ojson subs = ojson::array();
  for (const Substation& s : inst.substations) {
    subs.push_back(ojson{{"node", s.node_id}, {"level", level_name(s.level)}, {"demand", s.demand}});
  }

  std::ostringstream out;
  out << "{\n";
  out << "  \"schema_version\": " << ojson(kInstanceSchema).dump() << ",\n";
  out << "  \"name\": " << ojson(inst.name).dump() << ",\n";
  out << "  \"grid_n\": " << inst.grid_n << ",\n";
  out << "  \"block_km\": " << ojson(inst.block_km).dump() << ",\n";
  out << "  \"seed\": " << inst.seed << ",\n";
  write_array(out, "nodes", nodes, true);
  write_array(out, "edges", edges, true);
  write_array(out, "substations", subs, true);
  out << "  \"Q\": " << ojson(inst.feeder_capacity).dump() << "\n";
  out << "}\n";
  return out.str();
}

Instance deserialize_instance(std::string_view text, std::vector<std::string>* warnings) {
  ojson doc;
  try {
    doc = ojson::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw InstanceError("instance parse error at byte offset " + std::to_string(e.byte) +
                        ": " + e.what());
  }
  if (!doc.is_object()) throw InstanceError("instance document must be an object");
  const auto schema = required<std::string>(doc, "schema_version");
  if (schema != kInstanceSchema) {
    throw InstanceError("schema mismatch: expected " + std::string(kInstanceSchema) +
                        ", got " + schema);
  }

  Instance inst;
  inst.name = required<std::string>(doc, "name");
  inst.grid_n = required<int>(doc, "grid_n");
  inst.block_km = required<double>(doc, "block_km");
  inst.seed = required<std::uint64_t>(doc, "seed");
  inst.feeder_capacity = required<double>(doc, "Q");

  try {
    const ojson& nodes = doc.at("nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const ojson& n = nodes[i];
      if (required<int>(n, "id") != static_cast<int>(i)) {
        throw InstanceError("node ids must be dense and ordered");
      }
      inst.graph.add_node(required<double>(n, "x"), required<double>(n, "y"),
                          node_kind_from_string(required<std::string>(n, "kind")));
    }
    const ojson& edges = doc.at("edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const ojson& e = edges[i];
      if (required<int>(e, "id") != static_cast<int>(i)) {
        throw InstanceError("edge ids must be dense and ordered");
      }
      EdgeCosts c{required<double>(e, "c_tr"), required<double>(e, "c_ca"),
                  required<int>(e, "c_max")};
      inst.graph.add_edge(required<int>(e, "u"), required<int>(e, "v"),
                          required<double>(e, "length"), c);
    }
    for (const ojson& s : doc.at("substations")) {
      inst.substations.push_back(Substation{required<int>(s, "node"),
                                            level_from_string(required<std::string>(s, "level")),
                                            required<double>(s, "demand")});
    }
  } catch (const GraphError& e) {
    throw InstanceError(std::string("invalid road graph: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw InstanceError(std::string("malformed instance: ") + e.what());
  }

  std::vector<std::string> soft = validate_instance(inst);
  if (warnings) *warnings = std::move(soft);
  return inst;
}

Instance load_instance_file(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError("cannot open instance file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_instance(buf.str(), warnings);
}

void save_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InstanceError("cannot write instance file " + path);
  out << serialize_instance(inst);
}

}  // namespace cablerouting
