#include "cablerouting/protocol.hpp"

#include <cmath>
#include <json.hpp>

namespace cablerouting {

using ordered_json = nlohmann::ordered_json;

namespace {

struct TypeName {
  FrameType type;
  const char* name;
};

constexpr TypeName kTypeNames[] = {
    {FrameType::kInit, "init"},         {FrameType::kReady, "ready"},
    {FrameType::kPropose, "propose"},   {FrameType::kProposal, "proposal"},
    {FrameType::kObserve, "observe"},   {FrameType::kAck, "ack"},
    {FrameType::kShutdown, "shutdown"}, {FrameType::kBye, "bye"},
    {FrameType::kError, "error"},
};

FrameType type_from_string(const std::string& s) {
  for (const TypeName& t : kTypeNames) {
    if (s == t.name) return t.type;
  }
  throw ProtocolError("unknown frame type '" + s + "'");
}

void check_state_size(const Frame& f) {
  if (f.links < 0 || f.max_nodes < 0) throw ProtocolError("negative tensor dimension");
  const std::size_t expected = static_cast<std::size_t>(f.links) * f.max_nodes * 2;
  if (f.state.size() != expected) {
    throw ProtocolError("state has " + std::to_string(f.state.size()) + " values, expected " +
                        std::to_string(expected));
  }
}

}  // namespace

std::string to_string(FrameType type) {
  for (const TypeName& t : kTypeNames) {
    if (t.type == type) return t.name;
  }
  return "error";
}

std::string encode_frame(const Frame& f) {
  ordered_json j;
  j["v"] = kProtocolVersion;
  j["type"] = to_string(f.type);
  j["id"] = f.id;
  switch (f.type) {
    case FrameType::kInit:
      j["instance"] = {{"name", f.instance.name},         {"nodes", f.instance.nodes},
                       {"hv", f.instance.hv},             {"mv", f.instance.mv},
                       {"capacity", f.instance.capacity}, {"extent_km", f.instance.extent_km}};
      j["E"] = f.links;
      j["M"] = f.max_nodes;
      break;
    case FrameType::kPropose:
      j["op"] = f.op;
      j["kappa"] = f.kappa;
      j["E"] = f.links;
      j["M"] = f.max_nodes;
      j["state"] = f.state;
      break;
    case FrameType::kProposal:
      j["probs"] = f.probs;
      break;
    case FrameType::kObserve:
      j["op"] = f.op;
      j["E"] = f.links;
      j["M"] = f.max_nodes;
      j["state"] = f.state;
      j["loci"] = f.loci;
      j["reward"] = f.reward;
      break;
    case FrameType::kError:
      j["text"] = f.text;
      break;
    case FrameType::kReady:
    case FrameType::kAck:
    case FrameType::kShutdown:
    case FrameType::kBye:
      break;
  }
  return j.dump();
}

Frame decode_frame(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const ordered_json::parse_error& e) {
    throw ProtocolError(std::string("malformed frame: ") + e.what());
  }
  try {
    if (!j.is_object()) throw ProtocolError("frame is not an object");
    if (j.at("v").get<int>() != kProtocolVersion) {
      throw ProtocolError("unsupported protocol version " + j.at("v").dump());
    }
    Frame f;
    f.type = type_from_string(j.at("type").get<std::string>());
    f.id = j.at("id").get<long>();
    switch (f.type) {
      case FrameType::kInit: {
        const auto& in = j.at("instance");
        f.instance.name = in.at("name").get<std::string>();
        f.instance.nodes = in.at("nodes").get<int>();
        f.instance.hv = in.at("hv").get<int>();
        f.instance.mv = in.at("mv").get<int>();
        f.instance.capacity = in.at("capacity").get<double>();
        f.instance.extent_km = in.at("extent_km").get<double>();
        f.links = j.at("E").get<int>();
        f.max_nodes = j.at("M").get<int>();
        break;
      }
      case FrameType::kPropose:
        f.op = j.at("op").get<int>();
        f.kappa = j.at("kappa").get<int>();
        f.links = j.at("E").get<int>();
        f.max_nodes = j.at("M").get<int>();
        f.state = j.at("state").get<std::vector<double>>();
        check_state_size(f);
        break;
      case FrameType::kProposal:
        f.probs = j.at("probs").get<std::vector<double>>();
        break;
      case FrameType::kObserve:
        f.op = j.at("op").get<int>();
        f.links = j.at("E").get<int>();
        f.max_nodes = j.at("M").get<int>();
        f.state = j.at("state").get<std::vector<double>>();
        check_state_size(f);
        f.loci = j.at("loci").get<std::vector<int>>();
        f.reward = j.at("reward").get<double>();
        break;
      case FrameType::kError:
        f.text = j.at("text").get<std::string>();
        break;
      case FrameType::kReady:
      case FrameType::kAck:
      case FrameType::kShutdown:
      case FrameType::kBye:
        break;
    }
    return f;
  } catch (const ordered_json::exception& e) {
    throw ProtocolError(std::string("bad frame field: ") + e.what());
  }
}

std::string validate_proposal(const std::vector<double>& probs, int links) {
  if (static_cast<int>(probs.size()) != links) {
    return "expected " + std::to_string(links) + " probabilities, got " +
           std::to_string(probs.size());
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p)) return "non-finite probability";
    if (p < 0.0) return "negative probability";
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
    return "probabilities sum to " + std::to_string(sum);
  }
  return {};
}

}  // namespace cablerouting
