#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cablerouting {

// Line-delimited JSON frames exchanged with an agent process over its
// standard streams. Each request carries an id which the reply echoes.
//
//   init      -> ready      instance summary, E and M of the initial state
//   propose   -> proposal   op, kappa, state; reply holds E probabilities
//   observe   -> ack        op, state, chosen rows, reward
//   shutdown  -> bye
//   error                   either side, free text
//
// The state is sent flat (row-major E x M x 2) next to its E and M.
inline constexpr int kProtocolVersion = 1;

enum class FrameType { kInit, kReady, kPropose, kProposal, kObserve, kAck, kShutdown, kBye, kError };

std::string to_string(FrameType type);

struct InstanceSummary {
  std::string name;
  int nodes = 0;
  int hv = 0;
  int mv = 0;
  double capacity = 0.0;
  double extent_km = 0.0;

  bool operator==(const InstanceSummary&) const = default;
};

struct Frame {
  FrameType type = FrameType::kError;
  long id = 0;
  InstanceSummary instance;  // init
  int links = 0;             // E: init, propose, observe
  int max_nodes = 0;         // M: init, propose, observe
  int op = 0;                // propose, observe
  int kappa = 0;             // propose
  std::vector<double> state;  // propose, observe
  std::vector<double> probs;  // proposal
  std::vector<int> loci;      // observe: chosen rows
  double reward = 0.0;        // observe
  std::string text;           // error

  bool operator==(const Frame&) const = default;
};

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One line without the trailing newline. Field order is fixed per type.
std::string encode_frame(const Frame& frame);
// Throws ProtocolError on malformed or inconsistent input.
Frame decode_frame(std::string_view line);

inline constexpr double kProbabilitySumTolerance = 1e-6;

// Empty when the vector is a usable proposal over `links` rows, otherwise the
// reason it was refused. No renormalisation is attempted.
std::string validate_proposal(const std::vector<double>& probs, int links);

}  // namespace cablerouting
