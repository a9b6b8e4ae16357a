// Minimal agent speaking the frame protocol on stdin/stdout, for tests.
//
//   stub_agent [--mode M] [--delay-ms N] [--log FILE]
//
// Modes: uniform (1/E each), onehot (all mass on row 0), badsum (entries sum
// to 0.9), slow (uniform after --delay-ms), crash (exit after init),
// garbage (a junk line and a stale id before every real reply), error
// (answer propose with an error frame).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "cablerouting/protocol.hpp"

using namespace cablerouting;

int main(int argc, char** argv) {
  std::string mode = "uniform";
  int delay_ms = 0;
  std::string log_path;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (!std::strcmp(argv[i], "--mode")) mode = argv[i + 1];
    else if (!std::strcmp(argv[i], "--delay-ms")) delay_ms = std::atoi(argv[i + 1]);
    else if (!std::strcmp(argv[i], "--log")) log_path = argv[i + 1];
  }
  std::ofstream log;
  if (!log_path.empty()) log.open(log_path, std::ios::app);

  auto send = [&](const Frame& f) {
    if (mode == "garbage") {
      std::cout << "not a frame\n";
      Frame stale = f;
      stale.id = f.id + 100000;
      std::cout << encode_frame(stale) << '\n';
    }
    std::cout << encode_frame(f) << '\n' << std::flush;
  };

  std::string line;
  while (std::getline(std::cin, line)) {
    Frame in;
    try {
      in = decode_frame(line);
    } catch (const ProtocolError& e) {
      Frame err;
      err.type = FrameType::kError;
      err.text = e.what();
      send(err);
      continue;
    }
    if (log.is_open()) log << to_string(in.type) << ' ' << in.op << ' ' << in.reward << std::endl;
    Frame out;
    out.id = in.id;
    switch (in.type) {
      case FrameType::kInit:
        out.type = FrameType::kReady;
        send(out);
        if (mode == "crash") return 3;
        break;
      case FrameType::kPropose: {
        if (mode == "slow") std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
        if (mode == "error") {
          out.type = FrameType::kError;
          out.text = "refusing";
          send(out);
          break;
        }
        out.type = FrameType::kProposal;
        const int e = in.links;
        out.probs.assign(e, e > 0 ? 1.0 / e : 0.0);
        if (mode == "onehot" && e > 0) {
          out.probs.assign(e, 0.0);
          out.probs[0] = 1.0;
        }
        if (mode == "badsum") {
          for (double& p : out.probs) p *= 0.9;
        }
        send(out);
        break;
      }
      case FrameType::kObserve:
        out.type = FrameType::kAck;
        send(out);
        break;
      case FrameType::kShutdown:
        out.type = FrameType::kBye;
        send(out);
        return 0;
      default:
        out.type = FrameType::kError;
        out.text = "unexpected " + to_string(in.type);
        send(out);
        break;
    }
  }
  return 0;
}
