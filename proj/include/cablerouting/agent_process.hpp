#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <sys/types.h>

#include "cablerouting/protocol.hpp"

namespace cablerouting {

class AgentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AgentTimeout : public AgentError {
 public:
  using AgentError::AgentError;
};

// An agent running as a child process (`/bin/sh -c command`), spoken to with
// one frame per line on its stdin/stdout. stderr is inherited. Requests are
// serialised; a reply whose id does not match the pending request (a late
// answer to a timed-out request) is dropped, as is any line that does not
// decode.
class AgentProcess {
 public:
  static constexpr std::chrono::milliseconds kDefaultTimeout{10000};
  static constexpr std::chrono::milliseconds kShutdownGrace{5000};

  explicit AgentProcess(const std::string& command,
                        std::chrono::milliseconds timeout = kDefaultTimeout);
  ~AgentProcess();
  AgentProcess(const AgentProcess&) = delete;
  AgentProcess& operator=(const AgentProcess&) = delete;

  // Sends the frame (its id is overwritten) and waits for the reply with the
  // same id. Throws AgentTimeout, or AgentError when the process is gone or
  // answers with an error frame.
  Frame request(Frame frame);

  // Sends shutdown, waits for bye and exit; kills the child after the grace
  // period. Returns the exit status (-1 if it had to be killed).
  int shutdown();

  bool alive() const { return pid_ > 0 && !dead_; }
  int dropped_lines() const { return dropped_; }

 private:
  void write_line(const std::string& line);
  // False on timeout.
  bool read_line(std::string& line, std::chrono::steady_clock::time_point deadline);
  int reap(std::chrono::milliseconds grace);

  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  long next_id_ = 1;
  int dropped_ = 0;
  bool dead_ = false;
  std::chrono::milliseconds timeout_;
};

}  // namespace cablerouting
