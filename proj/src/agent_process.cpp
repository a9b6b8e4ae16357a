#include "cablerouting/agent_process.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

namespace cablerouting {

namespace {

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

}  // namespace

AgentProcess::AgentProcess(const std::string& command, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  // A dead child must surface as an error on write, not kill us.
  std::signal(SIGPIPE, SIG_IGN);
  int in[2];
  int out[2];
  if (pipe(in) != 0) throw AgentError(errno_text("pipe"));
  if (pipe(out) != 0) {
    close(in[0]);
    close(in[1]);
    throw AgentError(errno_text("pipe"));
  }
  pid_ = fork();
  if (pid_ < 0) throw AgentError(errno_text("fork"));
  if (pid_ == 0) {
    dup2(in[0], STDIN_FILENO);
    dup2(out[1], STDOUT_FILENO);
    close(in[0]);
    close(in[1]);
    close(out[0]);
    close(out[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in[0]);
  close(out[1]);
  to_child_ = in[1];
  from_child_ = out[0];
  fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  fcntl(from_child_, F_SETFD, FD_CLOEXEC);
}

AgentProcess::~AgentProcess() {
  if (pid_ > 0) {
    if (!dead_) {
      try {
        shutdown();
      } catch (...) {
      }
    }
    reap(std::chrono::milliseconds(0));
  }
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
}

void AgentProcess::write_line(const std::string& line) {
  std::string data = line + '\n';
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      dead_ = true;
      throw AgentError(errno_text("write to agent"));
    }
    done += static_cast<std::size_t>(n);
  }
}

bool AgentProcess::read_line(std::string& line, std::chrono::steady_clock::time_point deadline) {
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return true;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return false;
    pollfd p{from_child_, POLLIN, 0};
    const int r = poll(&p, 1, static_cast<int>(left.count()));
    if (r < 0) {
      if (errno == EINTR) continue;
      throw AgentError(errno_text("poll"));
    }
    if (r == 0) return false;
    char chunk[65536];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      dead_ = true;
      throw AgentError(errno_text("read from agent"));
    }
    if (n == 0) {
      dead_ = true;
      throw AgentError("agent closed its output");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

Frame AgentProcess::request(Frame frame) {
  if (!alive()) throw AgentError("agent process is not running");
  frame.id = next_id_++;
  write_line(encode_frame(frame));
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  std::string line;
  for (;;) {
    if (!read_line(line, deadline)) {
      throw AgentTimeout("agent did not answer " + to_string(frame.type) + " within " +
                         std::to_string(timeout_.count()) + " ms");
    }
    Frame reply;
    try {
      reply = decode_frame(line);
    } catch (const ProtocolError&) {
      ++dropped_;
      continue;
    }
    if (reply.id != frame.id) {
      ++dropped_;
      continue;
    }
    if (reply.type == FrameType::kError) throw AgentError("agent error: " + reply.text);
    return reply;
  }
}

int AgentProcess::reap(std::chrono::milliseconds grace) {
  if (pid_ <= 0) return -1;
  const auto deadline = std::chrono::steady_clock::now() + grace;
  int status = 0;
  for (;;) {
    const pid_t r = waitpid(pid_, &status, WNOHANG);
    if (r == pid_) {
      pid_ = -1;
      dead_ = true;
      return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    if (r < 0) {
      pid_ = -1;
      dead_ = true;
      return -1;
    }
    if (std::chrono::steady_clock::now() >= deadline) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  kill(pid_, SIGKILL);
  waitpid(pid_, &status, 0);
  pid_ = -1;
  dead_ = true;
  return -1;
}

int AgentProcess::shutdown() {
  if (pid_ <= 0) return -1;
  if (!dead_) {
    try {
      Frame f;
      f.type = FrameType::kShutdown;
      const auto saved = timeout_;
      timeout_ = kShutdownGrace;
      try {
        request(f);
      } catch (const AgentError&) {
      }
      timeout_ = saved;
    } catch (...) {
    }
  }
  close(to_child_);
  to_child_ = -1;
  return reap(kShutdownGrace);
}

}  // namespace cablerouting
