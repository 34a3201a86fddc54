#include "aolab/process_oracle.hpp"

#include <cerrno>
#include <charconv>
#include <csignal>
#include <cstring>
#include <memory>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>

#include "aolab/errors.hpp"
#include "aolab/policy.hpp"

namespace aolab {

ProcessOracle::ProcessOracle(std::vector<std::string> argv, std::chrono::milliseconds timeout)
    : argv_(std::move(argv)), timeout_(timeout) {
  if (argv_.empty()) throw std::invalid_argument("process oracle needs a command");
  std::signal(SIGPIPE, SIG_IGN);
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe(in_pipe) != 0) throw OracleError(fmt::format("pipe: {}", std::strerror(errno)));
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw OracleError(fmt::format("pipe: {}", std::strerror(errno)));
  }
  pid_ = ::fork();
  if (pid_ < 0) throw OracleError(fmt::format("fork: {}", std::strerror(errno)));
  if (pid_ == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    std::vector<char*> args;
    for (auto& a : argv_) args.push_back(a.data());
    args.push_back(nullptr);
    ::execvp(args[0], args.data());
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  ::fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  ::fcntl(from_child_, F_SETFD, FD_CLOEXEC);
}

ProcessOracle::~ProcessOracle() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    if (::waitpid(pid_, &status, WNOHANG) == 0) {
      ::kill(pid_, SIGTERM);
      ::waitpid(pid_, &status, 0);
    }
  }
}

std::string ProcessOracle::read_line() {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw OracleError(fmt::format("oracle '{}' timed out", argv_.front()));
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw OracleError(fmt::format("poll: {}", std::strerror(errno)));
    }
    if (ready == 0) throw OracleError(fmt::format("oracle '{}' timed out", argv_.front()));
    char chunk[4096];
    const ssize_t got = ::read(from_child_, chunk, sizeof chunk);
    if (got < 0) {
      if (errno == EINTR) continue;
      throw OracleError(fmt::format("read: {}", std::strerror(errno)));
    }
    if (got == 0) throw OracleError(fmt::format("oracle '{}' closed its output", argv_.front()));
    buffer_.append(chunk, static_cast<std::size_t>(got));
  }
}

Action ProcessOracle::operator()(HistoryView history) {
  std::string request = encode_history(history);
  request.push_back('\n');
  std::size_t written = 0;
  while (written < request.size()) {
    const ssize_t n = ::write(to_child_, request.data() + written, request.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw OracleError(fmt::format("oracle '{}' stopped reading: {}", argv_.front(), std::strerror(errno)));
    }
    written += static_cast<std::size_t>(n);
  }
  std::string line = read_line();
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
  std::uint32_t symbol = 0;
  auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), symbol);
  if (line.empty() || ec != std::errc{} || ptr != line.data() + line.size())
    throw OracleError(fmt::format("oracle '{}' replied '{}', expected an action symbol", argv_.front(), line));
  return Action{symbol};
}

Policy process_policy(std::vector<std::string> argv, std::chrono::milliseconds timeout) {
  auto process = std::make_shared<ProcessOracle>(std::move(argv), timeout);
  return checked_policy([process](HistoryView history) { return (*process)(history); });
}

}  // namespace aolab
