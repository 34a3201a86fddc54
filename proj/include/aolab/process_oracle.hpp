#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "aolab/environment.hpp"

namespace aolab {

/// Policy oracle running as a child process. Each query writes one line, the
/// encode_history() form of the full history, to the child's stdin and reads
/// one line holding an action symbol from its stdout. The oracle is treated
/// as stateless: every query carries the whole history.
class ProcessOracle {
 public:
  ProcessOracle(std::vector<std::string> argv, std::chrono::milliseconds timeout);
  ~ProcessOracle();

  ProcessOracle(const ProcessOracle&) = delete;
  ProcessOracle& operator=(const ProcessOracle&) = delete;

  /// Throws OracleError on timeout, malformed reply or child exit.
  Action operator()(HistoryView history);

 private:
  std::string read_line();

  std::vector<std::string> argv_;
  std::chrono::milliseconds timeout_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

/// Process oracle behind a CheckedOracle, ready to use as a Policy.
Policy process_policy(std::vector<std::string> argv, std::chrono::milliseconds timeout);

}  // namespace aolab
