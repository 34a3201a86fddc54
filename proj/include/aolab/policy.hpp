#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "aolab/environment.hpp"

namespace aolab {

/// Always plays the same action.
Policy constant_policy(Action action);

/// Deterministic table policy: the action is a fixed random function of the
/// last `memory` actions (missing early actions read as 0).
Policy table_policy(std::uint64_t seed, std::uint32_t memory, std::uint32_t num_actions = 2);

/// Plays (inner(h) + 1) mod num_actions; the bit flip for binary alphabets.
Policy flipped_policy(Policy inner, std::uint32_t num_actions = 2);

/// Wraps a policy oracle and remembers its answer for every history it has
/// been shown; a different answer for a repeated history raises
/// NondeterminismError.
class CheckedOracle {
 public:
  explicit CheckedOracle(Policy inner) : inner_(std::move(inner)) {}

  Action operator()(HistoryView history);

  std::size_t queries() const { return queries_; }
  std::size_t replays() const { return replays_; }

 private:
  Policy inner_;
  std::mutex mutex_;
  std::unordered_map<std::uint64_t, Action> seen_;
  std::size_t queries_ = 0;
  std::size_t replays_ = 0;
};

/// CheckedOracle as a Policy (shares the wrapper between copies).
Policy checked_policy(Policy inner);

/// 64-bit FNV-1a digest of a history.
std::uint64_t history_digest(HistoryView history);

}  // namespace aolab
