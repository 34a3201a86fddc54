#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "aolab/history.hpp"

namespace aolab {

/// A cursor positioned after some history of one environment. `step` feeds
/// the next action and returns the percept; `undo` reverts the most recent
/// step taken on this cursor (never past the point where it was created or
/// cloned). Planners branch with step/undo so history-heavy environments do
/// not pay for copies at every node.
class Simulation {
 public:
  virtual ~Simulation() = default;

  virtual Percept step(Action action) = 0;
  virtual void undo() = 0;
  virtual std::unique_ptr<Simulation> clone() const = 0;

  /// Identifier of the internal state. Two cursors of the same environment
  /// at the same time index with equal fingerprints must produce identical
  /// percepts for every future action sequence.
  virtual std::optional<std::uint64_t> fingerprint() const { return std::nullopt; }
};

/// Deterministic environment mu(y x_{<t} y_t) = x_t. Implementations are
/// immutable once built and safe to query from several threads.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::size_t num_actions() const = 0;
  virtual std::size_t num_observations() const { return 1; }
  virtual std::string describe() const = 0;

  /// Fresh cursor at the empty history.
  virtual std::unique_ptr<Simulation> start() const = 0;

  /// Cursor positioned after `history`, driven by its recorded actions. The
  /// recorded percepts are not checked.
  std::unique_ptr<Simulation> replay(HistoryView history) const;

  /// The percept after taking `action` at `history`. Throws AlphabetError
  /// when an action falls outside this environment's alphabet.
  Percept percept(HistoryView history, Action action) const;

  void check_action(Action action) const;
};

using EnvironmentPtr = std::shared_ptr<const Environment>;

/// Ordered model class mu_1, mu_2, ... with stable 1-based indexing. Either a
/// finite list or a lazily enumerated sequence.
class EnvironmentClass {
 public:
  /// Returns the environment with the given 1-based index, or nullptr when
  /// the enumeration has ended.
  using Generator = std::function<EnvironmentPtr(std::size_t index)>;

  EnvironmentClass() = default;
  explicit EnvironmentClass(std::vector<EnvironmentPtr> members);
  static EnvironmentClass lazy(Generator generator);

  EnvironmentClass(const EnvironmentClass& other);
  EnvironmentClass& operator=(const EnvironmentClass& other);

  void push_back(EnvironmentPtr env);

  /// nullptr past the end of a finite (or exhausted lazy) class.
  EnvironmentPtr get(std::size_t index) const;
  /// Throws std::out_of_range past the end.
  const Environment& at(std::size_t index) const;
  /// Known size of a finite class; nullopt for lazy classes.
  std::optional<std::size_t> size() const;

 private:
  mutable std::mutex mutex_;
  mutable std::vector<EnvironmentPtr> members_;
  Generator generator_;
  mutable bool exhausted_ = false;
};

/// True iff env reproduces every recorded percept when replayed.
bool is_consistent(const Environment& env, HistoryView history);

/// Least index i >= from_index whose environment is consistent with history.
/// Throws ClassExhausted when a finite class runs out of members.
std::size_t first_consistent(const EnvironmentClass& models, HistoryView history, std::size_t from_index = 1);

/// Incremental first_consistent along a growing history. Since an
/// inconsistent model stays inconsistent, only the current candidate is
/// stepped per new percept, and later candidates are replayed on demand.
class ConsistencyTracker {
 public:
  explicit ConsistencyTracker(EnvironmentClass models, std::size_t from_index = 1);

  /// Catches up with `history`, which must extend everything seen so far.
  std::size_t update(HistoryView history);

  std::size_t index() const { return index_; }
  const Environment& model() const { return *model_; }
  /// Cursor of the current model positioned after the processed history.
  const Simulation& position() const { return *position_; }
  std::size_t processed() const { return processed_; }

 private:
  void advance_past(HistoryView history);

  EnvironmentClass models_;
  std::size_t index_;
  EnvironmentPtr model_;
  std::unique_ptr<Simulation> position_;
  std::size_t processed_ = 0;
};

/// History to action. Policies may keep internal state but must be
/// deterministic functions of the histories they are shown.
using Policy = std::function<Action(HistoryView)>;

/// Play-out sequence of length n. Failures are rethrown as PlayoutError
/// carrying the step index and the original exception.
History playout(const Environment& env, const Policy& policy, std::size_t n);

}  // namespace aolab
