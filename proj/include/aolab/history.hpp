#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aolab/rational.hpp"

namespace aolab {

/// Action symbol. The binary adversary environments read 0 as "up" and 1 as
/// "down".
struct Action {
  std::uint32_t symbol = 0;

  friend constexpr auto operator<=>(Action, Action) = default;
};

inline constexpr Action kUp{0};
inline constexpr Action kDown{1};

/// Observation/reward pair. Environments without observations use symbol 0.
struct Percept {
  std::uint32_t observation = 0;
  Rational reward;

  friend bool operator==(const Percept&, const Percept&) = default;
};

struct Step {
  Action action;
  Percept percept;

  friend bool operator==(const Step&, const Step&) = default;
};

/// Read-only view of y_1 x_1 ... y_{t-1} x_{t-1}; element i holds step i + 1.
using HistoryView = std::span<const Step>;

/// Append-only interaction history. With n recorded steps the next action is
/// taken at time index t = n + 1.
class History {
 public:
  History() = default;
  explicit History(std::vector<Step> steps) : steps_(std::move(steps)) {}

  void append(Action action, Percept percept) { steps_.push_back(Step{action, percept}); }
  void append(const Step& step) { steps_.push_back(step); }
  void reserve(std::size_t n) { steps_.reserve(n); }

  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  std::uint64_t next_time() const { return steps_.size() + 1; }

  const Step& operator[](std::size_t i) const { return steps_[i]; }
  HistoryView view() const { return steps_; }
  operator HistoryView() const { return steps_; }

  /// Prefix y x_{<t} holding the first `n` steps.
  HistoryView prefix(std::size_t n) const { return HistoryView(steps_).first(n); }

  friend bool operator==(const History&, const History&) = default;

 private:
  std::vector<Step> steps_;
};

/// Text form used by the oracle protocol and the CLI: whitespace-separated
/// tokens alternating an action symbol and a percept, where a percept is a
/// reward rational "n/d", prefixed by "<obs>:" when the observation is not 0.
/// Example: "0 1/2 1 0/1".
std::string encode_history(HistoryView history);
History decode_history(std::string_view text);

}  // namespace aolab
