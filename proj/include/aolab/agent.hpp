#pragma once

#include <cstdint>

#include "aolab/discount.hpp"
#include "aolab/environment.hpp"
#include "aolab/planner.hpp"
#include "aolab/schedule.hpp"

namespace aolab {

struct AgentOptions {
  std::uint64_t seed = 0;
  /// Tolerance of the exploitation planner.
  double epsilon_plan = 1.0 / 1024.0;
  /// b(i) = floor(burst_scale * log2 i).
  double burst_scale = 1.0;
  PlannerOptions planner;
};

struct Decision {
  Action action;
  bool exploring = false;
  /// i_t, the first-consistent model used at this step.
  std::size_t model_index = 0;
};

/// Exploration-free baseline: always plays the epsilon-optimal action of the
/// first model in the class consistent with the history.
class GreedyAgent {
 public:
  GreedyAgent(EnvironmentClass models, DiscountFunction discount, AgentOptions options = {});

  /// `history` must extend every history previously passed in.
  Decision act(HistoryView history);

  /// Refreshes i_t without choosing an action.
  std::size_t observe(HistoryView history) { return tracker_.update(history); }

  std::size_t model_index() const { return tracker_.index(); }
  std::uint32_t num_actions() const { return num_actions_; }

 private:
  ConsistencyTracker tracker_;
  DiscountFunction discount_;
  AgentOptions options_;
  Planner planner_;
  std::uint32_t num_actions_;
};

/// Weak asymptotically optimal explorer: plays psi_t inside exploration
/// bursts (chi_bar_t = 1) and otherwise the epsilon-optimal action of the
/// first consistent model. Deterministic given (seed, history sequence).
class ExplorerAgent {
 public:
  ExplorerAgent(EnvironmentClass models, DiscountFunction discount, AgentOptions options = {});

  Decision act(HistoryView history);

  std::size_t model_index() const { return greedy_.model_index(); }
  const ExplorationSchedule& schedule() const { return schedule_; }

 private:
  GreedyAgent greedy_;
  ExplorationSchedule schedule_;
};

}  // namespace aolab
