#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "aolab/discount.hpp"
#include "aolab/environment.hpp"

namespace aolab {

struct PlannerOptions {
  /// Maximum environment steps expanded per plan.
  std::uint64_t node_budget = std::uint64_t{1} << 26;
  /// Merge subtrees whose cursors report equal fingerprints at equal depth.
  bool memoize = true;
};

/// Horizon-limited optimal action sequence with its certified value: the
/// truncated value assumes a zero tail, so error_bound is the normalized
/// discount mass beyond t + h.
struct Plan {
  std::vector<Action> actions;
  TruncatedValue value;
};

/// Exhaustive expectimax over all |Y|^(h+1) action sequences of a known
/// deterministic environment. Among maximizing sequences the lexicographically
/// least one (in alphabet order) is returned. A Planner reuses its memo
/// tables between calls and is therefore confined to one thread; the free
/// functions below build a temporary one.
class Planner {
 public:
  explicit Planner(PlannerOptions options = {}) : options_(options) {}

  /// Searches from `position`, a cursor of `model` at time index t.
  Plan best_plan(const Environment& model, const Simulation& position, std::uint64_t t, std::uint64_t h,
                 const DiscountFunction& d);

  /// Plan over the effective horizon H_t(1 - epsilon).
  Plan epsilon_plan(const Environment& model, const Simulation& position, std::uint64_t t, double epsilon,
                    const DiscountFunction& d);

  const PlannerOptions& options() const { return options_; }
  std::uint64_t last_expansions() const { return expansions_; }

 private:
  struct Entry {
    double value;
    std::uint32_t action;
  };

  double search_memo(Simulation& sim, std::uint64_t depth);
  double search_tree(Simulation& sim, std::uint64_t depth);
  void count_expansion();

  PlannerOptions options_;
  std::uint64_t horizon_ = 0;
  std::uint32_t actions_ = 0;
  std::uint64_t expansions_ = 0;
  std::vector<double> weights_;
  std::vector<std::unordered_map<std::uint64_t, Entry>> memo_;
  std::vector<std::vector<Action>> suffix_;
};

/// Exhaustive search from `history`; see Planner::best_plan.
Plan best_plan(const Environment& model, HistoryView history, std::uint64_t h, const DiscountFunction& d,
               PlannerOptions options = {});

/// V*_mu(history) up to the one-sided error: V* - epsilon <= v <= V*.
double optimal_value(const Environment& model, HistoryView history, double epsilon, const DiscountFunction& d,
                     PlannerOptions options = {});

/// First action of the lexicographically least epsilon-optimal plan.
Action optimal_action(const Environment& model, HistoryView history, double epsilon, const DiscountFunction& d,
                      PlannerOptions options = {});

/// Whether following mu's epsilon-optimal policy (re-planned every step) for
/// h + 1 steps from `history` produces a percept nu disagrees with.
bool is_h_different(const Environment& mu, const Environment& nu, HistoryView history, std::uint64_t h,
                    double epsilon, const DiscountFunction& d, PlannerOptions options = {});

}  // namespace aolab
