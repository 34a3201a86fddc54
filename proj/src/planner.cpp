#include "aolab/planner.hpp"

#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "aolab/errors.hpp"

namespace aolab {

namespace {

/// sum_{d=1}^{h+1} actions^d, saturating.
std::uint64_t tree_size(std::uint64_t actions, std::uint64_t h) {
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t level = 1;
  std::uint64_t total = 0;
  for (std::uint64_t d = 0; d <= h; ++d) {
    if (level > cap / actions) return cap;
    level *= actions;
    if (total > cap - level) return cap;
    total += level;
  }
  return total;
}

}  // namespace

void Planner::count_expansion() {
  if (++expansions_ > options_.node_budget) throw BudgetExceeded(options_.node_budget, options_.node_budget, true);
}

double Planner::search_memo(Simulation& sim, std::uint64_t depth) {
  const auto fp = sim.fingerprint();
  if (!fp) throw std::logic_error("memoized planning needs fingerprints at every node");
  auto& table = memo_[depth];
  if (auto it = table.find(*fp); it != table.end()) return it->second.value;
  double best = -1.0;
  std::uint32_t best_action = 0;
  for (std::uint32_t a = 0; a < actions_; ++a) {
    count_expansion();
    const Percept p = sim.step(Action{a});
    double v = weights_[depth] * p.reward.to_double();
    if (depth < horizon_) v = v + search_memo(sim, depth + 1);
    sim.undo();
    if (v > best) {
      best = v;
      best_action = a;
    }
  }
  table.emplace(*fp, Entry{best, best_action});
  return best;
}

double Planner::search_tree(Simulation& sim, std::uint64_t depth) {
  double best = -1.0;
  auto& mine = suffix_[depth];
  for (std::uint32_t a = 0; a < actions_; ++a) {
    count_expansion();
    const Percept p = sim.step(Action{a});
    double v = weights_[depth] * p.reward.to_double();
    if (depth < horizon_) v = v + search_tree(sim, depth + 1);
    sim.undo();
    if (v > best) {
      best = v;
      mine[0] = Action{a};
      if (depth < horizon_) {
        const auto& child = suffix_[depth + 1];
        std::copy(child.begin(), child.end(), mine.begin() + 1);
      }
    }
  }
  return best;
}

Plan Planner::best_plan(const Environment& model, const Simulation& position, std::uint64_t t, std::uint64_t h,
                        const DiscountFunction& d) {
  if (t == 0) throw std::invalid_argument("time indices start at 1");
  horizon_ = h;
  actions_ = static_cast<std::uint32_t>(model.num_actions());
  expansions_ = 0;
  weights_ = d.normalized_weights(t, h);

  auto sim = position.clone();
  Plan plan;
  plan.actions.reserve(h + 1);
  const bool memo = options_.memoize && sim->fingerprint().has_value();
  double best = 0.0;
  if (memo) {
    if (memo_.size() < h + 1) memo_.resize(h + 1);
    for (std::uint64_t k = 0; k <= h; ++k) memo_[k].clear();
    best = search_memo(*sim, 0);
    for (std::uint64_t depth = 0; depth <= h; ++depth) {
      const auto& entry = memo_[depth].at(*sim->fingerprint());
      plan.actions.push_back(Action{entry.action});
      sim->step(Action{entry.action});
    }
  } else {
    const std::uint64_t required = tree_size(actions_, h);
    if (required > options_.node_budget) throw BudgetExceeded(required, options_.node_budget, false);
    suffix_.resize(h + 1);
    for (std::uint64_t k = 0; k <= h; ++k) suffix_[k].assign(h + 1 - k, Action{});
    best = search_tree(*sim, 0);
    plan.actions = suffix_[0];
  }
  plan.value = make_truncated(best, d.tail_ratio(t, h));
  return plan;
}

Plan Planner::epsilon_plan(const Environment& model, const Simulation& position, std::uint64_t t, double epsilon,
                           const DiscountFunction& d) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument(fmt::format("planning tolerance must lie in (0,1), got {}", epsilon));
  return best_plan(model, position, t, d.effective_horizon(t, 1.0 - epsilon), d);
}

Plan best_plan(const Environment& model, HistoryView history, std::uint64_t h, const DiscountFunction& d,
               PlannerOptions options) {
  Planner planner(options);
  return planner.best_plan(model, *model.replay(history), history.size() + 1, h, d);
}

double optimal_value(const Environment& model, HistoryView history, double epsilon, const DiscountFunction& d,
                     PlannerOptions options) {
  Planner planner(options);
  return planner.epsilon_plan(model, *model.replay(history), history.size() + 1, epsilon, d).value.value;
}

Action optimal_action(const Environment& model, HistoryView history, double epsilon, const DiscountFunction& d,
                      PlannerOptions options) {
  Planner planner(options);
  return planner.epsilon_plan(model, *model.replay(history), history.size() + 1, epsilon, d).actions.front();
}

bool is_h_different(const Environment& mu, const Environment& nu, HistoryView history, std::uint64_t h,
                    double epsilon, const DiscountFunction& d, PlannerOptions options) {
  Planner planner(options);
  auto mu_sim = mu.replay(history);
  auto nu_sim = nu.replay(history);
  std::uint64_t t = history.size() + 1;
  for (std::uint64_t k = 0; k <= h; ++k, ++t) {
    const Action action = planner.epsilon_plan(mu, *mu_sim, t, epsilon, d).actions.front();
    if (action.symbol >= nu.num_actions()) return true;
    if (mu_sim->step(action) != nu_sim->step(action)) return true;
  }
  return false;
}

}  // namespace aolab
