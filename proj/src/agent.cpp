#include "aolab/agent.hpp"

#include <fmt/format.h>

namespace aolab {

namespace {

std::uint32_t shared_alphabet(const EnvironmentClass& models) {
  const auto first = models.get(1);
  if (!first) throw std::invalid_argument("agent needs a nonempty model class");
  const std::size_t n = first->num_actions();
  if (auto size = models.size()) {
    for (std::size_t i = 2; i <= *size; ++i)
      if (models.at(i).num_actions() != n)
        throw std::invalid_argument(fmt::format("model {} has {} actions, model 1 has {}", i,
                                                models.at(i).num_actions(), n));
  }
  return static_cast<std::uint32_t>(n);
}

}  // namespace

GreedyAgent::GreedyAgent(EnvironmentClass models, DiscountFunction discount, AgentOptions options)
    : tracker_(models, 1),
      discount_(std::move(discount)),
      options_(options),
      planner_(options.planner),
      num_actions_(shared_alphabet(models)) {}

Decision GreedyAgent::act(HistoryView history) {
  const std::size_t index = tracker_.update(history);
  const Plan plan =
      planner_.epsilon_plan(tracker_.model(), tracker_.position(), history.size() + 1, options_.epsilon_plan, discount_);
  return Decision{plan.actions.front(), false, index};
}

ExplorerAgent::ExplorerAgent(EnvironmentClass models, DiscountFunction discount, AgentOptions options)
    : greedy_(std::move(models), std::move(discount), options),
      schedule_(options.seed, greedy_.num_actions(), options.burst_scale) {}

Decision ExplorerAgent::act(HistoryView history) {
  const std::uint64_t t = history.size() + 1;
  if (t > schedule_.materialized()) schedule_.materialize(std::max<std::uint64_t>(2 * t, 1024));
  if (schedule_.chi_bar(t)) return Decision{schedule_.psi(t), true, greedy_.observe(history)};
  return greedy_.act(history);
}

}  // namespace aolab
