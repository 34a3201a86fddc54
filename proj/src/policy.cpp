#include "aolab/policy.hpp"

#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "aolab/errors.hpp"

namespace aolab {

Policy constant_policy(Action action) {
  return [action](HistoryView) { return action; };
}

Policy table_policy(std::uint64_t seed, std::uint32_t memory, std::uint32_t num_actions) {
  if (num_actions == 0) throw std::invalid_argument("table policy needs a nonempty alphabet");
  if (memory > 16) throw std::invalid_argument("table policy memory is limited to 16 actions");
  std::size_t contexts = 1;
  for (std::uint32_t i = 0; i < memory; ++i) {
    if (contexts > (std::size_t{1} << 24) / num_actions) throw std::invalid_argument("table policy too large");
    contexts *= num_actions;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, num_actions - 1);
  auto table = std::make_shared<std::vector<std::uint32_t>>(contexts);
  for (auto& entry : *table) entry = pick(rng);
  return [table, memory, num_actions](HistoryView history) {
    std::size_t context = 0;
    for (std::uint32_t back = memory; back >= 1; --back) {
      const std::size_t n = history.size();
      const std::uint32_t symbol = n >= back ? history[n - back].action.symbol % num_actions : 0;
      context = context * num_actions + symbol;
    }
    return Action{(*table)[context]};
  };
}

Policy flipped_policy(Policy inner, std::uint32_t num_actions) {
  if (num_actions == 0) throw std::invalid_argument("flipped policy needs a nonempty alphabet");
  return [inner = std::move(inner), num_actions](HistoryView history) {
    return Action{(inner(history).symbol + 1) % num_actions};
  };
}

std::uint64_t history_digest(HistoryView history) {
  std::uint64_t hash = 14695981039346656037ull;
  auto mix = [&hash](std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
      hash ^= (value >> (8 * i)) & 0xffu;
      hash *= 1099511628211ull;
    }
  };
  mix(history.size());
  for (const Step& step : history) {
    mix(step.action.symbol);
    mix(step.percept.observation);
    mix(static_cast<std::uint64_t>(step.percept.reward.num()));
    mix(static_cast<std::uint64_t>(step.percept.reward.den()));
  }
  return hash;
}

Action CheckedOracle::operator()(HistoryView history) {
  std::lock_guard lock(mutex_);
  const Action action = inner_(history);
  ++queries_;
  const auto [it, inserted] = seen_.emplace(history_digest(history), action);
  if (!inserted) {
    ++replays_;
    if (it->second != action)
      throw NondeterminismError(fmt::format("oracle answered {} then {} for the same {}-step history",
                                            it->second.symbol, action.symbol, history.size()));
  }
  return action;
}

Policy checked_policy(Policy inner) {
  auto oracle = std::make_shared<CheckedOracle>(std::move(inner));
  return [oracle](HistoryView history) { return (*oracle)(history); };
}

}  // namespace aolab
