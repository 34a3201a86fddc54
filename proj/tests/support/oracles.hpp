#pragma once

// Brute-force reference implementations used only by tests. Each one follows
// the textbook definition directly and shares no code path with the library
// beyond the environment step interface.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "aolab/discount.hpp"
#include "aolab/environment.hpp"

namespace oracle {

/// gamma_k straight from the definition of each closed-form kind.
inline long double geometric_weight(long double gamma, std::uint64_t k) {
  long double w = 1.0L;
  for (std::uint64_t i = 0; i < k; ++i) w *= gamma;
  return w;
}

inline long double quadratic_weight(std::uint64_t k) {
  return 1.0L / (static_cast<long double>(k) * static_cast<long double>(k + 1));
}

/// sum_{k=t}^{t+terms-1} weight(k), forward order.
inline long double partial_sum(const std::function<long double(std::uint64_t)>& weight, std::uint64_t t,
                               std::uint64_t terms) {
  long double sum = 0.0L;
  for (std::uint64_t k = t; k < t + terms; ++k) sum += weight(k);
  return sum;
}

/// H_t(p) by scanning h = 0, 1, ... over raw weights and a reference tail.
inline std::uint64_t scan_horizon(const std::function<long double(std::uint64_t)>& weight, long double tail,
                                  std::uint64_t t, double p, std::uint64_t limit = 100'000'000) {
  long double acc = 0.0L;
  for (std::uint64_t h = 0; h < limit; ++h) {
    acc += weight(t + h);
    if (acc / tail > static_cast<long double>(p)) return h;
  }
  return std::numeric_limits<std::uint64_t>::max();
}

/// Normalized discounted sum with forward accumulation.
inline double discounted(const aolab::DiscountFunction& d, std::uint64_t t, const std::vector<double>& rewards) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < rewards.size(); ++i) acc += d.weight(t + i) * rewards[i];
  return static_cast<double>(acc / d.tail_mass(t));
}

struct BrutePlan {
  std::vector<aolab::Action> actions;
  double value = -1.0;
};

/// Enumerates every binary-or-wider action sequence of length h + 1 in
/// lexicographic order, replays each from scratch, and keeps the first
/// strict maximum. Values use the same backward summation as the planner so
/// equal reward streams compare equal bit for bit.
inline BrutePlan enumerate_plans(const aolab::Environment& env, aolab::HistoryView history, std::uint64_t h,
                                 const aolab::DiscountFunction& d) {
  const std::uint64_t t = history.size() + 1;
  const std::size_t n = env.num_actions();
  const auto weights = d.normalized_weights(t, h);
  std::vector<std::uint32_t> digits(h + 1, 0);
  BrutePlan best;
  for (;;) {
    auto sim = env.replay(history);
    std::vector<double> rewards;
    for (auto a : digits) rewards.push_back(sim->step(aolab::Action{a}).reward.to_double());
    const double v = aolab::backward_sum(weights, rewards);
    if (v > best.value) {
      best.value = v;
      best.actions.clear();
      for (auto a : digits) best.actions.push_back(aolab::Action{a});
    }
    std::size_t pos = digits.size();
    while (pos > 0 && digits[pos - 1] + 1 == n) digits[--pos] = 0;
    if (pos == 0) break;
    ++digits[pos - 1];
  }
  return best;
}

/// Part-1 lock reward at step s from the literal block condition, scanning
/// every candidate start t' >= T.
inline double part1_reward(const std::vector<std::uint32_t>& actions, std::uint64_t s, std::uint64_t T,
                           const std::function<std::uint64_t(std::uint64_t)>& horizon) {
  const std::uint32_t a = actions[s - 1];
  if (a == 0) return 0.5;
  if (s < T) return 0.0;
  for (std::uint64_t tp = T; tp <= s; ++tp) {
    const std::uint64_t end = tp + horizon(tp);
    if (end > s) continue;
    bool all_down = true;
    for (std::uint64_t k = tp; k <= end; ++k) all_down = all_down && actions[k - 1] == 1;
    if (all_down) return 1.0;
  }
  return 0.0;
}

/// Part-3 lock reward at step s: down pays 1 once some t' >= T has down on
/// every step of [t', 2t'] with 2t' <= s.
inline double part3_reward(const std::vector<std::uint32_t>& actions, std::uint64_t s, std::uint64_t T,
                           double epsilon) {
  const std::uint32_t a = actions[s - 1];
  if (a == 0) return 0.5;
  if (s >= T) {
    for (std::uint64_t tp = T; 2 * tp <= s; ++tp) {
      bool all_down = true;
      for (std::uint64_t k = tp; k <= 2 * tp; ++k) all_down = all_down && actions[k - 1] == 1;
      if (all_down) return 1.0;
    }
  }
  return 0.5 - epsilon;
}

}  // namespace oracle
