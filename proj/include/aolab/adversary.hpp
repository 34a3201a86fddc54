#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "aolab/discount.hpp"
#include "aolab/environment.hpp"
#include "aolab/fsm.hpp"

namespace aolab {

enum class LockVariant { part1, part3 };

/// Parameters of the lock environments. Action 0 is "up", action 1 "down".
struct LockParams {
  LockVariant variant = LockVariant::part1;
  /// Switch-on time T >= 1: before T the lock environment equals its twin.
  std::uint64_t switch_time = 1;
  /// Penalty for "down" in the part-3 pair, in (0, 1/2).
  Rational epsilon{1, 4};

  /// Throws std::invalid_argument.
  void validate() const;
};

/// (mu, nu) for the horizon lock. mu pays 1/2 for up and 0 for down. nu
/// agrees with mu before T; from T on, down pays 1 once some t' >= T has
/// t' + H_{t'}(1/4) <= t with down at every step of [t', t' + H_{t'}(1/4)]
/// (the current step included), and 0 otherwise.
std::pair<EnvironmentPtr, EnvironmentPtr> part1_pair(const LockParams& params, const DiscountFunction& d);

/// (mu, nu) for the doubling lock, meant for the quadratic discount. mu pays
/// 1/2 for up and 1/2 - epsilon for down. nu agrees with mu except that from
/// T on, down pays 1 once some t' >= T has down at every step of [t', 2t']
/// (the current step included).
std::pair<EnvironmentPtr, EnvironmentPtr> part3_pair(const LockParams& params);

/// Environment rewarding exactly the actions `oracle` would not take: the
/// reward at step t is 1 iff y_t differs from oracle(history_{<t}). Oracle
/// queries are serialized, so a stateful oracle is called from one thread at
/// a time. The alphabet is binary.
EnvironmentPtr diagonal_env(Policy oracle);

/// Two-member class where the first member is a decoy indistinguishable
/// from the second until down has been played twice. Decoy: up pays 1/2,
/// down 1/2 - epsilon. True member: the first down pays 1/2 - epsilon and
/// opens the lock, after which every down pays 1.
std::vector<FsmSpec> lock_class_specs(Rational epsilon = Rational(1, 4));

}  // namespace aolab
