#include <gtest/gtest.h>

#include <random>

#include "aolab/adversary.hpp"
#include "aolab/errors.hpp"
#include "aolab/planner.hpp"
#include "aolab/policy.hpp"
#include "aolab/process_oracle.hpp"
#include "support/oracles.hpp"

using namespace aolab;

namespace {

std::vector<std::uint32_t> random_actions(std::mt19937_64& rng, std::size_t n, double down_bias) {
  std::bernoulli_distribution down(down_bias);
  std::vector<std::uint32_t> a(n);
  for (auto& x : a) x = down(rng) ? 1 : 0;
  return a;
}

std::vector<double> rewards_of(const Environment& env, const std::vector<std::uint32_t>& actions) {
  auto sim = env.start();
  std::vector<double> r;
  for (auto a : actions) r.push_back(sim->step(Action{a}).reward.to_double());
  return r;
}

}  // namespace

TEST(LockParams, Validation) {
  EXPECT_THROW((LockParams{LockVariant::part1, 0, {}}).validate(), std::invalid_argument);
  EXPECT_THROW((LockParams{LockVariant::part3, 1, Rational(1, 2)}).validate(), std::invalid_argument);
  EXPECT_THROW((LockParams{LockVariant::part3, 1, Rational(0)}).validate(), std::invalid_argument);
  EXPECT_NO_THROW((LockParams{LockVariant::part3, 5, Rational(1, 3)}).validate());
}

TEST(Part1, MatchesLiteralBlockScan) {
  std::mt19937_64 rng(1);
  for (double gamma : {0.5, 0.8, 0.95}) {
    const auto d = DiscountFunction::geometric(gamma);
    for (std::uint64_t T : {1u, 4u, 9u}) {
      const auto [mu, nu] = part1_pair(LockParams{LockVariant::part1, T, {}}, d);
      const auto horizon = [&](std::uint64_t t) { return d.effective_horizon(t, 0.25); };
      for (int trial = 0; trial < 40; ++trial) {
        const auto actions = random_actions(rng, 80, 0.85);
        const auto r = rewards_of(*nu, actions);
        for (std::uint64_t s = 1; s <= actions.size(); ++s)
          ASSERT_EQ(r[s - 1], oracle::part1_reward(actions, s, T, horizon)) << "gamma=" << gamma << " s=" << s;
      }
    }
  }
}

TEST(Part1, QuadraticDiscountBlocksGrowWithTime) {
  const auto d = DiscountFunction::quadratic();
  const auto [mu, nu] = part1_pair(LockParams{LockVariant::part1, 3, {}}, d);
  const auto horizon = [&](std::uint64_t t) { return d.effective_horizon(t, 0.25); };
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto actions = random_actions(rng, 60, 0.9);
    const auto r = rewards_of(*nu, actions);
    for (std::uint64_t s = 1; s <= actions.size(); ++s)
      ASSERT_EQ(r[s - 1], oracle::part1_reward(actions, s, 3, horizon)) << s;
  }
}

TEST(Part1, AllDownUnlocksForever) {
  const auto d = DiscountFunction::geometric(0.8);
  const auto [mu, nu] = part1_pair(LockParams{LockVariant::part1, 5, {}}, d);
  const History h = playout(*nu, constant_policy(kDown), 60);
  const std::uint64_t open = 5 + d.effective_horizon(5, 0.25);
  for (std::uint64_t s = 1; s <= 60; ++s) EXPECT_EQ(h[s - 1].percept.reward, s >= open ? Rational(1) : Rational(0)) << s;
}

TEST(Part1, NeverSustainingDownLeavesAQuarterGap) {
  const auto d = DiscountFunction::geometric(0.8);
  const auto [mu, nu] = part1_pair(LockParams{LockVariant::part1, 1, {}}, d);
  // H_t(1/4) = 1 here, so downs never adjacent never open the lock.
  ASSERT_EQ(d.effective_horizon(10, 0.25), 1u);
  const Policy alternate = [](HistoryView h) { return h.size() % 2 ? kDown : kUp; };
  const History h = playout(*nu, alternate, 200);
  for (std::uint64_t t : {40u, 80u, 120u}) {
    const double best = optimal_value(*nu, h.prefix(t - 1), 1.0 / 64.0, d);
    std::vector<double> r;
    const auto horizon = d.effective_horizon(t, 1.0 - 1.0 / 64.0);
    for (std::uint64_t k = t; k <= t + horizon; ++k) r.push_back(h[k - 1].percept.reward.to_double());
    const double realized = truncated_value(d, t, r).value;
    EXPECT_GE(best - realized, 0.25) << t;
  }
}

TEST(Part3, MatchesLiteralBlockScan) {
  std::mt19937_64 rng(3);
  for (std::uint64_t T : {1u, 3u, 10u}) {
    const Rational eps(1, 4);
    const auto [mu, nu] = part3_pair(LockParams{LockVariant::part3, T, eps});
    for (int trial = 0; trial < 60; ++trial) {
      const auto actions = random_actions(rng, 90, 0.9);
      const auto r = rewards_of(*nu, actions);
      for (std::uint64_t s = 1; s <= actions.size(); ++s)
        ASSERT_EQ(r[s - 1], oracle::part3_reward(actions, s, T, 0.25)) << "T=" << T << " s=" << s;
    }
  }
}

TEST(Locks, AgreeWithTwinBeforeSwitchTime) {
  // Exhaustive over all action strings of length min(T - 1, 12).
  for (std::uint64_t T : {5u, 13u}) {
    const auto [mu1, nu1] = part1_pair(LockParams{LockVariant::part1, T, {}}, DiscountFunction::geometric(0.5));
    const auto [mu3, nu3] = part3_pair(LockParams{LockVariant::part3, T, Rational(1, 4)});
    const std::uint64_t n = std::min<std::uint64_t>(T - 1, 12);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      auto a1 = mu1->start(), b1 = nu1->start(), a3 = mu3->start(), b3 = nu3->start();
      for (std::uint64_t k = 0; k < n; ++k) {
        const Action y{static_cast<std::uint32_t>((bits >> k) & 1)};
        ASSERT_EQ(a1->step(y), b1->step(y));
        ASSERT_EQ(a3->step(y), b3->step(y));
      }
    }
  }
}

TEST(Locks, PropertyUnlockPersists) {
  std::mt19937_64 rng(4);
  const auto d = DiscountFunction::geometric(0.7);
  const auto [m1, nu1] = part1_pair(LockParams{LockVariant::part1, 2, {}}, d);
  const auto [m3, nu3] = part3_pair(LockParams{LockVariant::part3, 2, Rational(1, 8)});
  for (const auto& env : {nu1, nu3}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto actions = random_actions(rng, 70, 0.8);
      auto sim = env->start();
      bool open = false;
      for (auto a : actions) {
        const Percept p = sim->step(Action{a});
        if (a == 1) {
          if (open) ASSERT_EQ(p.reward, Rational(1)) << env->describe();
          open = open || p.reward == Rational(1);
        }
      }
    }
  }
}

TEST(Locks, FingerprintsPredictTheFuture) {
  // Cursors at equal time with equal fingerprints must agree on every continuation.
  std::mt19937_64 rng(5);
  const auto [m3, nu3] = part3_pair(LockParams{LockVariant::part3, 4, Rational(1, 4)});
  const auto [m1, nu1] = part1_pair(LockParams{LockVariant::part1, 4, {}}, DiscountFunction::geometric(0.8));
  for (const auto& env : {nu1, nu3}) {
    for (int trial = 0; trial < 300; ++trial) {
      auto a = env->start();
      auto b = env->start();
      for (int k = 0; k < 12; ++k) {
        a->step(Action{static_cast<std::uint32_t>(rng() % 2)});
        b->step(Action{static_cast<std::uint32_t>(rng() % 2)});
      }
      if (a->fingerprint() != b->fingerprint()) continue;
      const auto suffix = random_actions(rng, 40, 0.7);
      for (auto y : suffix) ASSERT_EQ(a->step(Action{y}), b->step(Action{y}));
    }
  }
}

TEST(Part3, AllDownValueUnderQuadratic) {
  const auto d = DiscountFunction::quadratic();
  const Rational eps(1, 4);
  const auto [mu, nu] = part3_pair(LockParams{LockVariant::part3, 1, eps});
  const std::uint64_t t = 100;
  const auto horizon = d.effective_horizon(t, 1.0 - 1e-4);
  // Up until t - 1, then down forever: the run starting at t opens the lock at 2t.
  const Policy switch_down = [t](HistoryView h) { return h.size() + 1 < t ? kUp : kDown; };
  const History g = playout(*nu, switch_down, t + horizon);
  std::vector<double> r;
  for (std::uint64_t k = t; k <= t + horizon; ++k) r.push_back(g[k - 1].percept.reward.to_double());
  const auto v = truncated_value(d, t, r);
  EXPECT_NEAR(v.value, 0.75 - 0.125, 1e-3);
  EXPECT_GE(v.value + v.error_bound, 5.0 / 8.0);
}

TEST(Part3, NeverSustainingDownStaysAtHalf) {
  const auto d = DiscountFunction::quadratic();
  const auto [mu, nu] = part3_pair(LockParams{LockVariant::part3, 1, Rational(1, 4)});
  const Policy alternate = [](HistoryView h) { return h.size() % 2 ? kDown : kUp; };
  const History h = playout(*nu, alternate, 3000);
  for (std::uint64_t t : {1u, 10u, 20u}) {
    std::vector<double> r;
    const auto horizon = d.effective_horizon(t, 1.0 - 1.0 / 128.0);
    for (std::uint64_t k = t; k <= t + horizon; ++k) r.push_back(h[k - 1].percept.reward.to_double());
    EXPECT_LE(truncated_value(d, t, r).value, 0.5 + 1e-12);
  }
}

TEST(Diagonal, NeverRewardsItsOracle) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint64_t seed = rng();
    const auto memory = static_cast<std::uint32_t>(rng() % 8);
    const auto env = diagonal_env(table_policy(seed, memory));
    const History own = playout(*env, table_policy(seed, memory), 1000);
    for (std::size_t i = 0; i < own.size(); ++i) ASSERT_EQ(own[i].percept.reward, Rational(0));
    const History flip = playout(*env, flipped_policy(table_policy(seed, memory)), 1000);
    for (std::size_t i = 0; i < flip.size(); ++i) ASSERT_EQ(flip[i].percept.reward, Rational(1));
  }
}

TEST(Diagonal, OptimalValueIsOne) {
  const auto env = diagonal_env(table_policy(3, 4));
  const History own = playout(*env, table_policy(3, 4), 40);
  const double v = optimal_value(*env, own, 1.0 / 128.0, DiscountFunction::geometric(0.5));
  EXPECT_GE(v, 1.0 - 1.0 / 128.0);
}

TEST(Policies, TableDependsOnlyOnRecentActions) {
  const Policy p = table_policy(21, 2);
  History a;
  History b;
  a.append(kUp, Percept{0, Rational(0)});
  b.append(kDown, Percept{0, Rational(1)});
  for (auto* h : {&a, &b}) {
    h->append(kDown, Percept{0, Rational(1, 2)});
    h->append(kUp, Percept{0, Rational(1, 4)});
  }
  EXPECT_EQ(p(a), p(b));
  EXPECT_EQ(flipped_policy(p)(a).symbol, 1 - p(a).symbol);
  EXPECT_THROW(table_policy(1, 40), std::invalid_argument);
}

TEST(CheckedOracle, DetectsNondeterminism) {
  unsigned calls = 0;
  CheckedOracle checked([&calls](HistoryView) { return Action{calls++ % 2}; });
  History h;
  EXPECT_EQ(checked(h), Action{0});
  EXPECT_THROW(checked(h), NondeterminismError);
  CheckedOracle steady(constant_policy(kDown));
  EXPECT_EQ(steady(h), kDown);
  EXPECT_EQ(steady(h), kDown);
  EXPECT_EQ(steady.replays(), 1u);
}

TEST(ProcessOracle, ParityHelperDrivesTheDiagonal) {
  const std::vector<std::string> command = {AOLAB_ORACLE_HELPER, "parity"};
  const Policy local = [](HistoryView h) { return Action{static_cast<std::uint32_t>(h.size() % 2)}; };
  const auto env = diagonal_env(process_policy(command, std::chrono::milliseconds(5000)));
  const History own = playout(*env, local, 30);
  for (std::size_t i = 0; i < own.size(); ++i) EXPECT_EQ(own[i].percept.reward, Rational(0)) << i;
  const double v = optimal_value(*env, own, 1.0 / 16.0, DiscountFunction::geometric(0.5));
  EXPECT_GE(v, 1.0 - 1.0 / 16.0);
}

TEST(ProcessOracle, Failures) {
  const auto timeout = std::chrono::milliseconds(300);
  History h;
  EXPECT_THROW(process_policy({AOLAB_ORACLE_HELPER, "slow"}, timeout)(h), OracleError);
  EXPECT_THROW(process_policy({AOLAB_ORACLE_HELPER, "crash"}, timeout)(h), OracleError);
  EXPECT_THROW(process_policy({AOLAB_ORACLE_HELPER, "garbage"}, timeout)(h), OracleError);
  EXPECT_THROW(process_policy({"/nonexistent/oracle"}, timeout)(h), OracleError);
  const Policy flaky = process_policy({AOLAB_ORACLE_HELPER, "flaky"}, timeout);
  flaky(h);
  EXPECT_THROW(flaky(h), NondeterminismError);
}
