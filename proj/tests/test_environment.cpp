#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include <unistd.h>

#include "aolab/adversary.hpp"
#include "aolab/errors.hpp"
#include "aolab/fsm.hpp"
#include "aolab/io.hpp"
#include "aolab/policy.hpp"

using namespace aolab;

namespace {

FsmSpec constant_half() {
  FsmSpec spec = FsmSpec::blank("half", 1, 2);
  for (auto& tr : spec.transitions) tr.reward = Rational(1, 2);
  return spec;
}

// Two states; action 1 toggles the state, rewards depend on (state, action).
FsmSpec toggle() {
  FsmSpec spec = FsmSpec::blank("toggle", 2, 2);
  spec.at(0, 0) = {0, 0, Rational(0)};
  spec.at(0, 1) = {1, 0, Rational(1, 4)};
  spec.at(1, 0) = {1, 1, Rational(1)};
  spec.at(1, 1) = {0, 0, Rational(3, 4)};
  return spec;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("aolab_env_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Rational, ArithmeticAndParsing) {
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
  EXPECT_EQ(Rational(1, -2).num(), -1);
  EXPECT_EQ(Rational(1, 2) - Rational(1, 4), Rational(1, 4));
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
  EXPECT_EQ(Rational(2, 3) * Rational(3, 4), Rational(1, 2));
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_EQ(Rational::parse("3/6"), Rational(1, 2));
  EXPECT_EQ(Rational::parse("1"), Rational(1));
  EXPECT_EQ(Rational(5, 10).to_string(), "1/2");
  EXPECT_THROW(Rational::parse("1/"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("x"), std::invalid_argument);
  EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(HistoryText, RoundTrip) {
  History h;
  h.append(kUp, Percept{0, Rational(1, 2)});
  h.append(kDown, Percept{3, Rational(0)});
  const std::string text = encode_history(h);
  EXPECT_EQ(text, "0 1/2 1 3:0/1");
  EXPECT_EQ(decode_history(text), h);
  EXPECT_EQ(decode_history("").size(), 0u);
  EXPECT_THROW(decode_history("0"), ParseError);
  EXPECT_THROW(decode_history("0 2/1"), ParseError);
}

TEST(Percept, ConstantAndPart1Mu) {
  const FsmEnvironment half(constant_half());
  History h;
  EXPECT_EQ(half.percept(h, kUp).reward, Rational(1, 2));
  EXPECT_EQ(half.percept(h, kDown).reward, Rational(1, 2));
  const auto [mu, nu] = part1_pair(LockParams{}, DiscountFunction::geometric(0.5));
  h.append(kDown, Percept{0, Rational(0)});
  EXPECT_EQ(mu->percept(h, kUp).reward, Rational(1, 2));
  EXPECT_EQ(mu->percept(h, kDown).reward, Rational(0));
  EXPECT_THROW(mu->percept(h, Action{2}), AlphabetError);
  EXPECT_THROW(nu->percept(h, Action{7}), AlphabetError);
}

TEST(Percept, HandWalkOfTwoStateTable) {
  const FsmEnvironment env(toggle());
  auto sim = env.start();
  // 0 -(1)-> 1 reward 1/4; 1 -(0)-> 1 reward 1 obs 1; 1 -(1)-> 0 reward 3/4.
  EXPECT_EQ(sim->step(Action{1}), (Percept{0, Rational(1, 4)}));
  EXPECT_EQ(sim->step(Action{0}), (Percept{1, Rational(1)}));
  EXPECT_EQ(sim->step(Action{1}), (Percept{0, Rational(3, 4)}));
  EXPECT_EQ(sim->fingerprint(), 0u);
  sim->undo();
  EXPECT_EQ(sim->fingerprint(), 1u);
  EXPECT_EQ(env.num_observations(), 2u);
}

TEST(Simulation, CloneHasItsOwnUndoOrigin) {
  const FsmEnvironment env(toggle());
  auto sim = env.start();
  sim->step(Action{1});
  auto copy = sim->clone();
  EXPECT_THROW(copy->undo(), std::logic_error);
  copy->step(Action{1});
  EXPECT_EQ(sim->fingerprint(), 1u);
  EXPECT_EQ(copy->fingerprint(), 0u);
}

TEST(Playout, ConstantPolicy) {
  const FsmEnvironment half(constant_half());
  const History h = playout(half, constant_policy(kDown), 3);
  ASSERT_EQ(h.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(h[i], (Step{kDown, Percept{0, Rational(1, 2)}}));
}

TEST(Playout, DiagonalAgainstItsOwnPolicy) {
  const Policy pi = table_policy(3, 3);
  const auto env = diagonal_env(pi);
  const History h = playout(*env, pi, 10);
  for (std::size_t i = 0; i < h.size(); ++i) EXPECT_EQ(h[i].percept.reward, Rational(0)) << i;
}

TEST(Playout, Part1MuAllUp) {
  const auto [mu, nu] = part1_pair(LockParams{}, DiscountFunction::geometric(0.5));
  const History h = playout(*mu, constant_policy(kUp), 5);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(h[i].percept.reward, Rational(1, 2));
}

TEST(Playout, FailuresCarryTheStep) {
  const FsmEnvironment half(constant_half());
  const Policy bad = [](HistoryView h) { return h.size() == 4 ? Action{9} : kUp; };
  try {
    playout(half, bad, 10);
    FAIL() << "expected PlayoutError";
  } catch (const PlayoutError& e) {
    EXPECT_EQ(e.step(), 5u);
    EXPECT_THROW(std::rethrow_exception(e.cause()), AlphabetError);
  }
}

TEST(Consistency, BasicCases) {
  const FsmEnvironment env(toggle());
  EXPECT_TRUE(is_consistent(env, History{}));
  std::mt19937_64 rng(3);
  const Policy random = [&rng](HistoryView) { return Action{static_cast<std::uint32_t>(rng() % 2)}; };
  const History own = playout(env, random, 50);
  EXPECT_TRUE(is_consistent(env, own));

  std::vector<Step> steps(own.view().begin(), own.view().end());
  steps[1].percept.reward = steps[1].percept.reward == Rational(1) ? Rational(0) : Rational(1);
  EXPECT_FALSE(is_consistent(env, History(steps)));
}

TEST(Consistency, PropertyMonotoneUnderExtension) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const FsmEnvironment truth(random_fsm_spec(rng, 4));
    const FsmEnvironment other(random_fsm_spec(rng, 4));
    const Policy random = [&rng](HistoryView) { return Action{static_cast<std::uint32_t>(rng() % 2)}; };
    const History h = playout(truth, random, 30);
    bool seen_false = false;
    for (std::size_t n = 0; n <= h.size(); ++n) {
      EXPECT_TRUE(is_consistent(truth, h.prefix(n)));
      const bool c = is_consistent(other, h.prefix(n));
      if (seen_false) EXPECT_FALSE(c);
      seen_false = seen_false || !c;
    }
  }
}

TEST(Determinism, RepeatedQueriesAgree) {
  std::mt19937_64 rng(23);
  const auto part3 = part3_pair(LockParams{LockVariant::part3, 3, Rational(1, 4)});
  const auto part1 = part1_pair(LockParams{LockVariant::part1, 2, {}}, DiscountFunction::geometric(0.7));
  std::vector<EnvironmentPtr> envs = {std::make_shared<FsmEnvironment>(toggle()), part3.second, part1.second,
                                      diagonal_env(table_policy(9, 2))};
  for (const auto& env : envs) {
    for (int q = 0; q < 100; ++q) {
      History h;
      const auto len = rng() % 20;
      auto sim = env->start();
      for (std::size_t i = 0; i < len; ++i) {
        const Action a{static_cast<std::uint32_t>(rng() % 2)};
        h.append(a, sim->step(a));
      }
      const Action a{static_cast<std::uint32_t>(rng() % 2)};
      EXPECT_EQ(env->percept(h, a), env->percept(h, a)) << env->describe();
    }
  }
}

TEST(FirstConsistent, Examples) {
  const std::vector<FsmSpec> specs = {constant_half(), toggle()};
  const auto cls = make_class(specs);
  EXPECT_EQ(first_consistent(cls, History{}, 1), 1u);
  // The toggle env pays 0 for action 0 in its start state; the constant env pays 1/2.
  const History h = playout(cls.at(2), constant_policy(kUp), 1);
  EXPECT_EQ(first_consistent(cls, h, 1), 2u);
  History impossible;
  impossible.append(kUp, Percept{0, Rational(1, 3)});
  EXPECT_THROW(first_consistent(cls, impossible, 1), ClassExhausted);
}

TEST(FirstConsistent, PropertyNondecreasingAndBounded) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<FsmSpec> specs;
    for (int i = 0; i < 6; ++i) specs.push_back(random_fsm_spec(rng, 3));
    const auto cls = make_class(specs);
    const std::size_t j = 1 + rng() % specs.size();
    const Policy random = [&rng](HistoryView) { return Action{static_cast<std::uint32_t>(rng() % 2)}; };
    const History h = playout(cls.at(j), random, 60);
    ConsistencyTracker tracker(cls);
    std::size_t previous = 1;
    for (std::size_t n = 0; n <= h.size(); ++n) {
      const std::size_t i = tracker.update(h.prefix(n));
      EXPECT_EQ(i, first_consistent(cls, h.prefix(n), 1));
      EXPECT_GE(i, previous);
      EXPECT_LE(i, j);
      previous = i;
    }
  }
}

TEST(EnvironmentClass, LazyGeneratorAndBounds) {
  auto cls = EnvironmentClass::lazy([](std::size_t i) -> EnvironmentPtr {
    if (i > 3) return nullptr;
    FsmSpec spec = FsmSpec::blank("lazy", 1, 2);
    for (auto& tr : spec.transitions) tr.reward = Rational(static_cast<std::int64_t>(i), 4);
    return std::make_shared<FsmEnvironment>(spec);
  });
  EXPECT_FALSE(cls.size().has_value());
  ASSERT_NE(cls.get(2), nullptr);
  EXPECT_EQ(cls.get(2)->percept(History{}, kUp).reward, Rational(2, 4));
  EXPECT_EQ(cls.get(4), nullptr);
  EXPECT_THROW(cls.get(0), std::out_of_range);
  EXPECT_THROW(cls.at(5), std::out_of_range);
  History h;
  h.append(kUp, Percept{0, Rational(3, 4)});
  EXPECT_EQ(first_consistent(cls, h), 3u);
}

TEST(ClassFile, LoadsInOrderAndRoundTrips) {
  std::mt19937_64 rng(41);
  std::vector<FsmSpec> specs = {random_fsm_spec(rng, 5), random_fsm_spec(rng, 5)};
  specs[0].name = "first";
  specs[1].name = "second";
  const auto path = temp_path("roundtrip.json");
  save_fsm_specs(path, specs);
  const auto cls = load_class(path);
  ASSERT_EQ(cls.size(), 2u);
  EXPECT_EQ(load_fsm_specs(path)[1].name, "second");
  for (std::size_t i = 1; i <= 2; ++i) {
    const FsmEnvironment original(specs[i - 1]);
    std::mt19937_64 actions(i);
    auto a = original.start();
    auto b = cls.at(i).start();
    for (int k = 0; k < 100; ++k) {
      const Action y{static_cast<std::uint32_t>(actions() % 2)};
      EXPECT_EQ(a->step(y), b->step(y));
    }
  }
  std::filesystem::remove(path);
}

TEST(ClassFile, RejectsRewardAboveOne) {
  const std::string text = R"({"environments": [{"name": "bad", "states": 1, "start": 0, "actions": 2,
    "transitions": [{"state": 0, "action": 0, "next": 0, "reward_num": 1, "reward_den": 2},
                    {"state": 0, "action": 1, "next": 0, "reward_num": 5, "reward_den": 4}]}]})";
  try {
    parse_fsm_specs(text, "bad.json");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "environments[0].transitions[1].reward_num");
  }
}

TEST(ClassFile, SyntaxErrorsCarryLine) {
  const std::string text = "{\n  \"environments\": [\n    {\"states\": 1,,}\n  ]\n}\n";
  try {
    parse_fsm_specs(text, "broken.json");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ClassFile, RejectsPartialAndDuplicateTables) {
  const std::string partial = R"([{"states": 1, "start": 0, "actions": 2,
    "transitions": [{"state": 0, "action": 0, "next": 0, "reward_num": 1, "reward_den": 2}]}])";
  EXPECT_THROW(parse_fsm_specs(partial), ParseError);
  const std::string dup = R"([{"states": 1, "start": 0, "actions": 1,
    "transitions": [{"state": 0, "action": 0, "next": 0, "reward_num": 1, "reward_den": 2},
                    {"state": 0, "action": 0, "next": 0, "reward_num": 1, "reward_den": 2}]}])";
  EXPECT_THROW(parse_fsm_specs(dup), ParseError);
  EXPECT_THROW(load_fsm_specs("/nonexistent/class.json"), ConfigError);
}

TEST(AtomicWrite, ReplacesContentsWhole) {
  const auto path = temp_path("atomic.txt");
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  EXPECT_EQ(read_text_file(path), "second");
  std::filesystem::remove(path);
  EXPECT_THROW(write_file_atomic("/nonexistent-dir/x.txt", "x"), std::exception);
}
