#include "aolab/adversary.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

#include "aolab/errors.hpp"

namespace aolab {
namespace {

constexpr std::uint64_t kUnlockedTag = std::uint64_t{3} << 62;
constexpr std::uint64_t kRunTag = std::uint64_t{1} << 62;
constexpr std::uint64_t kPayloadMask = kRunTag - 1;
constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

void check_binary(Action action) {
  if (action.symbol > 1) throw AlphabetError(fmt::format("action {} outside the binary alphabet", action.symbol));
}

FsmSpec constant_spec(std::string name, Rational up, Rational down) {
  FsmSpec spec = FsmSpec::blank(std::move(name), 1, 2);
  spec.at(0, kUp.symbol).reward = up;
  spec.at(0, kDown.symbol).reward = down;
  return spec;
}

/// Memo of H_t(1/4), shared by all cursors of one environment.
class HorizonTable {
 public:
  explicit HorizonTable(DiscountFunction d) : d_(std::move(d)) {}

  std::uint64_t operator()(std::uint64_t t) {
    std::lock_guard lock(mutex_);
    auto [it, inserted] = cache_.try_emplace(t, 0);
    if (inserted) it->second = d_.effective_horizon(t, 0.25);
    return it->second;
  }

 private:
  DiscountFunction d_;
  std::mutex mutex_;
  std::unordered_map<std::uint64_t, std::uint64_t> cache_;
};

/// Shared state machine of both lock cursors: the time index, whether the
/// current action run is a down run, a run payload (the earliest unlock time
/// the run can reach), and the sticky unlocked flag.
struct LockState {
  std::uint64_t t = 1;
  bool in_run = false;
  bool unlocked = false;
  std::uint64_t run_start = 0;
  std::uint64_t unlock_at = kNever;

  std::uint64_t fingerprint() const {
    if (unlocked) return kUnlockedTag;
    if (in_run) return kRunTag | std::min(unlock_at, kPayloadMask);
    return 0;
  }
};

template <typename Derived>
class LockSimulation : public Simulation {
 public:
  Percept step(Action action) override {
    check_binary(action);
    trail_.push_back(state_);
    const std::uint64_t s = state_.t++;
    if (action == kUp) {
      state_.in_run = false;
      state_.unlock_at = kNever;
      return Percept{0, Rational(1, 2)};
    }
    auto& self = static_cast<Derived&>(*this);
    if (!state_.in_run) {
      state_.in_run = true;
      state_.run_start = s;
      state_.unlock_at = kNever;
    }
    if (s >= self.switch_time()) {
      state_.unlock_at = std::min(state_.unlock_at, self.candidate_unlock(s, state_.run_start));
      if (state_.unlock_at <= s) state_.unlocked = true;
      return Percept{0, state_.unlocked ? Rational(1) : self.locked_down()};
    }
    return Percept{0, self.locked_down()};
  }

  void undo() override {
    if (trail_.empty()) throw std::logic_error("undo past the start of this cursor");
    state_ = trail_.back();
    trail_.pop_back();
  }

  std::optional<std::uint64_t> fingerprint() const override { return state_.fingerprint(); }

 protected:
  LockState state_;
  std::vector<LockState> trail_;
};

class Part1Simulation final : public LockSimulation<Part1Simulation> {
 public:
  Part1Simulation(std::uint64_t switch_time, std::shared_ptr<HorizonTable> horizons)
      : switch_time_(switch_time), horizons_(std::move(horizons)) {}

  std::uint64_t switch_time() const { return switch_time_; }
  Rational locked_down() const { return Rational(0); }
  /// Every down step s >= T of the current run may start a block ending at s + H_s.
  std::uint64_t candidate_unlock(std::uint64_t s, std::uint64_t) const { return s + (*horizons_)(s); }

  std::unique_ptr<Simulation> clone() const override {
    auto copy = std::make_unique<Part1Simulation>(switch_time_, horizons_);
    copy->state_ = state_;
    return copy;
  }

 private:
  std::uint64_t switch_time_;
  std::shared_ptr<HorizonTable> horizons_;
};

class Part3Simulation final : public LockSimulation<Part3Simulation> {
 public:
  Part3Simulation(std::uint64_t switch_time, Rational epsilon) : switch_time_(switch_time), epsilon_(epsilon) {}

  std::uint64_t switch_time() const { return switch_time_; }
  Rational locked_down() const { return Rational(1, 2) - epsilon_; }
  /// Within one run the earliest qualifying t' is max(run start, T), which
  /// unlocks at step 2t'. Later starts in the same run only unlock later.
  std::uint64_t candidate_unlock(std::uint64_t, std::uint64_t run_start) const {
    return 2 * std::max(run_start, switch_time_);
  }

  std::unique_ptr<Simulation> clone() const override {
    auto copy = std::make_unique<Part3Simulation>(switch_time_, epsilon_);
    copy->state_ = state_;
    return copy;
  }

 private:
  std::uint64_t switch_time_;
  Rational epsilon_;
};

class Part1Nu final : public Environment {
 public:
  Part1Nu(std::uint64_t switch_time, DiscountFunction d)
      : switch_time_(switch_time), description_(d.describe()), horizons_(std::make_shared<HorizonTable>(std::move(d))) {}

  std::size_t num_actions() const override { return 2; }
  std::string describe() const override {
    return fmt::format("part1-nu(T={}, {})", switch_time_, description_);
  }
  std::unique_ptr<Simulation> start() const override {
    return std::make_unique<Part1Simulation>(switch_time_, horizons_);
  }

 private:
  std::uint64_t switch_time_;
  std::string description_;
  std::shared_ptr<HorizonTable> horizons_;
};

class Part3Nu final : public Environment {
 public:
  Part3Nu(std::uint64_t switch_time, Rational epsilon) : switch_time_(switch_time), epsilon_(epsilon) {}

  std::size_t num_actions() const override { return 2; }
  std::string describe() const override {
    return fmt::format("part3-nu(T={}, epsilon={})", switch_time_, epsilon_.to_string());
  }
  std::unique_ptr<Simulation> start() const override {
    return std::make_unique<Part3Simulation>(switch_time_, epsilon_);
  }

 private:
  std::uint64_t switch_time_;
  Rational epsilon_;
};

struct SharedOracle {
  Policy policy;
  std::mutex mutex;

  Action operator()(HistoryView history) {
    std::lock_guard lock(mutex);
    const Action action = policy(history);
    check_binary(action);
    return action;
  }
};

class DiagonalSimulation final : public Simulation {
 public:
  explicit DiagonalSimulation(std::shared_ptr<SharedOracle> oracle) : oracle_(std::move(oracle)) {}

  Percept step(Action action) override {
    check_binary(action);
    const Action predicted = (*oracle_)(history_);
    const Percept percept{0, action != predicted ? Rational(1) : Rational(0)};
    history_.push_back(Step{action, percept});
    ++steps_;
    return percept;
  }

  void undo() override {
    if (steps_ == 0) throw std::logic_error("undo past the start of this cursor");
    history_.pop_back();
    --steps_;
  }

  std::unique_ptr<Simulation> clone() const override {
    auto copy = std::make_unique<DiagonalSimulation>(oracle_);
    copy->history_ = history_;
    return copy;
  }

 private:
  std::shared_ptr<SharedOracle> oracle_;
  std::vector<Step> history_;
  std::size_t steps_ = 0;
};

class DiagonalEnvironment final : public Environment {
 public:
  explicit DiagonalEnvironment(Policy oracle)
      : oracle_(std::make_shared<SharedOracle>()) {
    oracle_->policy = std::move(oracle);
  }

  std::size_t num_actions() const override { return 2; }
  std::string describe() const override { return "diagonal"; }
  std::unique_ptr<Simulation> start() const override { return std::make_unique<DiagonalSimulation>(oracle_); }

 private:
  std::shared_ptr<SharedOracle> oracle_;
};

}  // namespace

void LockParams::validate() const {
  if (switch_time < 1) throw std::invalid_argument("lock switch time T must be at least 1");
  if (variant == LockVariant::part3 && !(Rational(0) < epsilon && epsilon < Rational(1, 2)))
    throw std::invalid_argument(fmt::format("lock epsilon {} outside (0, 1/2)", epsilon.to_string()));
}

std::pair<EnvironmentPtr, EnvironmentPtr> part1_pair(const LockParams& params, const DiscountFunction& d) {
  params.validate();
  auto mu = std::make_shared<FsmEnvironment>(constant_spec("part1-mu", Rational(1, 2), Rational(0)));
  auto nu = std::make_shared<Part1Nu>(params.switch_time, d);
  return {mu, nu};
}

std::pair<EnvironmentPtr, EnvironmentPtr> part3_pair(const LockParams& params) {
  LockParams checked = params;
  checked.variant = LockVariant::part3;
  checked.validate();
  auto mu = std::make_shared<FsmEnvironment>(
      constant_spec("part3-mu", Rational(1, 2), Rational(1, 2) - params.epsilon));
  auto nu = std::make_shared<Part3Nu>(params.switch_time, params.epsilon);
  return {mu, nu};
}

EnvironmentPtr diagonal_env(Policy oracle) {
  if (!oracle) throw std::invalid_argument("diagonal environment needs an oracle");
  return std::make_shared<DiagonalEnvironment>(std::move(oracle));
}

std::vector<FsmSpec> lock_class_specs(Rational epsilon) {
  if (!(Rational(0) < epsilon && epsilon < Rational(1, 2)))
    throw std::invalid_argument(fmt::format("lock epsilon {} outside (0, 1/2)", epsilon.to_string()));
  const Rational penalty = Rational(1, 2) - epsilon;
  FsmSpec decoy = constant_spec("lock-decoy", Rational(1, 2), penalty);
  FsmSpec lock = FsmSpec::blank("lock-true", 2, 2);
  lock.at(0, kUp.symbol) = FsmTransition{0, 0, Rational(1, 2)};
  lock.at(0, kDown.symbol) = FsmTransition{1, 0, penalty};
  lock.at(1, kUp.symbol) = FsmTransition{1, 0, Rational(1, 2)};
  lock.at(1, kDown.symbol) = FsmTransition{1, 0, Rational(1)};
  return {decoy, lock};
}

}  // namespace aolab
