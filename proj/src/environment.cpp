#include "aolab/environment.hpp"

#include <fmt/format.h>

#include "aolab/errors.hpp"

namespace aolab {

PlayoutError::PlayoutError(std::uint64_t step, std::exception_ptr cause, const std::string& message)
    : std::runtime_error(fmt::format("step {}: {}", step, message)), step_(step), cause_(std::move(cause)) {}

void Environment::check_action(Action action) const {
  if (action.symbol >= num_actions())
    throw AlphabetError(fmt::format("action {} outside alphabet of size {} ({})", action.symbol, num_actions(),
                                    describe()));
}

std::unique_ptr<Simulation> Environment::replay(HistoryView history) const {
  auto sim = start();
  for (const Step& step : history) {
    check_action(step.action);
    sim->step(step.action);
  }
  return sim;
}

Percept Environment::percept(HistoryView history, Action action) const {
  check_action(action);
  return replay(history)->step(action);
}

EnvironmentClass::EnvironmentClass(std::vector<EnvironmentPtr> members) : members_(std::move(members)) {
  for (const auto& m : members_)
    if (!m) throw std::invalid_argument("environment class members must be non-null");
  exhausted_ = true;
}

EnvironmentClass EnvironmentClass::lazy(Generator generator) {
  EnvironmentClass c;
  c.generator_ = std::move(generator);
  c.exhausted_ = false;
  return c;
}

EnvironmentClass::EnvironmentClass(const EnvironmentClass& other) {
  std::lock_guard lock(other.mutex_);
  members_ = other.members_;
  generator_ = other.generator_;
  exhausted_ = other.exhausted_;
}

EnvironmentClass& EnvironmentClass::operator=(const EnvironmentClass& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mutex_, other.mutex_);
  members_ = other.members_;
  generator_ = other.generator_;
  exhausted_ = other.exhausted_;
  return *this;
}

void EnvironmentClass::push_back(EnvironmentPtr env) {
  if (!env) throw std::invalid_argument("environment class members must be non-null");
  std::lock_guard lock(mutex_);
  if (generator_) throw std::logic_error("cannot append to a lazily enumerated class");
  members_.push_back(std::move(env));
  exhausted_ = true;
}

EnvironmentPtr EnvironmentClass::get(std::size_t index) const {
  if (index == 0) throw std::out_of_range("environment class indices start at 1");
  std::lock_guard lock(mutex_);
  while (members_.size() < index && !exhausted_ && generator_) {
    auto next = generator_(members_.size() + 1);
    if (!next) {
      exhausted_ = true;
      break;
    }
    members_.push_back(std::move(next));
  }
  return index <= members_.size() ? members_[index - 1] : nullptr;
}

const Environment& EnvironmentClass::at(std::size_t index) const {
  auto env = get(index);
  if (!env) throw std::out_of_range(fmt::format("environment class has no member {}", index));
  return *env;
}

std::optional<std::size_t> EnvironmentClass::size() const {
  std::lock_guard lock(mutex_);
  if (generator_ && !exhausted_) return std::nullopt;
  return members_.size();
}

bool is_consistent(const Environment& env, HistoryView history) {
  auto sim = env.start();
  for (const Step& step : history) {
    if (step.action.symbol >= env.num_actions()) return false;
    if (sim->step(step.action) != step.percept) return false;
  }
  return true;
}

std::size_t first_consistent(const EnvironmentClass& models, HistoryView history, std::size_t from_index) {
  if (from_index == 0) throw std::out_of_range("environment class indices start at 1");
  for (std::size_t i = from_index;; ++i) {
    auto env = models.get(i);
    if (!env)
      throw ClassExhausted(fmt::format("no environment at index >= {} is consistent with the {}-step history",
                                       from_index, history.size()));
    if (is_consistent(*env, history)) return i;
  }
}

ConsistencyTracker::ConsistencyTracker(EnvironmentClass models, std::size_t from_index)
    : models_(std::move(models)), index_(first_consistent(models_, {}, from_index)) {
  model_ = models_.get(index_);
  position_ = model_->start();
}

void ConsistencyTracker::advance_past(HistoryView history) {
  for (std::size_t i = index_ + 1;; ++i) {
    auto env = models_.get(i);
    if (!env)
      throw ClassExhausted(fmt::format("no environment after index {} is consistent with the {}-step history",
                                       index_, history.size()));
    auto sim = env->start();
    bool consistent = true;
    for (const Step& step : history) {
      if (step.action.symbol >= env->num_actions() || sim->step(step.action) != step.percept) {
        consistent = false;
        break;
      }
    }
    if (consistent) {
      index_ = i;
      model_ = std::move(env);
      position_ = std::move(sim);
      return;
    }
  }
}

std::size_t ConsistencyTracker::update(HistoryView history) {
  if (history.size() < processed_)
    throw std::logic_error("consistency tracker history must only grow");
  while (processed_ < history.size()) {
    const Step& step = history[processed_];
    if (step.action.symbol >= model_->num_actions() || position_->step(step.action) != step.percept)
      advance_past(history.first(processed_ + 1));
    ++processed_;
  }
  return index_;
}

History playout(const Environment& env, const Policy& policy, std::size_t n) {
  History history;
  history.reserve(n);
  auto sim = env.start();
  for (std::size_t k = 1; k <= n; ++k) {
    try {
      const Action action = policy(history);
      env.check_action(action);
      history.append(action, sim->step(action));
    } catch (const std::exception& e) {
      throw PlayoutError(k, std::current_exception(), e.what());
    }
  }
  return history;
}

}  // namespace aolab
