#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "aolab/environment.hpp"

namespace aolab {

struct FsmTransition {
  std::uint32_t next = 0;
  std::uint32_t observation = 0;
  Rational reward;
};

/// Deterministic finite-state environment: the state folds in the action
/// sequence, observations are emitted per transition.
struct FsmSpec {
  std::string name;
  std::uint32_t states = 1;
  std::uint32_t start = 0;
  std::uint32_t actions = 2;
  /// Row-major table: transitions[state * actions + action].
  std::vector<FsmTransition> transitions;

  const FsmTransition& at(std::uint32_t state, std::uint32_t action) const {
    return transitions[static_cast<std::size_t>(state) * actions + action];
  }
  FsmTransition& at(std::uint32_t state, std::uint32_t action) {
    return transitions[static_cast<std::size_t>(state) * actions + action];
  }

  /// Throws std::invalid_argument naming the offending entry.
  void validate() const;

  /// All-zero-reward self loops of the given size, to be filled in.
  static FsmSpec blank(std::string name, std::uint32_t states, std::uint32_t actions);
};

class FsmEnvironment final : public Environment {
 public:
  explicit FsmEnvironment(FsmSpec spec);

  std::size_t num_actions() const override { return spec_.actions; }
  std::size_t num_observations() const override { return observations_; }
  std::string describe() const override;
  std::unique_ptr<Simulation> start() const override;

  const FsmSpec& spec() const { return spec_; }

 private:
  FsmSpec spec_;
  std::size_t observations_ = 1;
};

/// Parses a class file. Layout:
///   {"environments": [{"name": "...", "states": 2, "start": 0, "actions": 2,
///     "transitions": [{"state": 0, "action": 1, "next": 1, "obs": 0,
///                      "reward_num": 1, "reward_den": 2}, ...]}, ...]}
/// A top-level array of specs is accepted as well. Throws ParseError with a
/// line number for syntax errors and a field path for schema errors.
std::vector<FsmSpec> parse_fsm_specs(std::string_view text, const std::string& source = "<memory>");
std::vector<FsmSpec> load_fsm_specs(const std::filesystem::path& path);
std::string format_fsm_specs(const std::vector<FsmSpec>& specs);
/// Atomic write (temporary file then rename).
void save_fsm_specs(const std::filesystem::path& path, const std::vector<FsmSpec>& specs);

/// Class of FsmEnvironments in file order.
EnvironmentClass load_class(const std::filesystem::path& path);
EnvironmentClass make_class(const std::vector<FsmSpec>& specs);

/// Uniformly random total table with 1..max_states states and rewards k/reward_den.
FsmSpec random_fsm_spec(std::mt19937_64& rng, std::uint32_t max_states, std::uint32_t actions = 2,
                        std::int64_t reward_den = 4, std::uint32_t observations = 1);

}  // namespace aolab
