#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aolab/adversary.hpp"
#include "aolab/agent.hpp"
#include "aolab/fsm.hpp"
#include "aolab/regret.hpp"

namespace aolab {

/// Discount text grammar:
///   geometric:<gamma> | quadratic | fixed-horizon:<H> | tabular:<w1>,<w2>,...;<tail rate>
/// Throws ConfigError.
DiscountFunction parse_discount(std::string_view text);

/// Deterministic in-process or external policy.
struct PolicySpec {
  enum class Kind { constant, table, flip, process };

  Kind kind = Kind::constant;
  Action action;
  std::uint64_t seed = 0;
  std::uint32_t memory = 4;
  std::shared_ptr<const PolicySpec> inner;
  std::vector<std::string> command;
  std::chrono::milliseconds timeout{5000};
};

/// Fresh policy instance (process policies start a new child).
Policy make_policy(const PolicySpec& spec);

/// One member of an inline model class.
struct EnvSpec {
  enum class Kind { fsm, part1_mu, part1_nu, part3_mu, part3_nu, diagonal };

  Kind kind = Kind::fsm;
  FsmSpec fsm;
  LockParams lock;
  PolicySpec oracle;
};

enum class AgentKind { explorer, greedy, optimal, policy };

struct AgentSpec {
  AgentKind kind = AgentKind::explorer;
  AgentOptions options;
  /// Used by AgentKind::policy.
  PolicySpec policy;
};

struct ExperimentConfig {
  std::string discount = "geometric:0.5";
  /// Class file; used when `members` is empty.
  std::filesystem::path class_file;
  std::vector<EnvSpec> members;
  std::size_t true_index = 1;
  AgentSpec agent;
  std::uint64_t steps = 1000;
  double epsilon_gap = 1.0 / 64.0;
  std::uint64_t stride = 1;
  std::uint64_t node_budget = std::uint64_t{1} << 26;
  std::filesystem::path trace_path;
  std::filesystem::path summary_path;

  /// Throws ConfigError on out-of-range fields.
  void validate() const;
};

/// Parses the JSON configuration. Relative paths resolve against `base`.
/// Throws ParseError (syntax) or ConfigError (schema).
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON of everything that influences the results (output paths
/// excluded), and its 64-bit FNV-1a digest in hex.
std::string canonical_config(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

/// Members of the configured model class, built with the configured discount.
EnvironmentClass build_class(const ExperimentConfig& config);

struct RunSummary {
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::string agent;
  std::string config_hash;
  std::string discount;
  std::size_t true_index = 1;
  double epsilon_gap = 0.0;
  std::uint64_t stride = 1;
  std::optional<double> final_avg_gap;
  std::optional<std::uint64_t> settling_time;
  std::size_t final_model_index = 0;
  std::vector<Checkpoint> decade_averages;
  std::optional<double> final_decade_max_gap;
  double evaluable_fraction = 0.0;
  std::uint64_t evaluable_steps = 0;
  std::uint64_t budget_failures = 0;
  std::uint64_t exploring_steps = 0;
  double mean_reward = 0.0;
};

std::string summary_json(const RunSummary& summary);

struct ExperimentResult {
  RunRecord run;
  RegretTrace trace;
  RunSummary summary;
};

/// Plays the configured agent in the true environment for `steps` steps.
/// Failures are rethrown as PlayoutError tagged with the step.
RunRecord play(const ExperimentConfig& config, const EnvironmentClass& models);

/// Play, gap trace and summary, without touching the file system.
ExperimentResult execute(const ExperimentConfig& config);

/// execute() plus atomic writes of the trace CSV and summary JSON to the
/// configured paths. If any write fails, artifacts already written by this
/// call are removed.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace aolab
