#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "aolab/errors.hpp"
#include "aolab/experiment.hpp"
#include "aolab/io.hpp"
#include "aolab/planner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

/// Maps an exception (unwrapping play-out failures) to an exit code.
int report(std::exception_ptr error) {
  try {
    std::rethrow_exception(error);
  } catch (const aolab::PlayoutError& e) {
    std::cerr << "error: " << e.what() << "\n";
    try {
      std::rethrow_exception(e.cause());
    } catch (const aolab::BudgetExceeded&) {
      return kExitBudget;
    } catch (const aolab::ConfigError&) {
      return kExitConfig;
    } catch (...) {
      return kExitOther;
    }
  } catch (const aolab::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const aolab::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const aolab::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
}

aolab::PolicySpec parse_policy_arg(const std::string& text) {
  aolab::PolicySpec spec;
  if (text == "up" || text == "down") {
    spec.action = text == "up" ? aolab::kUp : aolab::kDown;
    return spec;
  }
  if (text.starts_with("table:")) {
    spec.kind = aolab::PolicySpec::Kind::table;
    const auto rest = text.substr(6);
    const auto colon = rest.find(':');
    try {
      spec.seed = std::stoull(rest.substr(0, colon));
      if (colon != std::string::npos) spec.memory = static_cast<std::uint32_t>(std::stoul(rest.substr(colon + 1)));
    } catch (const std::exception&) {
      throw aolab::ConfigError(fmt::format("cannot parse policy '{}'", text));
    }
    return spec;
  }
  if (text.starts_with("flip:")) {
    spec.kind = aolab::PolicySpec::Kind::flip;
    spec.inner = std::make_shared<aolab::PolicySpec>(parse_policy_arg(text.substr(5)));
    return spec;
  }
  throw aolab::ConfigError(fmt::format("unknown policy '{}' (up, down, table:<seed>[:<memory>], flip:<policy>)", text));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic-optimality lab: explorer agents, lock adversaries and regret traces"};
  app.require_subcommand(1);

  std::string config_path;
  std::string trace_override;
  std::string summary_override;
  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  run->add_option("config", config_path, "Experiment config")->required();
  run->add_option("--trace", trace_override, "Override the trace CSV path");
  run->add_option("--summary", summary_override, "Override the summary JSON path");

  std::string variant;
  std::uint64_t switch_time = 1;
  std::string epsilon_text = "1/4";
  std::string discount_text;
  std::string policy_text = "up";
  std::uint64_t steps = 600;
  double epsilon_gap = 1.0 / 64.0;
  std::uint64_t stride = 1;
  bool csv = false;
  auto* adversary = app.add_subcommand("adversary", "Play a policy against a lock or diagonal environment");
  adversary->add_option("variant", variant, "part1 | part3 | diagonal | lock-class")
      ->required()
      ->check(CLI::IsMember({"part1", "part3", "diagonal", "lock-class"}));
  adversary->add_option("--T", switch_time, "Switch-on time")->capture_default_str();
  adversary->add_option("--epsilon", epsilon_text, "Down penalty for part3 and lock-class")->capture_default_str();
  adversary->add_option("--discount", discount_text, "Discount (default geometric:0.5, quadratic for part3)");
  adversary->add_option("--policy", policy_text, "up | down | table:<seed>[:<memory>] | flip:<policy>")
      ->capture_default_str();
  adversary->add_option("--steps", steps, "Play-out length")->capture_default_str();
  adversary->add_option("--epsilon-gap", epsilon_gap, "Gap tolerance")->capture_default_str();
  adversary->add_option("--stride", stride, "Gap sampling stride")->capture_default_str();
  adversary->add_flag("--csv", csv, "Print the trace CSV instead of the summary");

  std::string class_path;
  std::size_t index = 1;
  std::string history_text;
  double epsilon = 1.0 / 1024.0;
  std::string value_discount = "geometric:0.5";
  std::uint64_t budget = std::uint64_t{1} << 26;
  auto* value = app.add_subcommand("value", "Epsilon-optimal value and plan of one class member at a history");
  value->add_option("class", class_path, "Class file")->required();
  value->add_option("index", index, "1-based member index")->required();
  value->add_option("history", history_text, "History, e.g. \"0 1/2 1 0/1\"")->required();
  value->add_option("--epsilon", epsilon, "Planning tolerance")->capture_default_str();
  value->add_option("--discount", value_discount, "Discount")->capture_default_str();
  value->add_option("--budget", budget, "Node budget")->capture_default_str();

  std::string enumerate_path;
  auto* enumerate = app.add_subcommand("enumerate", "List and validate a class file");
  enumerate->add_option("class", enumerate_path, "Class file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      aolab::ExperimentConfig config = aolab::load_config(config_path);
      if (!trace_override.empty()) config.trace_path = trace_override;
      if (!summary_override.empty()) config.summary_path = summary_override;
      const auto result = aolab::run_experiment(config);
      std::cout << aolab::summary_json(result.summary);
    } else if (*adversary) {
      if (variant == "lock-class") {
        std::cout << aolab::format_fsm_specs(aolab::lock_class_specs(aolab::Rational::parse(epsilon_text)));
        return kExitOk;
      }
      aolab::ExperimentConfig config;
      config.steps = steps;
      config.epsilon_gap = epsilon_gap;
      config.stride = stride;
      config.agent.kind = aolab::AgentKind::policy;
      config.agent.policy = parse_policy_arg(policy_text);
      aolab::EnvSpec env;
      if (variant == "diagonal") {
        env.kind = aolab::EnvSpec::Kind::diagonal;
        env.oracle = config.agent.policy;
        config.discount = discount_text.empty() ? "geometric:0.5" : discount_text;
      } else {
        const bool part1 = variant == "part1";
        env.kind = part1 ? aolab::EnvSpec::Kind::part1_nu : aolab::EnvSpec::Kind::part3_nu;
        env.lock.variant = part1 ? aolab::LockVariant::part1 : aolab::LockVariant::part3;
        env.lock.switch_time = switch_time;
        env.lock.epsilon = aolab::Rational::parse(epsilon_text);
        env.lock.validate();
        config.discount = !discount_text.empty() ? discount_text : part1 ? "geometric:0.5" : "quadratic";
      }
      config.members.push_back(env);
      const auto result = aolab::execute(config);
      std::cout << (csv ? aolab::emit_csv(result.trace) : aolab::summary_json(result.summary));
    } else if (*value) {
      const auto models = aolab::load_class(class_path);
      const auto& env = models.at(index);
      const auto history = aolab::decode_history(history_text);
      const auto d = aolab::parse_discount(value_discount);
      aolab::PlannerOptions options;
      options.node_budget = budget;
      aolab::Planner planner(options);
      const auto plan = planner.epsilon_plan(env, *env.replay(history), history.size() + 1, epsilon, d);
      std::string actions;
      for (const auto a : plan.actions) actions += std::to_string(a.symbol);
      std::cout << fmt::format("value {}\nerror_bound {}\nhorizon {}\naction {}\nplan {}\nconsistent {}\n",
                               plan.value.value, plan.value.error_bound, plan.actions.size() - 1,
                               plan.actions.front().symbol, actions, aolab::is_consistent(env, history) ? 1 : 0);
    } else if (*enumerate) {
      const auto specs = aolab::load_fsm_specs(enumerate_path);
      for (std::size_t i = 0; i < specs.size(); ++i)
        std::cout << fmt::format("{}\t{}\tstates={}\tactions={}\n", i + 1, specs[i].name, specs[i].states,
                                 specs[i].actions);
    }
  } catch (...) {
    return report(std::current_exception());
  }
  return kExitOk;
}
