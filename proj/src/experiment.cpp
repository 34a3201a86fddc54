#include "aolab/experiment.hpp"

#include <charconv>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "aolab/errors.hpp"
#include "aolab/io.hpp"
#include "aolab/policy.hpp"
#include "aolab/process_oracle.hpp"

namespace aolab {

using nlohmann::json;

namespace {

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError(fmt::format("{}: cannot parse '{}' as a number", what, text));
  return value;
}

std::uint64_t parse_unsigned(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError(fmt::format("{}: cannot parse '{}' as a nonnegative integer", what, text));
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  for (std::size_t pos = 0;;) {
    const std::size_t next = text.find(sep, pos);
    parts.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) return parts;
    pos = next + 1;
  }
}

std::string hex64(std::uint64_t value) { return fmt::format("{:016x}", value); }

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

// Schema helpers: each lookup names the full field path on failure.

const json& require(const json& object, const char* key, const std::string& path) {
  if (!object.is_object()) throw ConfigError(fmt::format("{}: expected an object", path));
  auto it = object.find(key);
  if (it == object.end()) throw ConfigError(fmt::format("{}.{}: missing field", path, key));
  return *it;
}

template <typename T>
T as(const json& value, const std::string& path) {
  try {
    if constexpr (std::is_unsigned_v<T>) {
      if (!value.is_number_unsigned()) throw ConfigError(fmt::format("{}: expected a nonnegative integer", path));
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!value.is_number()) throw ConfigError(fmt::format("{}: expected a number", path));
    }
    return value.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

template <typename T>
T field_or(const json& object, const char* key, T fallback, const std::string& path) {
  auto it = object.find(key);
  return it == object.end() ? fallback : as<T>(*it, path + "." + key);
}

Rational rational_field(const json& object, const char* key, Rational fallback, const std::string& path) {
  auto it = object.find(key);
  if (it == object.end()) return fallback;
  try {
    if (it->is_string()) return Rational::parse(it->get<std::string>());
    if (it->is_number_integer()) return Rational(it->get<std::int64_t>());
  } catch (const std::exception& e) {
    throw ConfigError(fmt::format("{}.{}: {}", path, key, e.what()));
  }
  throw ConfigError(fmt::format("{}.{}: expected a rational such as \"1/4\"", path, key));
}

std::string discount_text(const json& value, const std::string& path) {
  if (value.is_string()) return value.get<std::string>();
  const auto kind = as<std::string>(require(value, "kind", path), path + ".kind");
  if (kind == "geometric") return fmt::format("geometric:{}", as<double>(require(value, "gamma", path), path + ".gamma"));
  if (kind == "quadratic") return "quadratic";
  if (kind == "fixed-horizon")
    return fmt::format("fixed-horizon:{}", as<std::uint64_t>(require(value, "horizon", path), path + ".horizon"));
  if (kind == "tabular") {
    const auto weights = as<std::vector<double>>(require(value, "weights", path), path + ".weights");
    const double rate = as<double>(require(value, "tail_rate", path), path + ".tail_rate");
    return fmt::format("tabular:{};{}", fmt::join(weights, ","), rate);
  }
  throw ConfigError(fmt::format("{}.kind: unknown discount '{}'", path, kind));
}

PolicySpec parse_policy(const json& value, const std::string& path) {
  PolicySpec spec;
  const auto kind = as<std::string>(require(value, "kind", path), path + ".kind");
  if (kind == "constant") {
    spec.kind = PolicySpec::Kind::constant;
    spec.action = Action{field_or<std::uint32_t>(value, "action", 0, path)};
  } else if (kind == "table") {
    spec.kind = PolicySpec::Kind::table;
    spec.seed = field_or<std::uint64_t>(value, "seed", 0, path);
    spec.memory = field_or<std::uint32_t>(value, "memory", 4, path);
  } else if (kind == "flip") {
    spec.kind = PolicySpec::Kind::flip;
    spec.inner = std::make_shared<PolicySpec>(parse_policy(require(value, "of", path), path + ".of"));
  } else if (kind == "process") {
    spec.kind = PolicySpec::Kind::process;
    spec.command = as<std::vector<std::string>>(require(value, "command", path), path + ".command");
    if (spec.command.empty()) throw ConfigError(fmt::format("{}.command: empty command", path));
    spec.timeout = std::chrono::milliseconds(field_or<std::uint64_t>(value, "timeout_ms", 5000, path));
  } else {
    throw ConfigError(fmt::format("{}.kind: unknown policy '{}'", path, kind));
  }
  return spec;
}

json policy_json(const PolicySpec& spec) {
  switch (spec.kind) {
    case PolicySpec::Kind::constant:
      return {{"kind", "constant"}, {"action", spec.action.symbol}};
    case PolicySpec::Kind::table:
      return {{"kind", "table"}, {"seed", spec.seed}, {"memory", spec.memory}};
    case PolicySpec::Kind::flip:
      if (!spec.inner) throw ConfigError("flip policy without an inner policy");
      return {{"kind", "flip"}, {"of", policy_json(*spec.inner)}};
    case PolicySpec::Kind::process:
      return {{"kind", "process"}, {"command", spec.command}, {"timeout_ms", spec.timeout.count()}};
  }
  throw std::logic_error("unknown policy kind");
}

FsmSpec parse_inline_fsm(const json& value, const std::string& path) {
  json copy = value;
  copy.erase("type");
  try {
    auto specs = parse_fsm_specs(json::array({copy}).dump(), path);
    return specs.front();
  } catch (const ParseError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

json fsm_json(const FsmSpec& spec) {
  json j = json::parse(format_fsm_specs({spec}));
  json member = j.is_array() ? j.at(0) : j.at("environments").at(0);
  member["type"] = "fsm";
  return member;
}

void parse_members(const json& list, const std::string& path, std::vector<EnvSpec>& out) {
  if (!list.is_array()) throw ConfigError(fmt::format("{}: expected an array of environments", path));
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& item = list[i];
    const std::string where = fmt::format("{}[{}]", path, i);
    const auto type = as<std::string>(require(item, "type", where), where + ".type");
    EnvSpec env;
    if (type == "fsm") {
      env.kind = EnvSpec::Kind::fsm;
      env.fsm = parse_inline_fsm(item, where);
    } else if (type == "part1-mu" || type == "part1-nu" || type == "part3-mu" || type == "part3-nu") {
      const bool part1 = type.starts_with("part1");
      env.lock.variant = part1 ? LockVariant::part1 : LockVariant::part3;
      env.lock.switch_time = field_or<std::uint64_t>(item, "T", 1, where);
      env.lock.epsilon = rational_field(item, "epsilon", Rational(1, 4), where);
      try {
        env.lock.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("{}: {}", where, e.what()));
      }
      const bool nu = type.ends_with("nu");
      env.kind = part1 ? (nu ? EnvSpec::Kind::part1_nu : EnvSpec::Kind::part1_mu)
                       : (nu ? EnvSpec::Kind::part3_nu : EnvSpec::Kind::part3_mu);
    } else if (type == "diagonal") {
      env.kind = EnvSpec::Kind::diagonal;
      env.oracle = parse_policy(require(item, "policy", where), where + ".policy");
    } else if (type == "lock-class") {
      const Rational epsilon = rational_field(item, "epsilon", Rational(1, 4), where);
      try {
        for (auto& spec : lock_class_specs(epsilon)) out.push_back(EnvSpec{EnvSpec::Kind::fsm, spec, {}, {}});
      } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("{}: {}", where, e.what()));
      }
      continue;
    } else if (type == "random-fsm") {
      const auto seed = field_or<std::uint64_t>(item, "seed", 0, where);
      const auto count = field_or<std::uint64_t>(item, "count", 16, where);
      const auto max_states = field_or<std::uint32_t>(item, "max_states", 6, where);
      const auto reward_den = field_or<std::int64_t>(item, "reward_den", 4, where);
      if (count == 0 || max_states == 0 || reward_den <= 0)
        throw ConfigError(fmt::format("{}: count, max_states and reward_den must be positive", where));
      std::mt19937_64 rng(seed);
      for (std::uint64_t k = 1; k <= count; ++k) {
        FsmSpec spec = random_fsm_spec(rng, max_states, 2, reward_den);
        spec.name = fmt::format("random-{}-{}", seed, k);
        out.push_back(EnvSpec{EnvSpec::Kind::fsm, std::move(spec), {}, {}});
      }
      continue;
    } else {
      throw ConfigError(fmt::format("{}.type: unknown environment type '{}'", where, type));
    }
    out.push_back(std::move(env));
  }
}

json member_json(const EnvSpec& env) {
  const auto lock = [&](const char* type) {
    json j = {{"type", type}, {"T", env.lock.switch_time}};
    if (env.kind == EnvSpec::Kind::part3_mu || env.kind == EnvSpec::Kind::part3_nu)
      j["epsilon"] = env.lock.epsilon.to_string();
    return j;
  };
  switch (env.kind) {
    case EnvSpec::Kind::fsm:
      return fsm_json(env.fsm);
    case EnvSpec::Kind::part1_mu:
      return lock("part1-mu");
    case EnvSpec::Kind::part1_nu:
      return lock("part1-nu");
    case EnvSpec::Kind::part3_mu:
      return lock("part3-mu");
    case EnvSpec::Kind::part3_nu:
      return lock("part3-nu");
    case EnvSpec::Kind::diagonal:
      return {{"type", "diagonal"}, {"policy", policy_json(env.oracle)}};
  }
  throw std::logic_error("unknown environment kind");
}

const char* agent_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::explorer:
      return "explorer";
    case AgentKind::greedy:
      return "greedy";
    case AgentKind::optimal:
      return "optimal";
    case AgentKind::policy:
      return "policy";
  }
  return "unknown";
}

std::string exception_text(std::exception_ptr error) {
  try {
    std::rethrow_exception(error);
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown error";
  }
}

}  // namespace

DiscountFunction parse_discount(std::string_view text) {
  const std::size_t colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view param = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const auto need_param = [&] {
    if (param.empty()) throw ConfigError(fmt::format("discount '{}' needs a parameter", kind));
  };
  try {
    if (kind == "geometric") {
      need_param();
      return DiscountFunction::geometric(parse_double(param, "geometric gamma"));
    }
    if (kind == "quadratic") {
      if (!param.empty()) throw ConfigError("quadratic discount takes no parameter");
      return DiscountFunction::quadratic();
    }
    if (kind == "fixed-horizon") {
      need_param();
      return DiscountFunction::fixed_horizon(parse_unsigned(param, "fixed horizon"));
    }
    if (kind == "tabular") {
      need_param();
      const std::size_t semi = param.find(';');
      if (semi == std::string_view::npos) throw ConfigError("tabular discount needs '<weights>;<tail rate>'");
      std::vector<double> weights;
      for (auto part : split(param.substr(0, semi), ',')) weights.push_back(parse_double(part, "tabular weight"));
      return DiscountFunction::tabular(std::move(weights),
                                       GeometricTail{parse_double(param.substr(semi + 1), "tabular tail rate")});
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("discount '{}': {}", text, e.what()));
  }
  throw ConfigError(fmt::format("unknown discount '{}'", text));
}

Policy make_policy(const PolicySpec& spec) {
  switch (spec.kind) {
    case PolicySpec::Kind::constant:
      return constant_policy(spec.action);
    case PolicySpec::Kind::table:
      return table_policy(spec.seed, spec.memory);
    case PolicySpec::Kind::flip:
      if (!spec.inner) throw ConfigError("flip policy without an inner policy");
      return flipped_policy(make_policy(*spec.inner));
    case PolicySpec::Kind::process:
      return process_policy(spec.command, spec.timeout);
  }
  throw std::logic_error("unknown policy kind");
}

void ExperimentConfig::validate() const {
  parse_discount(discount);
  if (steps == 0) throw ConfigError("steps must be at least 1");
  if (stride == 0) throw ConfigError("stride must be at least 1");
  if (true_index == 0) throw ConfigError("true_index is 1-based");
  if (!(epsilon_gap > 0.0 && epsilon_gap < 1.0)) throw ConfigError("epsilon_gap must lie in (0,1)");
  if (!(agent.options.epsilon_plan > 0.0 && agent.options.epsilon_plan < 1.0))
    throw ConfigError("agent.epsilon_plan must lie in (0,1)");
  if (!(agent.options.burst_scale > 0.0)) throw ConfigError("agent.burst_scale must be positive");
  if (node_budget == 0) throw ConfigError("node_budget must be positive");
  if (members.empty() && class_file.empty()) throw ConfigError("no model class given");
  if (!members.empty() && true_index > members.size())
    throw ConfigError(fmt::format("true_index {} exceeds the class size {}", true_index, members.size()));
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw ParseError("config", line, "", e.what());
  }
  if (!root.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::vector<std::string> known = {"discount", "class",   "true_index", "agent", "steps",
                                                 "epsilon_gap", "stride", "node_budget", "output"};
  for (const auto& [key, value] : root.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError(fmt::format("config.{}: unknown field", key));

  ExperimentConfig config;
  if (auto it = root.find("discount"); it != root.end()) config.discount = discount_text(*it, "config.discount");
  const json& cls = require(root, "class", "config");
  if (cls.is_string()) {
    std::filesystem::path file = cls.get<std::string>();
    config.class_file = file.is_relative() && !base.empty() ? base / file : file;
  } else {
    parse_members(cls, "config.class", config.members);
  }
  config.true_index = field_or<std::size_t>(root, "true_index", 1, "config");
  config.steps = as<std::uint64_t>(require(root, "steps", "config"), "config.steps");
  config.epsilon_gap = field_or<double>(root, "epsilon_gap", config.epsilon_gap, "config");
  config.stride = field_or<std::uint64_t>(root, "stride", 1, "config");
  config.node_budget = field_or<std::uint64_t>(root, "node_budget", config.node_budget, "config");

  if (auto it = root.find("agent"); it != root.end()) {
    const json& a = *it;
    const auto kind = field_or<std::string>(a, "kind", "explorer", "config.agent");
    if (kind == "explorer") config.agent.kind = AgentKind::explorer;
    else if (kind == "greedy") config.agent.kind = AgentKind::greedy;
    else if (kind == "optimal") config.agent.kind = AgentKind::optimal;
    else if (kind == "policy") config.agent.kind = AgentKind::policy;
    else throw ConfigError(fmt::format("config.agent.kind: unknown agent '{}'", kind));
    config.agent.options.seed = field_or<std::uint64_t>(a, "seed", 0, "config.agent");
    config.agent.options.epsilon_plan = field_or<double>(a, "epsilon_plan", config.agent.options.epsilon_plan, "config.agent");
    config.agent.options.burst_scale = field_or<double>(a, "burst_scale", 1.0, "config.agent");
    if (config.agent.kind == AgentKind::policy)
      config.agent.policy = parse_policy(require(a, "policy", "config.agent"), "config.agent.policy");
  }
  if (auto it = root.find("output"); it != root.end()) {
    const auto resolve = [&](const char* key) -> std::filesystem::path {
      auto f = it->find(key);
      if (f == it->end()) return {};
      std::filesystem::path p = as<std::string>(*f, fmt::format("config.output.{}", key));
      return p.is_relative() && !base.empty() ? base / p : p;
    };
    config.trace_path = resolve("trace");
    config.summary_path = resolve("summary");
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path), path.parent_path());
}

std::string canonical_config(const ExperimentConfig& config) {
  json root;
  root["discount"] = config.discount;
  if (config.members.empty()) {
    root["class"] = {{"file", config.class_file.string()}, {"digest", hex64(fnv1a(read_text_file(config.class_file)))}};
  } else {
    json members = json::array();
    for (const auto& env : config.members) members.push_back(member_json(env));
    root["class"] = members;
  }
  root["true_index"] = config.true_index;
  json agent = {{"kind", agent_name(config.agent.kind)},
                {"seed", config.agent.options.seed},
                {"epsilon_plan", config.agent.options.epsilon_plan},
                {"burst_scale", config.agent.options.burst_scale}};
  if (config.agent.kind == AgentKind::policy) agent["policy"] = policy_json(config.agent.policy);
  root["agent"] = agent;
  root["steps"] = config.steps;
  root["epsilon_gap"] = config.epsilon_gap;
  root["stride"] = config.stride;
  root["node_budget"] = config.node_budget;
  return root.dump();
}

std::string config_hash(const ExperimentConfig& config) { return hex64(fnv1a(canonical_config(config))); }

EnvironmentClass build_class(const ExperimentConfig& config) {
  if (config.members.empty()) return load_class(config.class_file);
  const DiscountFunction d = parse_discount(config.discount);
  std::vector<EnvironmentPtr> envs;
  for (const auto& env : config.members) {
    switch (env.kind) {
      case EnvSpec::Kind::fsm:
        envs.push_back(std::make_shared<FsmEnvironment>(env.fsm));
        break;
      case EnvSpec::Kind::part1_mu:
        envs.push_back(part1_pair(env.lock, d).first);
        break;
      case EnvSpec::Kind::part1_nu:
        envs.push_back(part1_pair(env.lock, d).second);
        break;
      case EnvSpec::Kind::part3_mu:
        envs.push_back(part3_pair(env.lock).first);
        break;
      case EnvSpec::Kind::part3_nu:
        envs.push_back(part3_pair(env.lock).second);
        break;
      case EnvSpec::Kind::diagonal:
        envs.push_back(diagonal_env(make_policy(env.oracle)));
        break;
    }
  }
  return EnvironmentClass(std::move(envs));
}

RunRecord play(const ExperimentConfig& config, const EnvironmentClass& models) {
  const DiscountFunction d = parse_discount(config.discount);
  const EnvironmentPtr truth = models.get(config.true_index);
  if (!truth) throw ConfigError(fmt::format("true_index {} is outside the class", config.true_index));

  AgentOptions options = config.agent.options;
  options.planner.node_budget = config.node_budget;
  std::unique_ptr<ExplorerAgent> explorer;
  std::unique_ptr<GreedyAgent> greedy;
  Planner planner(options.planner);
  Policy policy;
  switch (config.agent.kind) {
    case AgentKind::explorer:
      explorer = std::make_unique<ExplorerAgent>(models, d, options);
      break;
    case AgentKind::greedy:
      greedy = std::make_unique<GreedyAgent>(models, d, options);
      break;
    case AgentKind::optimal:
      break;
    case AgentKind::policy:
      policy = make_policy(config.agent.policy);
      break;
  }

  RunRecord run;
  run.history.reserve(config.steps);
  auto cursor = truth->start();
  for (std::uint64_t t = 1; t <= config.steps; ++t) {
    try {
      Decision decision;
      if (explorer) {
        decision = explorer->act(run.history);
      } else if (greedy) {
        decision = greedy->act(run.history);
      } else if (policy) {
        decision.action = policy(run.history);
      } else {
        decision.action = planner.epsilon_plan(*truth, *cursor, t, options.epsilon_plan, d).actions.front();
      }
      truth->check_action(decision.action);
      const Percept percept = cursor->step(decision.action);
      run.append(Step{decision.action, percept}, decision.exploring, decision.model_index);
    } catch (...) {
      const auto error = std::current_exception();
      throw PlayoutError(t, error, fmt::format("step {}: {}", t, exception_text(error)));
    }
  }
  return run;
}

std::string summary_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  const auto opt = [](const auto& value) -> nlohmann::ordered_json {
    if (value) return *value;
    return nullptr;
  };
  j["config_hash"] = s.config_hash;
  j["seed"] = s.seed;
  j["agent"] = s.agent;
  j["discount"] = s.discount;
  j["true_index"] = s.true_index;
  j["steps"] = s.steps;
  j["epsilon_gap"] = s.epsilon_gap;
  j["stride"] = s.stride;
  j["final_avg_gap"] = opt(s.final_avg_gap);
  j["settling_time"] = opt(s.settling_time);
  j["final_model_index"] = s.final_model_index;
  auto decades = nlohmann::ordered_json::array();
  for (const auto& c : s.decade_averages) decades.push_back({{"n", c.n}, {"avg_gap", c.avg_gap}});
  j["decade_averages"] = decades;
  j["strong_proxy"] = {{"label", "max gap over the final decade of evaluable steps"},
                       {"value", opt(s.final_decade_max_gap)}};
  j["evaluable_fraction"] = s.evaluable_fraction;
  j["evaluable_steps"] = s.evaluable_steps;
  j["budget_failures"] = s.budget_failures;
  j["exploring_steps"] = s.exploring_steps;
  j["mean_reward"] = s.mean_reward;
  return j.dump(2) + "\n";
}

ExperimentResult execute(const ExperimentConfig& config) {
  config.validate();
  const EnvironmentClass models = build_class(config);
  const EnvironmentPtr truth = models.get(config.true_index);
  if (!truth) throw ConfigError(fmt::format("true_index {} is outside the class", config.true_index));

  ExperimentResult result;
  result.run = play(config, models);
  GapOptions gap_options;
  gap_options.epsilon_gap = config.epsilon_gap;
  gap_options.stride = config.stride;
  gap_options.planner.node_budget = config.node_budget;
  result.trace = gap_trace(result.run, *truth, parse_discount(config.discount), gap_options);

  RunSummary& s = result.summary;
  s.steps = config.steps;
  s.seed = config.agent.options.seed;
  s.agent = agent_name(config.agent.kind);
  s.config_hash = config_hash(config);
  s.discount = config.discount;
  s.true_index = config.true_index;
  s.epsilon_gap = config.epsilon_gap;
  s.stride = config.stride;
  s.final_avg_gap = final_average(result.trace);
  s.settling_time = settling_time(result.run.model_index);
  s.final_model_index = result.run.model_index.empty() ? 0 : result.run.model_index.back();
  s.decade_averages = decade_averages(result.trace);
  s.final_decade_max_gap = final_decade_max(result.trace);
  const std::uint64_t sampled = (config.steps + config.stride - 1) / config.stride;
  s.evaluable_steps = result.trace.evaluable;
  s.evaluable_fraction = static_cast<double>(result.trace.evaluable) / static_cast<double>(sampled);
  s.budget_failures = result.trace.budget_failures;
  double reward = 0.0;
  for (std::size_t i = 0; i < result.run.size(); ++i) {
    s.exploring_steps += result.run.exploring[i];
    reward += result.run.history[i].percept.reward.to_double();
  }
  s.mean_reward = reward / static_cast<double>(result.run.size());
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result = execute(config);
  std::vector<std::filesystem::path> written;
  try {
    if (!config.trace_path.empty()) {
      write_file_atomic(config.trace_path, emit_csv(result.trace));
      written.push_back(config.trace_path);
    }
    if (!config.summary_path.empty()) {
      write_file_atomic(config.summary_path, summary_json(result.summary));
      written.push_back(config.summary_path);
    }
  } catch (...) {
    std::error_code ignored;
    for (const auto& path : written) std::filesystem::remove(path, ignored);
    throw;
  }
  return result;
}

}  // namespace aolab
