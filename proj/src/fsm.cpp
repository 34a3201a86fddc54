#include "aolab/fsm.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "aolab/errors.hpp"
#include "aolab/io.hpp"

namespace aolab {

using nlohmann::json;

void FsmSpec::validate() const {
  const std::string who = name.empty() ? std::string("fsm") : name;
  if (states == 0) throw std::invalid_argument(fmt::format("{}: needs at least one state", who));
  if (actions == 0) throw std::invalid_argument(fmt::format("{}: needs at least one action", who));
  if (start >= states) throw std::invalid_argument(fmt::format("{}: start state {} out of range", who, start));
  if (transitions.size() != static_cast<std::size_t>(states) * actions)
    throw std::invalid_argument(fmt::format("{}: transition table is not total", who));
  for (std::uint32_t s = 0; s < states; ++s)
    for (std::uint32_t a = 0; a < actions; ++a) {
      const auto& tr = at(s, a);
      if (tr.next >= states)
        throw std::invalid_argument(fmt::format("{}: ({}, {}) next state {} out of range", who, s, a, tr.next));
      if (!tr.reward.in_unit_interval())
        throw std::invalid_argument(
            fmt::format("{}: ({}, {}) reward {} outside [0,1]", who, s, a, tr.reward.to_string()));
    }
}

FsmSpec FsmSpec::blank(std::string name, std::uint32_t states, std::uint32_t actions) {
  FsmSpec spec;
  spec.name = std::move(name);
  spec.states = states;
  spec.actions = actions;
  spec.transitions.resize(static_cast<std::size_t>(states) * actions);
  for (std::uint32_t s = 0; s < states; ++s)
    for (std::uint32_t a = 0; a < actions; ++a) spec.at(s, a).next = s;
  return spec;
}

namespace {

class FsmSimulation final : public Simulation {
 public:
  FsmSimulation(const FsmSpec& spec, std::uint32_t state) : spec_(&spec), state_(state) {}

  Percept step(Action action) override {
    if (action.symbol >= spec_->actions)
      throw AlphabetError(fmt::format("action {} outside alphabet of size {}", action.symbol, spec_->actions));
    const FsmTransition& tr = spec_->at(state_, action.symbol);
    trail_.push_back(state_);
    state_ = tr.next;
    return Percept{tr.observation, tr.reward};
  }

  void undo() override {
    if (trail_.empty()) throw std::logic_error("undo past the cursor origin");
    state_ = trail_.back();
    trail_.pop_back();
  }

  std::unique_ptr<Simulation> clone() const override { return std::make_unique<FsmSimulation>(*spec_, state_); }

  std::optional<std::uint64_t> fingerprint() const override { return state_; }

 private:
  const FsmSpec* spec_;
  std::uint32_t state_;
  std::vector<std::uint32_t> trail_;
};

}  // namespace

FsmEnvironment::FsmEnvironment(FsmSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  for (const auto& tr : spec_.transitions)
    observations_ = std::max<std::size_t>(observations_, std::size_t{tr.observation} + 1);
}

std::string FsmEnvironment::describe() const {
  return fmt::format("fsm{}{}({} states, {} actions)", spec_.name.empty() ? "" : " ", spec_.name, spec_.states,
                     spec_.actions);
}

std::unique_ptr<Simulation> FsmEnvironment::start() const {
  return std::make_unique<FsmSimulation>(spec_, spec_.start);
}

namespace {

std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

template <class T>
T field(const json& obj, const char* key, const std::string& where, const std::string& source) {
  if (!obj.is_object() || !obj.contains(key))
    throw ParseError(source, 0, fmt::format("{}.{}", where, key), "missing field");
  const json& v = obj.at(key);
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer())
      throw ParseError(source, 0, fmt::format("{}.{}", where, key), "expected an integer");
    const auto raw = v.get<std::int64_t>();
    if constexpr (std::is_unsigned_v<T>) {
      if (raw < 0) throw ParseError(source, 0, fmt::format("{}.{}", where, key), "expected a nonnegative integer");
    }
    return static_cast<T>(raw);
  } else {
    if (!v.is_string()) throw ParseError(source, 0, fmt::format("{}.{}", where, key), "expected a string");
    return v.get<T>();
  }
}

FsmSpec parse_one(const json& obj, const std::string& where, const std::string& source) {
  if (!obj.is_object()) throw ParseError(source, 0, where, "expected an object");
  FsmSpec spec;
  spec.name = obj.contains("name") ? field<std::string>(obj, "name", where, source) : std::string();
  spec.states = field<std::uint32_t>(obj, "states", where, source);
  spec.start = field<std::uint32_t>(obj, "start", where, source);
  spec.actions = obj.contains("actions") ? field<std::uint32_t>(obj, "actions", where, source) : 2;
  if (spec.states == 0) throw ParseError(source, 0, where + ".states", "needs at least one state");
  if (spec.actions == 0) throw ParseError(source, 0, where + ".actions", "needs at least one action");
  if (spec.start >= spec.states) throw ParseError(source, 0, where + ".start", "start state out of range");
  if (!obj.contains("transitions") || !obj.at("transitions").is_array())
    throw ParseError(source, 0, where + ".transitions", "expected an array");
  spec.transitions.resize(static_cast<std::size_t>(spec.states) * spec.actions);
  std::vector<bool> seen(spec.transitions.size(), false);
  const json& rows = obj.at("transitions");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string at = fmt::format("{}.transitions[{}]", where, i);
    const json& row = rows[i];
    const auto s = field<std::uint32_t>(row, "state", at, source);
    const auto a = field<std::uint32_t>(row, "action", at, source);
    if (s >= spec.states) throw ParseError(source, 0, at + ".state", fmt::format("state {} out of range", s));
    if (a >= spec.actions) throw ParseError(source, 0, at + ".action", fmt::format("action {} out of range", a));
    const std::size_t slot = static_cast<std::size_t>(s) * spec.actions + a;
    if (seen[slot]) throw ParseError(source, 0, at, fmt::format("duplicate entry for (state {}, action {})", s, a));
    seen[slot] = true;
    FsmTransition tr;
    tr.next = field<std::uint32_t>(row, "next", at, source);
    if (tr.next >= spec.states)
      throw ParseError(source, 0, at + ".next", fmt::format("next state {} out of range", tr.next));
    tr.observation = row.contains("obs") ? field<std::uint32_t>(row, "obs", at, source) : 0;
    const auto num = field<std::int64_t>(row, "reward_num", at, source);
    const auto den = field<std::int64_t>(row, "reward_den", at, source);
    if (den == 0) throw ParseError(source, 0, at + ".reward_den", "zero denominator");
    tr.reward = Rational(num, den);
    if (!tr.reward.in_unit_interval())
      throw ParseError(source, 0, at + ".reward_num",
                       fmt::format("reward {}/{} outside [0,1]", num, den));
    spec.transitions[slot] = tr;
  }
  for (std::size_t slot = 0; slot < seen.size(); ++slot)
    if (!seen[slot])
      throw ParseError(source, 0, where + ".transitions",
                       fmt::format("missing entry for (state {}, action {})", slot / spec.actions,
                                   slot % spec.actions));
  return spec;
}

}  // namespace

std::vector<FsmSpec> parse_fsm_specs(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(source, line_of(text, e.byte == 0 ? 0 : e.byte - 1), "", e.what());
  }
  const json* list = &doc;
  std::string where = "";
  if (doc.is_object()) {
    if (!doc.contains("environments")) throw ParseError(source, 0, "environments", "missing field");
    list = &doc.at("environments");
    where = "environments";
  }
  if (!list->is_array()) throw ParseError(source, 0, where, "expected an array of environment specs");
  std::vector<FsmSpec> specs;
  for (std::size_t i = 0; i < list->size(); ++i)
    specs.push_back(parse_one((*list)[i], fmt::format("{}[{}]", where, i), source));
  return specs;
}

std::vector<FsmSpec> load_fsm_specs(const std::filesystem::path& path) {
  return parse_fsm_specs(read_text_file(path), path.string());
}

std::string format_fsm_specs(const std::vector<FsmSpec>& specs) {
  json list = json::array();
  for (const auto& spec : specs) {
    json rows = json::array();
    for (std::uint32_t s = 0; s < spec.states; ++s)
      for (std::uint32_t a = 0; a < spec.actions; ++a) {
        const auto& tr = spec.at(s, a);
        rows.push_back({{"state", s},
                        {"action", a},
                        {"next", tr.next},
                        {"obs", tr.observation},
                        {"reward_num", tr.reward.num()},
                        {"reward_den", tr.reward.den()}});
      }
    list.push_back({{"name", spec.name},
                    {"states", spec.states},
                    {"start", spec.start},
                    {"actions", spec.actions},
                    {"transitions", std::move(rows)}});
  }
  return json{{"environments", std::move(list)}}.dump(2) + "\n";
}

void save_fsm_specs(const std::filesystem::path& path, const std::vector<FsmSpec>& specs) {
  write_file_atomic(path, format_fsm_specs(specs));
}

EnvironmentClass make_class(const std::vector<FsmSpec>& specs) {
  std::vector<EnvironmentPtr> members;
  members.reserve(specs.size());
  for (const auto& spec : specs) members.push_back(std::make_shared<FsmEnvironment>(spec));
  return EnvironmentClass(std::move(members));
}

EnvironmentClass load_class(const std::filesystem::path& path) { return make_class(load_fsm_specs(path)); }

FsmSpec random_fsm_spec(std::mt19937_64& rng, std::uint32_t max_states, std::uint32_t actions,
                        std::int64_t reward_den, std::uint32_t observations) {
  if (max_states == 0 || actions == 0 || reward_den <= 0 || observations == 0)
    throw std::invalid_argument("random_fsm_spec: sizes must be positive");
  std::uniform_int_distribution<std::uint32_t> state_count(1, max_states);
  const std::uint32_t states = state_count(rng);
  FsmSpec spec = FsmSpec::blank("random", states, actions);
  std::uniform_int_distribution<std::uint32_t> pick_state(0, states - 1);
  std::uniform_int_distribution<std::uint32_t> pick_obs(0, observations - 1);
  std::uniform_int_distribution<std::int64_t> pick_reward(0, reward_den);
  spec.start = pick_state(rng);
  for (auto& tr : spec.transitions) {
    tr.next = pick_state(rng);
    tr.observation = pick_obs(rng);
    tr.reward = Rational(pick_reward(rng), reward_den);
  }
  return spec;
}

}  // namespace aolab
