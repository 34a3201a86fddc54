#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aolab/discount.hpp"
#include "aolab/environment.hpp"
#include "aolab/planner.hpp"

namespace aolab {

/// Everything a run produced: the history plus, per step, whether the agent
/// was exploring and the model index it acted on (0 for plain policies).
struct RunRecord {
  History history;
  std::vector<std::uint8_t> exploring;
  std::vector<std::size_t> model_index;

  void append(const Step& step, bool explore, std::size_t index) {
    history.append(step);
    exploring.push_back(explore ? 1 : 0);
    model_index.push_back(index);
  }
  std::size_t size() const { return history.size(); }
};

struct TraceRow {
  std::uint64_t t = 0;
  bool exploring = false;
  std::size_t model_index = 0;
  Action action;
  Rational reward;
  /// Present only at sampled, evaluable steps whose planner call succeeded.
  std::optional<double> gap;
  /// Running mean of the gaps present so far; set on rows carrying a gap.
  std::optional<double> avg_gap;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct GapOptions {
  double epsilon_gap = 1.0 / 64.0;
  std::uint64_t stride = 1;
  PlannerOptions planner;
};

struct RegretTrace {
  std::vector<TraceRow> rows;
  double epsilon_gap = 1.0 / 64.0;
  std::uint64_t stride = 1;
  /// Sampled steps whose horizon fits inside the run.
  std::uint64_t evaluable = 0;
  /// Evaluable steps whose optimal-value search ran out of budget.
  std::uint64_t budget_failures = 0;
  std::vector<std::uint64_t> failed_steps;
};

/// Optimality gaps of a run against the environment it was played in. At a
/// sampled step t with t + H_t(1 - epsilon_gap/2) <= run length, the gap is
/// the epsilon_gap/2-optimal value at history_{<t} minus the truncated
/// realized value over the same horizon; each term is off by at most
/// epsilon_gap/2. Throws std::invalid_argument when the recorded percepts
/// disagree with `true_env`.
RegretTrace gap_trace(const RunRecord& run, const Environment& true_env, const DiscountFunction& d,
                      const GapOptions& options = {});

/// Running means: out[k] is the mean of in[0..k]. Throws on empty input.
std::vector<double> cesaro(std::span<const double> series);

/// Least T with i_t = i_N for all t >= T; nullopt when the final index first
/// appears at t = N.
std::optional<std::uint64_t> settling_time(std::span<const std::size_t> model_index);
std::optional<std::uint64_t> settling_time(const RegretTrace& trace);

/// Running average at the last gap-carrying row with t <= n.
std::optional<double> average_at(const RegretTrace& trace, std::uint64_t n);

struct Checkpoint {
  std::uint64_t n = 0;
  double avg_gap = 0.0;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

/// Running average at n = 10, 100, ... up to the last gap-carrying step,
/// followed by that last step itself when it is not a power of ten.
std::vector<Checkpoint> decade_averages(const RegretTrace& trace);

/// Finite-run stand-in for the strong criterion: the largest gap among rows
/// with t > t_last / 10, where t_last is the last gap-carrying step.
std::optional<double> final_decade_max(const RegretTrace& trace);

/// Last running average, if any gap was measured.
std::optional<double> final_average(const RegretTrace& trace);

inline constexpr std::string_view kTraceHeader = "t,exploring,model_index,action,reward_num,reward_den,gap,avg_gap";

/// CSV with kTraceHeader; doubles use the shortest round-trip form.
std::string emit_csv(const RegretTrace& trace);
/// Rows only. Throws ParseError naming the line and column.
std::vector<TraceRow> parse_csv(std::string_view text);

}  // namespace aolab
