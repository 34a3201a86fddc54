#include "aolab/regret.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include <fmt/format.h>

#include "aolab/errors.hpp"

namespace aolab {

RegretTrace gap_trace(const RunRecord& run, const Environment& true_env, const DiscountFunction& d,
                      const GapOptions& options) {
  if (!(options.epsilon_gap > 0.0 && options.epsilon_gap < 1.0))
    throw std::invalid_argument(fmt::format("gap tolerance must lie in (0,1), got {}", options.epsilon_gap));
  if (options.stride == 0) throw std::invalid_argument("gap stride must be at least 1");
  const std::size_t n = run.size();
  if (run.exploring.size() != n || run.model_index.size() != n)
    throw std::invalid_argument("run record columns have different lengths");

  RegretTrace trace;
  trace.epsilon_gap = options.epsilon_gap;
  trace.stride = options.stride;
  trace.rows.reserve(n);

  std::vector<double> rewards(n);
  for (std::size_t i = 0; i < n; ++i) rewards[i] = run.history[i].percept.reward.to_double();

  const double half = options.epsilon_gap / 2.0;
  Planner planner(options.planner);
  auto cursor = true_env.start();
  double gap_sum = 0.0;
  std::uint64_t gap_count = 0;
  for (std::uint64_t t = 1; t <= n; ++t) {
    const Step& step = run.history[t - 1];
    TraceRow row{t, run.exploring[t - 1] != 0, run.model_index[t - 1], step.action, step.percept.reward, {}, {}};
    if ((t - 1) % options.stride == 0) {
      const std::uint64_t h = d.effective_horizon(t, 1.0 - half);
      if (t + h <= n) {
        ++trace.evaluable;
        try {
          const double best = planner.best_plan(true_env, *cursor, t, h, d).value.value;
          const double realized = truncated_value(d, t, std::span(rewards).subspan(t - 1, h + 1)).value;
          row.gap = best - realized;
          gap_sum += *row.gap;
          ++gap_count;
          row.avg_gap = gap_sum / static_cast<double>(gap_count);
        } catch (const BudgetExceeded&) {
          ++trace.budget_failures;
          trace.failed_steps.push_back(t);
        }
      }
    }
    if (cursor->step(step.action) != step.percept)
      throw std::invalid_argument(
          fmt::format("run disagrees with {} at step {}", true_env.describe(), t));
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

std::vector<double> cesaro(std::span<const double> series) {
  if (series.empty()) throw std::invalid_argument("cesaro needs a nonempty series");
  std::vector<double> out;
  out.reserve(series.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    sum += series[k];
    out.push_back(sum / static_cast<double>(k + 1));
  }
  return out;
}

std::optional<std::uint64_t> settling_time(std::span<const std::size_t> model_index) {
  if (model_index.empty()) return std::nullopt;
  const std::size_t final_index = model_index.back();
  std::uint64_t start = model_index.size();
  while (start > 1 && model_index[start - 2] == final_index) --start;
  if (start == model_index.size() && model_index.size() > 1) return std::nullopt;
  return start;
}

std::optional<std::uint64_t> settling_time(const RegretTrace& trace) {
  std::vector<std::size_t> indices;
  indices.reserve(trace.rows.size());
  for (const auto& row : trace.rows) indices.push_back(row.model_index);
  return settling_time(indices);
}

std::optional<double> average_at(const RegretTrace& trace, std::uint64_t n) {
  std::optional<double> last;
  for (const auto& row : trace.rows) {
    if (row.t > n) break;
    if (row.avg_gap) last = row.avg_gap;
  }
  return last;
}

std::vector<Checkpoint> decade_averages(const RegretTrace& trace) {
  std::vector<Checkpoint> out;
  std::optional<double> running;
  std::uint64_t last_t = 0;
  std::uint64_t next = 10;
  for (const auto& row : trace.rows) {
    while (row.t > next) {
      if (running) out.push_back(Checkpoint{next, *running});
      next *= 10;
    }
    if (row.avg_gap) {
      running = row.avg_gap;
      last_t = row.t;
    }
  }
  // Drop checkpoints past the last measured step; they would repeat it.
  while (!out.empty() && out.back().n > last_t) out.pop_back();
  if (running && (out.empty() || out.back().n != last_t)) out.push_back(Checkpoint{last_t, *running});
  return out;
}

std::optional<double> final_decade_max(const RegretTrace& trace) {
  std::uint64_t last_t = 0;
  for (const auto& row : trace.rows)
    if (row.gap) last_t = row.t;
  if (last_t == 0) return std::nullopt;
  std::optional<double> best;
  for (const auto& row : trace.rows)
    if (row.gap && row.t * 10 > last_t) best = std::max(best.value_or(*row.gap), *row.gap);
  return best;
}

std::optional<double> final_average(const RegretTrace& trace) {
  for (auto it = trace.rows.rbegin(); it != trace.rows.rend(); ++it)
    if (it->avg_gap) return it->avg_gap;
  return std::nullopt;
}

std::string emit_csv(const RegretTrace& trace) {
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "{}\n", kTraceHeader);
  for (const auto& row : trace.rows) {
    fmt::format_to(std::back_inserter(out), "{},{},{},{},{},{},", row.t, row.exploring ? 1 : 0, row.model_index,
                   row.action.symbol, row.reward.num(), row.reward.den());
    if (row.gap) fmt::format_to(std::back_inserter(out), "{}", *row.gap);
    out.push_back(',');
    if (row.avg_gap) fmt::format_to(std::back_inserter(out), "{}", *row.avg_gap);
    out.push_back('\n');
  }
  return fmt::to_string(out);
}

namespace {

template <typename T>
T parse_field(std::string_view text, std::size_t line, std::string_view column) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError("trace", line, std::string(column), fmt::format("cannot parse '{}'", text));
  return value;
}

std::optional<double> parse_optional(std::string_view text, std::size_t line, std::string_view column) {
  if (text.empty()) return std::nullopt;
  return parse_field<double>(text, line, column);
}

}  // namespace

std::vector<TraceRow> parse_csv(std::string_view text) {
  static constexpr std::string_view kColumns[] = {"t",          "exploring", "model_index", "action",
                                                  "reward_num", "reward_den", "gap",        "avg_gap"};
  std::vector<TraceRow> rows;
  std::size_t line_no = 0;
  bool header = true;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (header) {
      if (line != kTraceHeader) throw ParseError("trace", line_no, "header", "unexpected trace header");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    for (std::size_t pos = 0;;) {
      const std::size_t comma = line.find(',', pos);
      cells.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (cells.size() != std::size(kColumns))
      throw ParseError("trace", line_no, "", fmt::format("expected {} columns, got {}", std::size(kColumns), cells.size()));
    TraceRow row;
    row.t = parse_field<std::uint64_t>(cells[0], line_no, kColumns[0]);
    const auto exploring = parse_field<int>(cells[1], line_no, kColumns[1]);
    if (exploring != 0 && exploring != 1) throw ParseError("trace", line_no, "exploring", "expected 0 or 1");
    row.exploring = exploring == 1;
    row.model_index = parse_field<std::size_t>(cells[2], line_no, kColumns[2]);
    row.action = Action{parse_field<std::uint32_t>(cells[3], line_no, kColumns[3])};
    const auto num = parse_field<std::int64_t>(cells[4], line_no, kColumns[4]);
    const auto den = parse_field<std::int64_t>(cells[5], line_no, kColumns[5]);
    try {
      row.reward = Rational(num, den);
    } catch (const std::exception& e) {
      throw ParseError("trace", line_no, "reward_den", e.what());
    }
    row.gap = parse_optional(cells[6], line_no, kColumns[6]);
    row.avg_gap = parse_optional(cells[7], line_no, kColumns[7]);
    rows.push_back(row);
  }
  if (header) throw ParseError("trace", 0, "header", "empty trace");
  return rows;
}

}  // namespace aolab
