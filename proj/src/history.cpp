#include "aolab/history.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include <fmt/format.h>

#include "aolab/errors.hpp"

namespace aolab {

std::string encode_history(HistoryView history) {
  std::string out;
  out.reserve(history.size() * 6);
  for (const Step& step : history) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(step.action.symbol);
    out.push_back(' ');
    if (step.percept.observation != 0) {
      out += std::to_string(step.percept.observation);
      out.push_back(':');
    }
    out += std::to_string(step.percept.reward.num());
    out.push_back('/');
    out += std::to_string(step.percept.reward.den());
  }
  return out;
}

namespace {

std::uint32_t parse_symbol(std::string_view token, std::size_t position) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError("history", 0, fmt::format("token {}", position), fmt::format("bad symbol '{}'", token));
  return value;
}

}  // namespace

History decode_history(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  if (tokens.size() % 2 != 0)
    throw ParseError("history", 0, "", "expected alternating action and percept tokens");
  History history;
  history.reserve(tokens.size() / 2);
  for (std::size_t k = 0; k < tokens.size(); k += 2) {
    const Action action{parse_symbol(tokens[k], k)};
    std::string_view percept = tokens[k + 1];
    std::uint32_t observation = 0;
    if (const auto colon = percept.find(':'); colon != std::string_view::npos) {
      observation = parse_symbol(percept.substr(0, colon), k + 1);
      percept = percept.substr(colon + 1);
    }
    Rational reward;
    try {
      reward = Rational::parse(percept);
    } catch (const std::exception& e) {
      throw ParseError("history", 0, fmt::format("token {}", k + 1), e.what());
    }
    if (!reward.in_unit_interval())
      throw ParseError("history", 0, fmt::format("token {}", k + 1),
                       fmt::format("reward {} outside [0,1]", reward.to_string()));
    history.append(action, Percept{observation, reward});
  }
  return history;
}

}  // namespace aolab
