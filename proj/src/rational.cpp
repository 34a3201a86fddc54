#include "aolab/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "aolab/errors.hpp"

namespace aolab {

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& field,
                       const std::string& message)
    : ConfigError(fmt::format("{}{}{}: {}", source, line > 0 ? fmt::format(":{}", line) : "",
                              field.empty() ? "" : fmt::format(" [{}]", field), message)),
      line_(line),
      field_(field) {}

BudgetExceeded::BudgetExceeded(std::uint64_t required, std::uint64_t budget, bool lower_bound)
    : std::runtime_error(fmt::format("planner budget exceeded: needs {}{} node expansions, budget is {}",
                                     lower_bound ? "more than " : "", required, budget)),
      required_(required),
      budget_(budget),
      lower_bound_(lower_bound) {}

namespace {

Rational from_wide(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num;
  __int128 b = den;
  while (b != 0) {
    __int128 r = a % b;
    a = b;
    b = r;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr auto lo = std::numeric_limits<std::int64_t>::min();
  constexpr auto hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi) throw std::overflow_error("rational overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    if (num == std::numeric_limits<std::int64_t>::min() || den == std::numeric_limits<std::int64_t>::min())
      throw std::overflow_error("rational overflow");
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::to_string() const { return fmt::format("{}/{}", num_, den_); }

Rational Rational::parse(std::string_view text) {
  auto parse_int = [&](std::string_view part) {
    std::int64_t value = 0;
    const char* first = part.data();
    const char* last = part.data() + part.size();
    if (!part.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (part.empty() || ec != std::errc{} || ptr != last)
      throw std::invalid_argument(fmt::format("not a rational: '{}'", text));
    return value;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument(fmt::format("zero denominator: '{}'", text));
  return Rational(parse_int(text.substr(0, slash)), den);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational operator+(const Rational& a, const Rational& b) {
  return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                   static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                   static_cast<__int128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

}  // namespace aolab
