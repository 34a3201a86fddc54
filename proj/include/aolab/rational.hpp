#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace aolab {

/// Exact rational number kept in lowest terms with a positive denominator.
/// Rewards live in this form inside environments so that consistency checks
/// never depend on floating-point tolerance.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool in_unit_interval() const { return num_ >= 0 && num_ <= den_; }

  /// "num/den", always with an explicit denominator.
  std::string to_string() const;

  /// Accepts "n/d" or a bare integer "n". Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace aolab
