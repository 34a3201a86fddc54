#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace aolab {

/// Tail of a tabular discount continuing geometrically from the last table
/// entry: gamma_k = w_n * rate^(k - n) for k > n.
struct GeometricTail {
  double rate = 0.5;
};

/// Tail given by a weight function and its exact tail-mass oracle.
struct ClosedFormTail {
  std::function<long double(std::uint64_t)> weight;
  std::function<long double(std::uint64_t)> tail_mass;  // sum over i >= k
};

/// Tail given by a weight function plus a monotone upper bound on the
/// remainder sum_{i >= k} gamma_i; tail masses are summed numerically.
struct NumericTail {
  std::function<long double(std::uint64_t)> weight;
  std::function<long double(std::uint64_t)> remainder_bound;
  long double relative_precision = 1e-15L;
  std::uint64_t max_terms = 10'000'000;
};

using TabularTail = std::variant<GeometricTail, ClosedFormTail, NumericTail>;

/// Certified truncation of a normalized discounted reward stream: the value
/// of any infinite continuation lies in [value, value + error_bound].
struct TruncatedValue {
  double value = 0.0;
  double error_bound = 1.0;
};

/// Summable discount vector gamma_1, gamma_2, ... with strictly positive tails.
/// Time indices are 1-based.
class DiscountFunction {
 public:
  enum class Kind { geometric, quadratic, fixed_horizon, tabular };

  static DiscountFunction geometric(double gamma);
  /// gamma_k = 1 / (k (k + 1)), whose tail mass is exactly 1 / t.
  static DiscountFunction quadratic();
  /// gamma_k = 1 for k <= horizon, else 0. Tail masses vanish after the
  /// horizon, so queries with t > horizon are rejected.
  static DiscountFunction fixed_horizon(std::uint64_t horizon);
  static DiscountFunction tabular(std::vector<double> prefix, TabularTail tail);

  Kind kind() const;
  std::string describe() const;

  /// gamma_k. Throws std::invalid_argument for k == 0.
  long double weight(std::uint64_t k) const;
  /// Gamma_t = sum_{i >= t} gamma_i.
  long double tail_mass(std::uint64_t t) const;

  /// gamma_k / Gamma_t, computed without forming tiny intermediate masses.
  double normalized_weight(std::uint64_t t, std::uint64_t k) const;
  /// Gamma_{t+h+1} / Gamma_t: the share of the normalized mass beyond t + h.
  double tail_ratio(std::uint64_t t, std::uint64_t h) const;
  /// (1 / Gamma_t) * sum_{k=t}^{t+h} gamma_k.
  double normalized_partial(std::uint64_t t, std::uint64_t h) const {
    return 1.0 - tail_ratio(t, h);
  }

  /// H_t(p): least h with normalized_partial(t, h) > p. Requires 0 <= p < 1.
  std::uint64_t effective_horizon(std::uint64_t t, double p) const;

  /// normalized_weight(t, t + d) for d = 0..h.
  std::vector<double> normalized_weights(std::uint64_t t, std::uint64_t h) const;

 private:
  struct Geometric {
    double gamma;
  };
  struct Quadratic {};
  struct FixedHorizon {
    std::uint64_t horizon;
  };
  struct Tabular {
    std::vector<double> prefix;
    TabularTail tail;
  };

  explicit DiscountFunction(std::variant<Geometric, Quadratic, FixedHorizon, Tabular> rep)
      : rep_(std::move(rep)) {}

  long double tabular_tail_weight(const Tabular& tab, std::uint64_t k) const;
  long double tabular_tail_mass(const Tabular& tab, std::uint64_t k) const;

  std::variant<Geometric, Quadratic, FixedHorizon, Tabular> rep_;
};

/// Normalized discounted value of the rewards r_t .. r_{t+h} (h = size - 1)
/// with a zero-filled tail. Rewards must lie in [0, 1].
TruncatedValue truncated_value(const DiscountFunction& d, std::uint64_t t,
                               std::span<const double> rewards);

/// Backward accumulation w_0 r_0 + (w_1 r_1 + (...)), shared by the planner
/// so that plan values and realized values round identically.
double backward_sum(std::span<const double> weights, std::span<const double> rewards);

/// Clamps a raw normalized sum and tail share into a TruncatedValue.
TruncatedValue make_truncated(double sum, double tail_share);

}  // namespace aolab
