#include "aolab/discount.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace aolab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_time(std::uint64_t t, const char* what) {
  if (t == 0) throw std::invalid_argument(fmt::format("{}: time indices start at 1", what));
}

constexpr std::uint64_t kHorizonCap = std::uint64_t{1} << 40;

}  // namespace

DiscountFunction DiscountFunction::geometric(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument(fmt::format("geometric rate must lie in (0,1), got {}", gamma));
  return DiscountFunction(Geometric{gamma});
}

DiscountFunction DiscountFunction::quadratic() { return DiscountFunction(Quadratic{}); }

DiscountFunction DiscountFunction::fixed_horizon(std::uint64_t horizon) {
  if (horizon == 0) throw std::invalid_argument("fixed horizon must be positive");
  return DiscountFunction(FixedHorizon{horizon});
}

DiscountFunction DiscountFunction::tabular(std::vector<double> prefix, TabularTail tail) {
  if (prefix.empty()) throw std::invalid_argument("tabular discount needs at least one weight");
  for (double w : prefix)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument(fmt::format("tabular weight {} is not a nonnegative number", w));
  std::visit(overloaded{
                 [&](const GeometricTail& g) {
                   if (!(g.rate > 0.0 && g.rate < 1.0))
                     throw std::invalid_argument("geometric tail rate must lie in (0,1)");
                   if (!(prefix.back() > 0.0))
                     throw std::invalid_argument("geometric tail needs a positive last weight");
                 },
                 [](const ClosedFormTail& c) {
                   if (!c.weight || !c.tail_mass)
                     throw std::invalid_argument("closed-form tail needs weight and tail-mass functions");
                 },
                 [](const NumericTail& n) {
                   if (!n.weight || !n.remainder_bound)
                     throw std::invalid_argument("bare finite tables are rejected: numeric tail needs a weight "
                                                 "function and a remainder bound");
                 },
             },
             tail);
  DiscountFunction d(Tabular{std::move(prefix), std::move(tail)});
  // Validate the tail once so that a non-convergent tail fails at construction.
  const auto& tab = std::get<Tabular>(d.rep_);
  if (!(d.tabular_tail_mass(tab, tab.prefix.size() + 1) > 0.0L))
    throw std::invalid_argument("tabular tail mass must be positive");
  return d;
}

DiscountFunction::Kind DiscountFunction::kind() const {
  return std::visit(overloaded{
                        [](const Geometric&) { return Kind::geometric; },
                        [](const Quadratic&) { return Kind::quadratic; },
                        [](const FixedHorizon&) { return Kind::fixed_horizon; },
                        [](const Tabular&) { return Kind::tabular; },
                    },
                    rep_);
}

std::string DiscountFunction::describe() const {
  return std::visit(overloaded{
                        [](const Geometric& g) { return fmt::format("geometric:{}", g.gamma); },
                        [](const Quadratic&) { return std::string("quadratic"); },
                        [](const FixedHorizon& f) { return fmt::format("fixed-horizon:{}", f.horizon); },
                        [](const Tabular& t) { return fmt::format("tabular[{}]", t.prefix.size()); },
                    },
                    rep_);
}

long double DiscountFunction::tabular_tail_weight(const Tabular& tab, std::uint64_t k) const {
  const std::uint64_t n = tab.prefix.size();
  return std::visit(overloaded{
                        [&](const GeometricTail& g) {
                          return static_cast<long double>(tab.prefix.back()) *
                                 std::pow(static_cast<long double>(g.rate), static_cast<long double>(k - n));
                        },
                        [&](const ClosedFormTail& c) { return c.weight(k); },
                        [&](const NumericTail& nt) { return nt.weight(k); },
                    },
                    tab.tail);
}

long double DiscountFunction::tabular_tail_mass(const Tabular& tab, std::uint64_t k) const {
  const std::uint64_t n = tab.prefix.size();
  return std::visit(
      overloaded{
          [&](const GeometricTail& g) {
            const long double rate = g.rate;
            return static_cast<long double>(tab.prefix.back()) * std::pow(rate, static_cast<long double>(k - n)) /
                   (1.0L - rate);
          },
          [&](const ClosedFormTail& c) { return c.tail_mass(k); },
          [&](const NumericTail& nt) {
            long double sum = 0.0L;
            for (std::uint64_t i = 0; i < nt.max_terms; ++i) {
              sum += nt.weight(k + i);
              if (nt.remainder_bound(k + i + 1) <= nt.relative_precision * sum) return sum;
            }
            throw std::runtime_error(fmt::format(
                "tabular tail sum from k={} did not converge within {} terms", k, nt.max_terms));
          },
      },
      tab.tail);
}

long double DiscountFunction::weight(std::uint64_t k) const {
  require_time(k, "weight");
  return std::visit(overloaded{
                        [&](const Geometric& g) {
                          return std::pow(static_cast<long double>(g.gamma), static_cast<long double>(k));
                        },
                        [&](const Quadratic&) {
                          const long double kk = static_cast<long double>(k);
                          return 1.0L / (kk * (kk + 1.0L));
                        },
                        [&](const FixedHorizon& f) { return k <= f.horizon ? 1.0L : 0.0L; },
                        [&](const Tabular& tab) {
                          return k <= tab.prefix.size() ? static_cast<long double>(tab.prefix[k - 1])
                                                        : tabular_tail_weight(tab, k);
                        },
                    },
                    rep_);
}

long double DiscountFunction::tail_mass(std::uint64_t t) const {
  require_time(t, "tail_mass");
  return std::visit(overloaded{
                        [&](const Geometric& g) {
                          const long double gamma = g.gamma;
                          return std::pow(gamma, static_cast<long double>(t)) / (1.0L - gamma);
                        },
                        [&](const Quadratic&) { return 1.0L / static_cast<long double>(t); },
                        [&](const FixedHorizon& f) {
                          if (t > f.horizon)
                            throw std::domain_error(
                                fmt::format("fixed-horizon discount has no mass after t={}", f.horizon));
                          return static_cast<long double>(f.horizon - t + 1);
                        },
                        [&](const Tabular& tab) {
                          const std::uint64_t n = tab.prefix.size();
                          if (t > n) return tabular_tail_mass(tab, t);
                          long double sum = tabular_tail_mass(tab, n + 1);
                          for (std::uint64_t k = n; k >= t; --k) sum += tab.prefix[k - 1];
                          return sum;
                        },
                    },
                    rep_);
}

double DiscountFunction::normalized_weight(std::uint64_t t, std::uint64_t k) const {
  require_time(t, "normalized_weight");
  if (k < t) throw std::invalid_argument("normalized_weight needs k >= t");
  return std::visit(overloaded{
                        [&](const Geometric& g) {
                          return (1.0 - g.gamma) * std::pow(g.gamma, static_cast<double>(k - t));
                        },
                        [&](const Quadratic&) {
                          const double kk = static_cast<double>(k);
                          return static_cast<double>(t) / (kk * (kk + 1.0));
                        },
                        [&](const FixedHorizon& f) {
                          if (t > f.horizon)
                            throw std::domain_error(
                                fmt::format("fixed-horizon discount has no mass after t={}", f.horizon));
                          return k <= f.horizon ? 1.0 / static_cast<double>(f.horizon - t + 1) : 0.0;
                        },
                        [&](const Tabular&) { return static_cast<double>(weight(k) / tail_mass(t)); },
                    },
                    rep_);
}

double DiscountFunction::tail_ratio(std::uint64_t t, std::uint64_t h) const {
  require_time(t, "tail_ratio");
  return std::visit(overloaded{
                        [&](const Geometric& g) { return std::pow(g.gamma, static_cast<double>(h) + 1.0); },
                        [&](const Quadratic&) {
                          const double tt = static_cast<double>(t);
                          return tt / (tt + static_cast<double>(h) + 1.0);
                        },
                        [&](const FixedHorizon& f) {
                          if (t > f.horizon)
                            throw std::domain_error(
                                fmt::format("fixed-horizon discount has no mass after t={}", f.horizon));
                          if (t + h >= f.horizon) return 0.0;
                          return static_cast<double>(f.horizon - t - h) / static_cast<double>(f.horizon - t + 1);
                        },
                        [&](const Tabular&) {
                          return static_cast<double>(tail_mass(t + h + 1) / tail_mass(t));
                        },
                    },
                    rep_);
}

std::uint64_t DiscountFunction::effective_horizon(std::uint64_t t, double p) const {
  require_time(t, "effective_horizon");
  if (!(p >= 0.0 && p < 1.0))
    throw std::invalid_argument(fmt::format("effective horizon needs p in [0,1), got {}", p));
  // Start from the closed-form inverse where one exists, then settle on the
  // exact minimum of the monotone predicate so ties behave like a scan.
  const double candidate = std::visit(
      overloaded{
          [&](const Geometric& g) { return std::floor(std::log1p(-p) / std::log(g.gamma)); },
          [&](const Quadratic&) { return std::floor(static_cast<double>(t) * p / (1.0 - p)); },
          [&](const FixedHorizon& f) {
            if (t > f.horizon)
              throw std::domain_error(fmt::format("fixed-horizon discount has no mass after t={}", f.horizon));
            return std::floor(p * static_cast<double>(f.horizon - t + 1));
          },
          [&](const Tabular&) { return 0.0; },
      },
      rep_);
  std::uint64_t h = candidate > 0.0 ? static_cast<std::uint64_t>(std::min(candidate, double(kHorizonCap))) : 0;
  auto covers = [&](std::uint64_t x) { return normalized_partial(t, x) > p; };
  while (h > 0 && covers(h - 1)) --h;
  while (!covers(h)) {
    if (++h > kHorizonCap) throw std::runtime_error("effective horizon exceeds supported range");
  }
  return h;
}

std::vector<double> DiscountFunction::normalized_weights(std::uint64_t t, std::uint64_t h) const {
  std::vector<double> weights(h + 1);
  if (kind() == Kind::tabular) {
    const long double mass = tail_mass(t);
    for (std::uint64_t d = 0; d <= h; ++d) weights[d] = static_cast<double>(weight(t + d) / mass);
  } else {
    for (std::uint64_t d = 0; d <= h; ++d) weights[d] = normalized_weight(t, t + d);
  }
  return weights;
}

double backward_sum(std::span<const double> weights, std::span<const double> rewards) {
  double sum = weights.back() * rewards.back();
  for (std::size_t i = rewards.size() - 1; i-- > 0;) sum = weights[i] * rewards[i] + sum;
  return sum;
}

TruncatedValue make_truncated(double sum, double tail_share) {
  return TruncatedValue{std::clamp(sum, 0.0, 1.0), std::clamp(tail_share, 0.0, 1.0)};
}

TruncatedValue truncated_value(const DiscountFunction& d, std::uint64_t t, std::span<const double> rewards) {
  if (rewards.empty()) throw std::invalid_argument("truncated_value needs at least one reward");
  for (std::size_t i = 0; i < rewards.size(); ++i)
    if (!(rewards[i] >= 0.0 && rewards[i] <= 1.0))
      throw std::invalid_argument(fmt::format("reward {} at step {} lies outside [0,1]", rewards[i], t + i));
  const std::uint64_t h = rewards.size() - 1;
  const auto weights = d.normalized_weights(t, h);
  return make_truncated(backward_sum(weights, rewards), d.tail_ratio(t, h));
}

}  // namespace aolab
