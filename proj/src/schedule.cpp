#include "aolab/schedule.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace aolab {

std::uint64_t burst_length(std::uint64_t i, double scale) {
  if (i == 0) throw std::invalid_argument("burst_length: indices start at 1");
  if (scale == 1.0) return static_cast<std::uint64_t>(std::bit_width(i)) - 1;
  return static_cast<std::uint64_t>(std::floor(scale * std::log2(static_cast<double>(i))));
}

std::uint64_t burst_threshold(std::uint64_t h, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("burst scale must be positive");
  // b is nondecreasing, so the first i with b(i) >= h works for all later i.
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
  while (burst_length(hi, scale) < h) hi *= 2;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (burst_length(mid, scale) >= h)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

ExplorationSchedule::ExplorationSchedule(std::uint64_t seed, std::uint32_t num_actions, double burst_scale)
    : num_actions_(num_actions), burst_scale_(burst_scale) {
  if (num_actions == 0) throw std::invalid_argument("schedule needs a nonempty action alphabet");
  if (!(burst_scale > 0.0)) throw std::invalid_argument("burst scale must be positive");
  std::seed_seq chi_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 1u};
  std::seed_seq psi_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 2u};
  chi_rng_.seed(chi_seq);
  psi_rng_.seed(psi_seq);
  bar_prefix_.push_back(0);
}

ExplorationSchedule ExplorationSchedule::from_chi(const std::vector<bool>& chi, std::uint64_t psi_seed,
                                                  std::uint32_t num_actions, double burst_scale) {
  ExplorationSchedule s(psi_seed, num_actions, burst_scale);
  for (bool bit : chi) s.push(bit);
  s.fixed_ = true;
  return s;
}

void ExplorationSchedule::push(bool chi_bit) {
  const std::uint64_t i = chi_.size() + 1;
  chi_.push_back(chi_bit ? 1 : 0);
  if (chi_bit) covered_until_ = std::max(covered_until_, i + burst_length(i, burst_scale_));
  const bool bar = i <= covered_until_;
  chi_bar_.push_back(bar ? 1 : 0);
  bar_prefix_.push_back(bar_prefix_.back() + (bar ? 1 : 0));
  psi_.push_back(std::uniform_int_distribution<std::uint32_t>(0, num_actions_ - 1)(psi_rng_));
}

void ExplorationSchedule::materialize(std::uint64_t n) {
  if (n <= chi_.size()) return;
  if (fixed_) throw std::out_of_range(fmt::format("fixed schedule holds only {} bits", chi_.size()));
  chi_.reserve(n);
  chi_bar_.reserve(n);
  psi_.reserve(n);
  bar_prefix_.reserve(n + 1);
  while (chi_.size() < n) {
    const std::uint64_t i = chi_.size() + 1;
    push(std::uniform_int_distribution<std::uint64_t>(0, i - 1)(chi_rng_) == 0);
  }
}

void ExplorationSchedule::check(std::uint64_t i) const {
  if (i == 0) throw std::out_of_range("schedule indices start at 1");
  if (i > chi_.size())
    throw std::out_of_range(fmt::format("schedule bit {} not materialized (have {})", i, chi_.size()));
}

bool ExplorationSchedule::chi(std::uint64_t i) const {
  check(i);
  return chi_[i - 1] != 0;
}

bool ExplorationSchedule::chi_bar(std::uint64_t k) const {
  check(k);
  return chi_bar_[k - 1] != 0;
}

bool ExplorationSchedule::dot_chi(std::uint64_t h, std::uint64_t k) const {
  check(k);
  check(k + h);
  return bar_prefix_[k + h] - bar_prefix_[k - 1] > 0;
}

Action ExplorationSchedule::psi(std::uint64_t k) const {
  check(k);
  return Action{psi_[k - 1]};
}

ExplorationSchedule sample_schedule(std::uint64_t seed, std::uint64_t n, std::uint32_t num_actions,
                                    double burst_scale) {
  if (n == 0) throw std::invalid_argument("sample_schedule needs n >= 1");
  ExplorationSchedule s(seed, num_actions, burst_scale);
  s.materialize(n);
  return s;
}

}  // namespace aolab
