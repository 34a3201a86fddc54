#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "aolab/history.hpp"

namespace aolab {

/// Burst length b(i) = floor(scale * log2 i); exact integer arithmetic for
/// scale == 1.
std::uint64_t burst_length(std::uint64_t i, double scale = 1.0);

/// Least i0 with burst_length(i) + 1 > h for every i >= i0.
std::uint64_t burst_threshold(std::uint64_t h, double scale = 1.0);

/// Realized exploration schedule:
///   chi_i      ~ Bernoulli(1/i), independently (so chi_1 = 1),
///   chi_bar_k  = 1 iff k lies in [i, i + b(i)] for some i with chi_i = 1,
///   dot_chi^h_k = 1 iff some chi_bar bit in [k, k + h] is set,
///   psi_k      uniform over the action alphabet, independent of chi.
/// chi and psi come from separate streams seeded from (seed, role), so the
/// exploration times never depend on the alphabet size and vice versa.
/// Bits are realized lazily; all indices are 1-based.
class ExplorationSchedule {
 public:
  explicit ExplorationSchedule(std::uint64_t seed, std::uint32_t num_actions = 2, double burst_scale = 1.0);

  /// Schedule with a fixed chi prefix (chi[0] is chi_1) and psi drawn from
  /// `psi_seed`. It cannot be extended past chi.size().
  static ExplorationSchedule from_chi(const std::vector<bool>& chi, std::uint64_t psi_seed,
                                      std::uint32_t num_actions = 2, double burst_scale = 1.0);

  /// Realizes all bits through index n.
  void materialize(std::uint64_t n);
  std::uint64_t materialized() const { return chi_.size(); }

  bool chi(std::uint64_t i) const;
  bool chi_bar(std::uint64_t k) const;
  /// Requires the prefix through k + h to be materialized.
  bool dot_chi(std::uint64_t h, std::uint64_t k) const;
  Action psi(std::uint64_t k) const;

  double burst_scale() const { return burst_scale_; }
  std::uint32_t num_actions() const { return num_actions_; }

 private:
  ExplorationSchedule() = default;
  void push(bool chi_bit);
  void check(std::uint64_t i) const;

  std::mt19937_64 chi_rng_;
  std::mt19937_64 psi_rng_;
  std::uint32_t num_actions_ = 2;
  double burst_scale_ = 1.0;
  bool fixed_ = false;
  std::uint64_t covered_until_ = 0;
  std::vector<std::uint8_t> chi_;
  std::vector<std::uint8_t> chi_bar_;
  std::vector<std::uint32_t> psi_;
  /// Prefix counts of chi_bar for O(1) window queries; bar_prefix_[k] = #1(chi_bar_{1:k}).
  std::vector<std::uint32_t> bar_prefix_;
};

/// Schedule realized through n.
ExplorationSchedule sample_schedule(std::uint64_t seed, std::uint64_t n, std::uint32_t num_actions = 2,
                                    double burst_scale = 1.0);

}  // namespace aolab
