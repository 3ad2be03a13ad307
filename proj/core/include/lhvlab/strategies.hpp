#pragma once

// Deterministic local strategies: maps from settings to outcomes.
// Settings and outcomes are 0-based.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lhvlab {

inline constexpr std::size_t kStrategyCap = std::size_t{1} << 20;

class DeterministicStrategy {
 public:
  /// Throws DomainError if an entry is not below `outcomes`.
  DeterministicStrategy(std::vector<std::uint32_t> assignment, std::size_t outcomes);

  std::size_t settings() const noexcept { return assignment_.size(); }
  std::size_t outcomes() const noexcept { return outcomes_; }
  /// J(x)
  std::uint32_t operator()(std::size_t x) const { return assignment_.at(x); }
  const std::vector<std::uint32_t>& assignment() const noexcept { return assignment_; }

  friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;

 private:
  std::vector<std::uint32_t> assignment_;
  std::size_t outcomes_;
};

/// All o^m strategies in lexicographic order of their assignments (setting
/// 0 is the most significant digit).
class StrategySpace {
 public:
  std::size_t settings() const noexcept { return settings_; }
  std::size_t outcomes() const noexcept { return outcomes_; }
  std::size_t size() const noexcept { return size_; }

  /// Outcome that strategy k assigns to setting x; no allocation.
  std::uint32_t outcome(std::size_t k, std::size_t x) const noexcept {
    return table_[k * settings_ + x];
  }
  DeterministicStrategy strategy(std::size_t k) const;
  /// Lexicographic rank of an assignment.
  std::size_t rank_of(const DeterministicStrategy& j) const;

 private:
  friend StrategySpace enumerate_strategies(std::size_t, std::size_t, std::size_t);
  std::size_t settings_ = 0;
  std::size_t outcomes_ = 0;
  std::size_t size_ = 0;
  std::vector<std::uint32_t> table_;
};

/// Throws DomainError for m or o equal to 0 and CapacityError when o^m
/// exceeds `cap`.
StrategySpace enumerate_strategies(std::size_t settings, std::size_t outcomes,
                                   std::size_t cap = kStrategyCap);

/// o^m, or cap + 1 when it would exceed cap.
std::size_t strategy_count(std::size_t settings, std::size_t outcomes, std::size_t cap);

/// The one-hot column delta_{a, J(x)}.
std::vector<double> response_distribution(const DeterministicStrategy& j, std::size_t x);

}  // namespace lhvlab
