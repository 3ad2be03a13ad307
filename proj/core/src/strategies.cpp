#include "lhvlab/strategies.hpp"

#include <string>

#include "lhvlab/errors.hpp"

namespace lhvlab {

DeterministicStrategy::DeterministicStrategy(std::vector<std::uint32_t> assignment,
                                             std::size_t outcomes)
    : assignment_(std::move(assignment)), outcomes_(outcomes) {
  for (auto a : assignment_) {
    if (a >= outcomes_) {
      throw DomainError("DeterministicStrategy: outcome " + std::to_string(a) + " out of range");
    }
  }
}

std::size_t strategy_count(std::size_t settings, std::size_t outcomes, std::size_t cap) {
  std::size_t n = 1;
  for (std::size_t x = 0; x < settings; ++x) {
    if (outcomes != 0 && n > cap / outcomes) return cap + 1;
    n *= outcomes;
  }
  return n;
}

StrategySpace enumerate_strategies(std::size_t settings, std::size_t outcomes, std::size_t cap) {
  if (settings == 0 || outcomes == 0) {
    throw DomainError("enumerate_strategies: settings and outcomes must be positive");
  }
  const std::size_t n = strategy_count(settings, outcomes, cap);
  if (n > cap) {
    throw CapacityError("enumerate_strategies: " + std::to_string(outcomes) + "^" +
                            std::to_string(settings) + " strategies exceed the cap of " +
                            std::to_string(cap),
                        n, cap);
  }
  StrategySpace s;
  s.settings_ = settings;
  s.outcomes_ = outcomes;
  s.size_ = n;
  s.table_.resize(n * settings);
  std::vector<std::uint32_t> digits(settings, 0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t x = 0; x < settings; ++x) s.table_[k * settings + x] = digits[x];
    // odometer increment, last setting fastest
    for (std::size_t x = settings; x-- > 0;) {
      if (++digits[x] < outcomes) break;
      digits[x] = 0;
    }
  }
  return s;
}

DeterministicStrategy StrategySpace::strategy(std::size_t k) const {
  if (k >= size_) throw DomainError("StrategySpace: index out of range");
  return DeterministicStrategy(
      std::vector<std::uint32_t>(table_.begin() + static_cast<std::ptrdiff_t>(k * settings_),
                                 table_.begin() + static_cast<std::ptrdiff_t>((k + 1) * settings_)),
      outcomes_);
}

std::size_t StrategySpace::rank_of(const DeterministicStrategy& j) const {
  if (j.settings() != settings_ || j.outcomes() != outcomes_) {
    throw DomainError("StrategySpace: strategy from a different space");
  }
  std::size_t r = 0;
  for (std::size_t x = 0; x < settings_; ++x) r = r * outcomes_ + j(x);
  return r;
}

std::vector<double> response_distribution(const DeterministicStrategy& j, std::size_t x) {
  if (x >= j.settings()) {
    throw DomainError("response_distribution: setting " + std::to_string(x) + " out of range");
  }
  std::vector<double> column(j.outcomes(), 0.0);
  column[j(x)] = 1.0;
  return column;
}

}  // namespace lhvlab
