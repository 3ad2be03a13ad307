#include <map>
#include <set>

#include "doctest.h"
#include "lhvlab/errors.hpp"
#include "lhvlab/strategies.hpp"
#include "oracles.hpp"

using namespace lhvlab;

TEST_CASE("strategy counts") {
  CHECK(enumerate_strategies(1, 2).size() == 2);
  CHECK(enumerate_strategies(2, 2).size() == 4);
  const StrategySpace s = enumerate_strategies(3, 3);
  CHECK(s.size() == 27);
  std::set<std::vector<std::uint32_t>> seen;
  for (std::size_t k = 0; k < s.size(); ++k) seen.insert(s.strategy(k).assignment());
  CHECK(seen.size() == 27);
}

TEST_CASE("lexicographic order matches an independent odometer") {
  for (std::size_t m = 1; m <= 4; ++m)
    for (std::size_t o = 1; o <= 4; ++o) {
      const StrategySpace s = enumerate_strategies(m, o);
      const auto ref = oracle::all_assignments(m, o);
      REQUIRE(s.size() == ref.size());
      for (std::size_t k = 0; k < s.size(); ++k)
        for (std::size_t x = 0; x < m; ++x) CHECK(s.outcome(k, x) == ref[k][x]);
    }
}

TEST_CASE("rank round trip") {
  for (std::size_t m = 1; m <= 5; ++m)
    for (std::size_t o = 2; o <= 4; ++o) {
      const StrategySpace s = enumerate_strategies(m, o);
      for (std::size_t k = 0; k < s.size(); ++k) CHECK(s.rank_of(s.strategy(k)) == k);
    }
}

TEST_CASE("response distributions") {
  const DeterministicStrategy j({0, 1}, 2);
  CHECK(response_distribution(j, 0) == std::vector<double>{1.0, 0.0});
  CHECK(response_distribution(j, 1) == std::vector<double>{0.0, 1.0});

  for (std::size_t m = 1; m <= 6; ++m)
    for (std::size_t o = 1; o <= 6; ++o) {
      if (strategy_count(m, o, 10'000) > 10'000) continue;
      const StrategySpace s = enumerate_strategies(m, o);
      std::size_t per_setting = 1;
      for (std::size_t i = 1; i < m; ++i) per_setting *= o;
      for (std::size_t x = 0; x < m; ++x) {
        std::map<std::vector<double>, std::size_t> hits;
        for (std::size_t k = 0; k < s.size(); ++k) {
          const auto col = response_distribution(s.strategy(k), x);
          double total = 0.0;
          for (double v : col) total += v;
          CHECK(total == 1.0);
          ++hits[col];
        }
        CHECK(hits.size() == o);
        for (const auto& [col, count] : hits) CHECK(count == per_setting);
      }
    }
}

TEST_CASE("strategy errors") {
  CHECK_THROWS_AS(DeterministicStrategy({0, 2}, 2), DomainError);
  CHECK_THROWS_AS(enumerate_strategies(0, 2), DomainError);
  CHECK_THROWS_AS(enumerate_strategies(2, 0), DomainError);
  CHECK_THROWS_AS(enumerate_strategies(21, 2), CapacityError);
  CHECK(strategy_count(64, 2, 1000) == 1001);
  try {
    enumerate_strategies(5, 3, 100);
    FAIL("expected CapacityError");
  } catch (const CapacityError& e) {
    CHECK(e.cap() == 100);
    CHECK(e.required() > 100);
  }
}
