#include "modrec/bounds.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "modrec/modulo.hpp"
#include "modrec/signal.hpp"

using namespace modrec;

TEST_CASE("fold-count bound over the reference grid of thresholds and rates") {
  // (lambda, of, 2k, l_max) for n = 1024, peak = 1.
  struct Cell {
    double lambda;
    double of;
    long long two_k;
    long long l_max;
  };
  const std::vector<Cell> cells = {
      {0.75, 4.0, 256, 512},  {0.75, 6.0, 170, 340},  {0.75, 8.0, 128, 256},
      {0.50, 4.0, 256, 512},  {0.50, 6.0, 170, 340},  {0.50, 8.0, 128, 256},
      {0.25, 4.0, 256, 1024}, {0.25, 6.0, 170, 680},  {0.25, 8.0, 128, 512},
      {0.05, 4.0, 256, 1024}, {0.05, 6.0, 170, 1024}, {0.05, 8.0, 128, 1024},
  };
  for (const auto& cell : cells) {
    const auto report = sparsity_bound(1024, cell.of, 1.0, cell.lambda);
    CHECK(2 * report.k == cell.two_k);
    CHECK(report.l_max == cell.l_max);
    CHECK(report.n == 1024);
    CHECK(report.counted_l == -1);
  }
}

TEST_CASE("no folds happen when the peak stays under the threshold") {
  const auto report = sparsity_bound(1024, 6.0, 0.9, 1.0);
  CHECK(report.l_max == 0);
  CHECK(report.k == 85);
}

TEST_CASE("bound geometry is validated and monotone") {
  CHECK_THROWS_AS(sparsity_bound(1024, 6.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sparsity_bound(1024, 6.0, 1.0, -0.25), std::invalid_argument);
  CHECK_THROWS_AS(sparsity_bound(1024, 0.5, 1.0, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(sparsity_bound(0, 6.0, 1.0, 0.25), std::invalid_argument);

  // Lower threshold folds more; higher rate folds less often per window.
  long long prev = -1;
  for (double lambda : {0.75, 0.5, 0.25, 0.1}) {
    const auto r = sparsity_bound(1024, 8.0, 1.0, lambda);
    CHECK(r.l_max >= prev);
    prev = r.l_max;
  }
  prev = 1 << 30;
  for (double of : {4.0, 6.0, 8.0, 16.0}) {
    const auto r = sparsity_bound(1024, of, 1.0, 0.75);
    CHECK(r.l_max <= prev);
    prev = r.l_max;
  }
}

TEST_CASE("jump counting on lattice sequences") {
  const std::vector<double> zero(16, 0.0);
  CHECK(count_jumps(zero, 0.25) == 0);

  const std::vector<double> two_jumps = {0.0, 0.5, 0.5, 0.0};
  CHECK(count_jumps(two_jumps, 0.25) == 2);

  // Leading nonzero counts against the implicit zero before the record.
  const std::vector<double> leading = {0.5, 0.5};
  CHECK(count_jumps(leading, 0.25) == 1);

  const std::vector<double> stair = {0.0, -0.5, -1.0, -1.0, 0.5};
  CHECK(count_jumps(stair, 0.25) == 3);

  const std::vector<double> off_lattice = {0.0, 0.4};
  CHECK_THROWS_AS(count_jumps(off_lattice, 0.25), std::invalid_argument);
}

TEST_CASE("uniqueness condition for sparse recovery") {
  CHECK(spark_feasible(36, 854));
  CHECK(spark_feasible(427, 854));
  CHECK_FALSE(spark_feasible(428, 854));
  CHECK_FALSE(spark_feasible(500, 854));
  CHECK(spark_feasible(0, 1));
  CHECK_THROWS_AS(spark_feasible(-1, 854), std::invalid_argument);
}

TEST_CASE("measured fold counts sit far below the worst-case bound") {
  // Frozen ensemble values; the bound is loose by design.
  const struct {
    std::uint64_t seed;
    long long jumps;
  } cases[] = {{1, 58}, {2, 60}, {3, 36}};
  const auto bound = sparsity_bound(1024, 6.0, 1.0, 0.25);
  REQUIRE(bound.l_max == 680);
  for (const auto& c : cases) {
    const auto signal = generate_bandlimited(c.seed, 1024, 6.0, 0.5);
    const auto record = fold_signal(signal.samples, 0.25);
    CHECK(count_jumps(record.residual, 0.25) == c.jumps);
    CHECK(c.jumps <= bound.l_max);
  }
}
