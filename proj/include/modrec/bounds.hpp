#pragma once

#include <span>
#include <vector>

namespace modrec {

/// Folding-sparsity bound for an n-sample signal of the given peak folded at
/// lambda with oversampling of: l_max = min(4k(1 + floor((peak-lambda)/(2*lambda))), n)
/// where k = floor(n / (2*of)). counted_l is -1 until a measured count is attached.
struct BoundReport {
  int n = 0;
  double oversampling_factor = 0.0;
  double lambda = 0.0;
  double peak = 0.0;
  long long k = 0;
  long long l_max = 0;
  long long counted_l = -1;
  long long m = 0;        // out-of-band measurement count at (n, of)
  bool spark_ok = false;  // meaningful only when counted_l >= 0
};

BoundReport sparsity_bound(int n, double of, double peak, double lambda);

/// Number of level changes in a residual sequence (entries in 2*lambda*Z),
/// counted against an implicit leading zero; equals the nonzero count of the
/// residual's first difference.
long long count_jumps(std::span<const double> z, double lambda);

/// Uniqueness condition for l-sparse recovery from m partial-DFT measurements.
bool spark_feasible(long long l, long long m);

}  // namespace modrec
