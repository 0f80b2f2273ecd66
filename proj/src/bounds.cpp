#include "modrec/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "modrec/spectral.hpp"

namespace modrec {

BoundReport sparsity_bound(int n, double of, double peak, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(of > 1.0)) throw std::invalid_argument("oversampling factor must exceed 1");
  if (n < 4) throw std::invalid_argument("need at least 4 samples");
  BoundReport report;
  report.n = n;
  report.oversampling_factor = of;
  report.lambda = lambda;
  report.peak = peak;
  report.k = static_cast<long long>(std::floor(n / (2.0 * of)));
  if (peak < lambda) {
    report.l_max = 0;  // no folding can occur
  } else {
    const auto extra = static_cast<long long>(std::floor((peak - lambda) / (2.0 * lambda)));
    report.l_max = std::min(4 * report.k * (1 + extra), static_cast<long long>(n));
  }
  report.m = static_cast<long long>(out_of_band_indices(n, of).size());
  return report;
}

long long count_jumps(std::span<const double> z, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const double period = 2.0 * lambda;
  long long jumps = 0;
  long long prev = 0;
  for (double v : z) {
    const double q = v / period;
    const double rounded = std::round(q);
    if (std::abs(q - rounded) > 1e-9)
      throw std::invalid_argument("residual entry off the 2*lambda lattice");
    const auto level = static_cast<long long>(rounded);
    if (level != prev) ++jumps;
    prev = level;
  }
  return jumps;
}

bool spark_feasible(long long l, long long m) {
  if (l < 0 || m < 0) throw std::invalid_argument("counts must be nonnegative");
  return 2 * l < m + 1;
}

}  // namespace modrec
