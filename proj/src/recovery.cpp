#include "modrec/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "modrec/modulo.hpp"
#include "modrec/signal.hpp"

namespace modrec {
namespace {

constexpr double kEnergyFraction = 0.99;

std::vector<int> nonzero_indices(std::span<const double> x) {
  std::vector<int> out;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) out.push_back(static_cast<int>(i));
  return out;
}

// Extends a prefix estimate of the residual difference to the full record
// length, then rounds, integrates, and unfolds.
RecoveryResult finish(std::span<const double> folded, double lambda, std::vector<double> zhat_prefix,
                      int effective_n, int m, int iterations, bool converged) {
  std::vector<double> zhat(folded.size(), 0.0);
  std::copy(zhat_prefix.begin(), zhat_prefix.end(), zhat.begin());
  RecoveryResult result;
  result.residual.zhat = std::move(zhat);
  result.residual.zhat_rounded = round_to_lattice(result.residual.zhat, lambda);
  result.residual.z = cumulative_sum(result.residual.zhat_rounded);
  result.residual.support = nonzero_indices(result.residual.zhat_rounded);
  result.residual.iterations_used = iterations;
  result.residual.converged = converged;
  result.signal = unfold(folded, result.residual.z);
  result.effective_n = effective_n;
  result.m = m;
  return result;
}

}  // namespace

double soft_threshold(double x, double theta) {
  if (theta < 0.0) throw std::invalid_argument("threshold must be nonnegative");
  const double mag = std::abs(x) - theta;
  return mag > 0.0 ? std::copysign(mag, x) : 0.0;
}

ResidualEstimate ista_solve(const MeasurementSystem& system, const MeasurementVector& y,
                            const IstaConfig& cfg, std::uint64_t init_seed) {
  if (y.values.size() != system.indices.size())
    throw std::invalid_argument("measurement length mismatch");
  if (cfg.max_iterations < 1) throw std::invalid_argument("need at least one iteration");
  if (cfg.tolerance < 0.0) throw std::invalid_argument("tolerance must be nonnegative");
  const auto n = static_cast<std::size_t>(system.n);
  const double tau = cfg.tau > 0.0 ? cfg.tau : 1.0 / system.operator_norm_sq();

  double gamma = cfg.gamma;
  if (gamma <= 0.0) {
    const auto correlation = apply_adjoint(system, y.values);
    double peak = 0.0;
    for (double v : correlation) peak = std::max(peak, std::abs(v));
    gamma = 0.1 * peak;
  }
  const double threshold = gamma * tau;

  ResidualEstimate est;
  est.zhat.assign(n, 0.0);
  if (cfg.normal_init) {
    std::mt19937_64 rng(init_seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    for (double& v : est.zhat) v = unit(rng);
  }

  std::vector<double> next(n);
  for (int iteration = 1; iteration <= cfg.max_iterations; ++iteration) {
    auto residual = apply_forward(system, est.zhat);
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= y.values[i];
    const auto gradient = apply_adjoint(system, residual);

    double delta_sq = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = soft_threshold(est.zhat[i] - tau * gradient[i], threshold);
      const double d = next[i] - est.zhat[i];
      delta_sq += d * d;
      finite = finite && std::isfinite(next[i]);
    }
    if (!finite) throw std::runtime_error("divergence: iterate left the finite range");
    est.zhat.swap(next);
    est.iterations_used = iteration;
    if (cfg.observer) cfg.observer(iteration, est.zhat);
    if (std::sqrt(delta_sq) < cfg.tolerance) {
      est.converged = true;
      break;
    }
  }
  return est;
}

std::vector<double> round_to_lattice(std::span<const double> zhat, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const double period = 2.0 * lambda;
  std::vector<double> out(zhat.size());
  for (std::size_t i = 0; i < zhat.size(); ++i) out[i] = period * std::round(zhat[i] / period);
  return out;
}

std::vector<double> unfold(std::span<const double> folded, std::span<const double> z) {
  if (folded.size() != z.size()) throw std::invalid_argument("length mismatch");
  std::vector<double> out(folded.size());
  for (std::size_t i = 0; i < folded.size(); ++i) out[i] = folded[i] - z[i];
  return out;
}

RecoveryResult lasso_b2r2(std::span<const double> folded, double lambda, double of,
                          const IstaConfig& cfg, std::uint64_t init_seed) {
  const auto n_eff = static_cast<int>(effective_length(folded, kEnergyFraction));
  const auto system = make_measurement_system(n_eff, of);
  const auto y = measure(folded, system);
  auto est = ista_solve(system, y, cfg, init_seed);
  return finish(folded, lambda, std::move(est.zhat), n_eff, system.m(), est.iterations_used,
                est.converged);
}

RecoveryResult ls_onebit(std::span<const double> folded_quantized,
                         std::span<const std::uint8_t> folding_bits, double lambda, double of,
                         int dilation) {
  if (folding_bits.size() != folded_quantized.size())
    throw std::invalid_argument("folding bit stream length mismatch");
  if (dilation < 0) throw std::invalid_argument("dilation must be nonnegative");
  const auto n_eff = static_cast<int>(effective_length(folded_quantized, kEnergyFraction));
  const auto system = make_measurement_system(n_eff, of);
  const auto y = measure(folded_quantized, system, MeasurementSource::quantized);

  std::set<int> marked;
  for (int i = 0; i < n_eff; ++i) {
    if (!folding_bits[static_cast<std::size_t>(i)]) continue;
    for (int j = std::max(0, i - dilation); j <= std::min(n_eff - 1, i + dilation); ++j)
      marked.insert(j);
  }
  const std::vector<int> support(marked.begin(), marked.end());
  if (support.empty())
    return finish(folded_quantized, lambda, {}, n_eff, system.m(), 0, true);

  const auto amplitudes = restricted_pseudoinverse(system, support, y);
  std::vector<double> zhat(static_cast<std::size_t>(n_eff), 0.0);
  for (std::size_t a = 0; a < support.size(); ++a)
    zhat[static_cast<std::size_t>(support[a])] = amplitudes[a];
  return finish(folded_quantized, lambda, std::move(zhat), n_eff, system.m(), 0, true);
}

std::vector<double> hod_unfold(std::span<const double> folded, double lambda, int order) {
  if (order < 1 || order > 8) throw std::invalid_argument("difference order must be in [1, 8]");
  std::vector<double> diff(folded.begin(), folded.end());
  for (int j = 0; j < order; ++j) diff = first_difference(diff);

  // Refolding the differences recovers the original's differences as long as
  // they stay inside (-lambda, lambda); the gap is then the residual's
  // order-th difference, a lattice sequence. The first `order` rows mix in
  // implicit zeros ahead of the record, where that containment does not hold;
  // the assumption that the signal starts unfolded pins the residual (and so
  // the gap) to zero there instead.
  std::vector<double> gap(diff.size());
  for (std::size_t i = 0; i < diff.size(); ++i)
    gap[i] = i < static_cast<std::size_t>(order) ? 0.0 : diff[i] - fold_scalar(diff[i], lambda);
  auto z = round_to_lattice(gap, lambda);
  for (int j = 0; j < order; ++j) z = cumulative_sum(z);
  return unfold(folded, z);
}

double nmse(std::span<const double> reference, std::span<const double> estimate) {
  if (reference.size() != estimate.size()) throw std::invalid_argument("length mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = reference[i] - estimate[i];
    num += d * d;
    den += reference[i] * reference[i];
  }
  if (den == 0.0) throw std::invalid_argument("zero reference signal");
  return num / den;
}

double nmse_db(std::span<const double> reference, std::span<const double> estimate) {
  return 10.0 * std::log10(nmse(reference, estimate));
}

}  // namespace modrec
