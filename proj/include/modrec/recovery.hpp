#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "modrec/spectral.hpp"

namespace modrec {

struct ResidualEstimate {
  std::vector<double> zhat;          // raw first-difference estimate
  std::vector<double> zhat_rounded;  // entries in 2*lambda*Z
  std::vector<double> z;             // cumulative sum of zhat_rounded
  std::vector<int> support;          // indices with zhat_rounded != 0
  int iterations_used = 0;
  bool converged = false;
};

struct IstaConfig {
  double gamma = 0.0;  // <= 0: auto, 0.1 * max |V^H y|
  double tau = 0.0;    // <= 0: auto, 1 / ||V||^2 = 1/n
  int max_iterations = 1000;
  double tolerance = 1e-4;  // l2 change between iterates; 0 runs the full budget
  bool normal_init = false; // default: zero initialization
  // Called after each update with the current iterate; for diagnostics.
  std::function<void(int iteration, std::span<const double> zhat)> observer;
};

double soft_threshold(double x, double theta);

/// Proximal-gradient solve of min 0.5*||y - V z||^2 + gamma*||z||_1 with the
/// iterate kept real. Returns the raw estimate; rounding is the caller's step.
ResidualEstimate ista_solve(const MeasurementSystem& system, const MeasurementVector& y,
                            const IstaConfig& cfg, std::uint64_t init_seed = 0);

/// Nearest multiple of 2*lambda, ties away from zero.
std::vector<double> round_to_lattice(std::span<const double> zhat, double lambda);

/// folded - z, elementwise.
std::vector<double> unfold(std::span<const double> folded, std::span<const double> z);

struct RecoveryResult {
  std::vector<double> signal;  // full input length
  ResidualEstimate residual;   // full input length; support within the solved prefix
  int effective_n = 0;         // samples actually used by the solver
  int m = 0;                   // out-of-band measurement count at effective_n
};

/// Sparse-recovery unfolding: trims to the 99%-energy prefix, solves the
/// out-of-band LASSO for the residual's first difference, rounds to the
/// 2*lambda lattice, integrates, and subtracts.
RecoveryResult lasso_b2r2(std::span<const double> folded, double lambda, double of,
                          const IstaConfig& cfg = {}, std::uint64_t init_seed = 0);

/// Folding-flag unfolding: takes the flagged indices as the support of the
/// residual's first difference (optionally dilated by +-dilation samples) and
/// estimates the amplitudes by least squares on the out-of-band measurements.
RecoveryResult ls_onebit(std::span<const double> folded_quantized,
                         std::span<const std::uint8_t> folding_bits, double lambda, double of,
                         int dilation = 0);

/// Difference-and-refold baseline: the order-th difference of the folded
/// samples is refolded to estimate the same difference of the original, the
/// gap is rounded to the 2*lambda lattice and integrated back. Needs the
/// original's order-th difference inside (-lambda, lambda), i.e. high
/// oversampling, and assumes the first `order` samples carry no folds.
/// order in [1, 8].
std::vector<double> hod_unfold(std::span<const double> folded, double lambda, int order);

/// ||reference - estimate||^2 / ||reference||^2.
double nmse(std::span<const double> reference, std::span<const double> estimate);
double nmse_db(std::span<const double> reference, std::span<const double> estimate);

}  // namespace modrec
