#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace modrec {

/// Out-of-band partial-DFT measurement operator. Rows are the DFT rows at the
/// indices in `indices`; never stored densely. Immutable after construction.
struct MeasurementSystem {
  int n = 0;
  double oversampling_factor = 0.0;
  std::vector<int> indices;  // sorted, each k with rho*pi < 2*pi*k/n < 2*pi - rho*pi

  int m() const { return static_cast<int>(indices.size()); }
  /// Squared operator norm of the partial DFT; rows are orthogonal with norm
  /// sqrt(n), so this is exactly n.
  double operator_norm_sq() const { return static_cast<double>(n); }
};

enum class MeasurementSource { exact, quantized, noisy };

struct MeasurementVector {
  std::vector<std::complex<double>> values;  // length m
  MeasurementSource source = MeasurementSource::exact;
};

/// True when DFT bin k lies in the signal band [0, rho*pi] or its mirror,
/// boundaries included; the complement is the out-of-band set.
bool in_band(int k, int n, double of);

/// All k in {0..n-1} with rho*pi < 2*pi*k/n < 2*pi - rho*pi, strictly.
std::vector<int> out_of_band_indices(int n, double of);

MeasurementSystem make_measurement_system(int n, double of);

/// DFT of the first-differenced input restricted to the out-of-band bins.
/// Accepts length >= n and uses the first n samples.
MeasurementVector measure(std::span<const double> folded, const MeasurementSystem& system,
                          MeasurementSource source = MeasurementSource::exact);

/// V * zhat via a full-length FFT restricted to the out-of-band bins.
std::vector<std::complex<double>> apply_forward(const MeasurementSystem& system,
                                                std::span<const double> zhat);

/// Real part of V^H * y via a zero-filled unnormalized inverse FFT.
std::vector<double> apply_adjoint(const MeasurementSystem& system,
                                  std::span<const std::complex<double>> y);

/// Least-squares amplitudes on a fixed support: solves the normal equations
/// (V_T^H V_T) x = V_T^H y and returns Re(x), ordered like `support`.
/// `support` must be sorted, duplicate-free, within [0, n).
std::vector<double> restricted_pseudoinverse(const MeasurementSystem& system,
                                             std::span<const int> support,
                                             const MeasurementVector& y);

}  // namespace modrec
