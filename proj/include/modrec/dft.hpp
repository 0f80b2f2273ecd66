#pragma once

#include <complex>
#include <span>
#include <vector>

namespace modrec::dft {

/// Unnormalized forward DFT: X[k] = sum_n x[n] e^{-j2pikn/N}.
std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x);
std::vector<std::complex<double>> forward(std::span<const double> x);

/// Unnormalized backward DFT: x[n] = sum_k X[k] e^{+j2pikn/N} (no 1/N factor).
std::vector<std::complex<double>> backward(std::span<const std::complex<double>> x);

/// Normalized inverse: backward(x) / N.
std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> x);

}  // namespace modrec::dft
