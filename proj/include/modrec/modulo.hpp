#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace modrec {

/// B-bit uniform mid-rise quantizer over the ADC range [-lambda, lambda].
struct QuantizerSpec {
  double lambda = 0.0;
  int bits = 0;

  /// Quantization step 2*lambda / 2^B.
  double step() const;
};

/// Folded (and optionally quantized) samples together with the residual
/// z(n) = folded(n) - original(n) and the per-sample folding-event bits.
struct FoldedRecord {
  std::vector<double> folded;
  double lambda = 0.0;
  int bits = 0;  // 0 = unquantized
  std::vector<std::uint8_t> folding_bits;  // empty when absent
  std::vector<double> residual;            // entries in 2*lambda*Z; empty when unknown

  bool has_folding_bits() const { return !folding_bits.empty(); }
};

/// Centered modulo: ((x + lambda) mod 2*lambda) - lambda, output in [-lambda, lambda).
double fold_scalar(double x, double lambda);

/// Folds every sample, keeping the residual and the folding-event bit stream
/// b(n) = 1 iff z(n) != z(n-1) with z(-1) = 0.
FoldedRecord fold_signal(std::span<const double> samples, double lambda);

/// out[0] = x[0], out[n] = x[n] - x[n-1]; exact inverse of cumulative_sum.
std::vector<double> first_difference(std::span<const double> x);
std::vector<double> cumulative_sum(std::span<const double> x);

/// Mid-rise quantization; inputs must lie in [-lambda, lambda] (top clamps).
std::vector<double> quantize(std::span<const double> x, const QuantizerSpec& spec);

/// Acquisition word with the LSB reserved for the folding flag: samples carry
/// budget_bits-1 quantizer bits, the flag rides along unchanged.
struct PackedOneBit {
  std::vector<double> quantized;
  std::vector<std::uint8_t> lsb;
  int sample_bits = 0;
};
PackedOneBit pack_with_folding_bit(std::span<const double> folded, double lambda, int budget_bits,
                                   std::span<const std::uint8_t> folding_bits);

/// Adds seeded white Gaussian noise at the requested SNR relative to the
/// input's mean power. +inf SNR returns the input unchanged. No re-folding.
std::vector<double> add_noise(std::span<const double> x, double snr_db, std::uint64_t seed);

void write_folded(const FoldedRecord& record, std::ostream& out);
void write_folded_file(const FoldedRecord& record, const std::string& path);
FoldedRecord read_folded(std::istream& in);
FoldedRecord read_folded_file(const std::string& path);

}  // namespace modrec
