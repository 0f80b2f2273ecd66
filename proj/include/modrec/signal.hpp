#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace modrec {

struct SampledSignal {
  std::vector<double> samples;
  double oversampling_factor = 0.0;
  std::uint64_t seed = 0;

  double rho() const { return 1.0 / oversampling_factor; }
  std::size_t length() const { return samples.size(); }
  double peak() const;    // max |samples|
  double energy() const;  // sum of squared samples
};

/// Time-domain signal whose DFT is seeded standard-normal inside the band
/// [0, rho*pi] and its mirror, exactly zero elsewhere. No envelope, no
/// normalization; building block for generate_bandlimited and for tests.
std::vector<double> random_inband(std::uint64_t seed, int n, double of);

/// random_inband shaped by a raised-cosine envelope of relative width
/// `envelope_width` centered at n/2, then peak-normalized to 1.
SampledSignal generate_bandlimited(std::uint64_t seed, int n, double of, double envelope_width);

/// Scales so max |samples| = 1. All-zero input is an error.
SampledSignal normalize_peak(SampledSignal signal);

/// Smallest prefix length whose energy reaches energy_fraction of the total.
std::size_t effective_length(std::span<const double> x, double energy_fraction);

void write_signal(const SampledSignal& signal, std::ostream& out);
void write_signal_file(const SampledSignal& signal, const std::string& path);
SampledSignal read_signal(std::istream& in);
SampledSignal read_signal_file(const std::string& path);

}  // namespace modrec
