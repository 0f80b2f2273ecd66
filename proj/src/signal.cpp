#include "modrec/signal.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include "modrec/dft.hpp"
#include "modrec/spectral.hpp"
#include "textio.hpp"

namespace modrec {
namespace {

using textio::format_double;
using textio::header_value;
using textio::parse_double;
using textio::parse_int;
using textio::read_line;

void check_geometry(int n, double of) {
  if (n < 8) throw std::invalid_argument("need at least 8 samples");
  if (!(of > 1.0)) throw std::invalid_argument("oversampling factor must exceed 1");
}

}  // namespace

double SampledSignal::peak() const {
  double p = 0.0;
  for (double v : samples) p = std::max(p, std::abs(v));
  return p;
}

double SampledSignal::energy() const {
  double e = 0.0;
  for (double v : samples) e += v * v;
  return e;
}

std::vector<double> random_inband(std::uint64_t seed, int n, double of) {
  check_geometry(n, of);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(n));
  spectrum[0] = in_band(0, n, of) ? std::complex<double>(unit(rng), 0.0) : 0.0;
  // Conjugate-symmetric fill so the time signal is real; of > 1 keeps the
  // Nyquist bin out of band, so only paired bins carry coefficients.
  for (int k = 1; 2 * k < n; ++k) {
    if (!in_band(k, n, of)) continue;
    const double re = unit(rng);
    const double im = unit(rng);
    spectrum[static_cast<std::size_t>(k)] = {re, im};
    spectrum[static_cast<std::size_t>(n - k)] = {re, -im};
  }
  auto time = dft::inverse(spectrum);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = time[static_cast<std::size_t>(i)].real();
  return out;
}

SampledSignal generate_bandlimited(std::uint64_t seed, int n, double of, double envelope_width) {
  if (!(envelope_width > 0.0) || envelope_width > 1.0)
    throw std::invalid_argument("envelope width must be in (0, 1]");
  SampledSignal signal;
  signal.samples = random_inband(seed, n, of);
  signal.oversampling_factor = of;
  signal.seed = seed;

  int width = static_cast<int>(std::lround(envelope_width * n));
  width = std::min(std::max(width, 2), n);
  const int start = (n - width) / 2;
  for (int i = 0; i < n; ++i) {
    const int offset = i - start;
    double w = 0.0;
    if (offset >= 0 && offset < width)
      w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * offset / (width - 1)));
    signal.samples[static_cast<std::size_t>(i)] *= w;
  }
  return normalize_peak(std::move(signal));
}

SampledSignal normalize_peak(SampledSignal signal) {
  const double p = signal.peak();
  if (p == 0.0) throw std::invalid_argument("cannot peak-normalize an all-zero signal");
  for (double& v : signal.samples) v /= p;
  return signal;
}

std::size_t effective_length(std::span<const double> x, double energy_fraction) {
  if (x.empty()) throw std::invalid_argument("empty sequence");
  if (!(energy_fraction > 0.0) || !(energy_fraction < 1.0))
    throw std::invalid_argument("energy fraction must be in (0, 1)");
  double total = 0.0;
  for (double v : x) total += v * v;
  if (total == 0.0) throw std::invalid_argument("all-zero sequence has no effective length");
  const double target = energy_fraction * total;
  double running = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    running += x[i] * x[i];
    if (running >= target) return i + 1;
  }
  return x.size();
}

void write_signal(const SampledSignal& signal, std::ostream& out) {
  out << "N=" << signal.samples.size() << '\n';
  out << "OF=" << format_double(signal.oversampling_factor) << '\n';
  out << "seed=" << signal.seed << '\n';
  for (double v : signal.samples) out << format_double(v) << '\n';
  if (!out) throw std::runtime_error("failed writing signal");
}

void write_signal_file(const SampledSignal& signal, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_signal(signal, out);
}

SampledSignal read_signal(std::istream& in) {
  SampledSignal signal;
  const long long n = parse_int(header_value(read_line(in, "header"), "N"), "N");
  if (n < 0) throw std::runtime_error("negative sample count");
  signal.oversampling_factor = parse_double(header_value(read_line(in, "header"), "OF"), "OF");
  signal.seed = static_cast<std::uint64_t>(parse_int(header_value(read_line(in, "header"), "seed"), "seed"));
  signal.samples.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i)
    signal.samples.push_back(parse_double(read_line(in, "sample"), "sample"));
  return signal;
}

SampledSignal read_signal_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_signal(in);
}

}  // namespace modrec
