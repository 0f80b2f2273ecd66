#include "modrec/modulo.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <string_view>

#include "textio.hpp"

namespace modrec {
namespace {

using textio::format_double;
using textio::header_value;
using textio::parse_double;
using textio::parse_int;
using textio::read_line;

void require_lambda(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
}

// Fold with the integer fold count exposed; output stays in [-lambda, lambda).
double fold_counted(double x, double lambda, long long& count) {
  const double period = 2.0 * lambda;
  double k = std::floor((x + lambda) / period);
  double m = x - period * k;
  // floor() rounding can land one period off at the boundaries.
  if (m < -lambda) {
    m += period;
    k -= 1.0;
  } else if (m >= lambda) {
    m -= period;
    k += 1.0;
  }
  count = static_cast<long long>(k);
  return m;
}

}  // namespace

double QuantizerSpec::step() const {
  require_lambda(lambda);
  if (bits < 1) throw std::invalid_argument("quantizer needs at least one bit");
  return 2.0 * lambda / static_cast<double>(1u << bits);
}

double fold_scalar(double x, double lambda) {
  require_lambda(lambda);
  long long unused;
  return fold_counted(x, lambda, unused);
}

FoldedRecord fold_signal(std::span<const double> samples, double lambda) {
  require_lambda(lambda);
  FoldedRecord record;
  record.lambda = lambda;
  record.folded.resize(samples.size());
  record.residual.resize(samples.size());
  record.folding_bits.resize(samples.size());
  long long prev_count = 0;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    long long count = 0;
    record.folded[n] = fold_counted(samples[n], lambda, count);
    record.residual[n] = record.folded[n] - samples[n];
    record.folding_bits[n] = (count != prev_count) ? 1 : 0;
    prev_count = count;
  }
  return record;
}

std::vector<double> first_difference(std::span<const double> x) {
  std::vector<double> out(x.size());
  double prev = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    out[n] = x[n] - prev;
    prev = x[n];
  }
  return out;
}

std::vector<double> cumulative_sum(std::span<const double> x) {
  std::vector<double> out(x.size());
  double acc = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    acc += x[n];
    out[n] = acc;
  }
  return out;
}

std::vector<double> quantize(std::span<const double> x, const QuantizerSpec& spec) {
  const double step = spec.step();
  const long long top = (1ll << spec.bits) - 1;
  std::vector<double> out(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (std::abs(x[n]) > spec.lambda + 1e-12)
      throw std::invalid_argument("sample outside quantizer range");
    long long code = static_cast<long long>(std::floor((x[n] + spec.lambda) / step));
    if (code < 0) code = 0;
    if (code > top) code = top;
    out[n] = -spec.lambda + (static_cast<double>(code) + 0.5) * step;
  }
  return out;
}

PackedOneBit pack_with_folding_bit(std::span<const double> folded, double lambda, int budget_bits,
                                   std::span<const std::uint8_t> folding_bits) {
  if (budget_bits < 2) throw std::invalid_argument("bit budget must leave room for the folding flag");
  if (folding_bits.size() != folded.size())
    throw std::invalid_argument("folding bit stream length mismatch");
  PackedOneBit packed;
  packed.sample_bits = budget_bits - 1;
  packed.quantized = quantize(folded, QuantizerSpec{lambda, packed.sample_bits});
  packed.lsb.assign(folding_bits.begin(), folding_bits.end());
  return packed;
}

std::vector<double> add_noise(std::span<const double> x, double snr_db, std::uint64_t seed) {
  std::vector<double> out(x.begin(), x.end());
  if (std::isinf(snr_db) && snr_db > 0.0) return out;
  double power = 0.0;
  for (double v : x) power += v * v;
  if (x.empty() || power == 0.0) return out;
  power /= static_cast<double>(x.size());
  const double sigma = std::sqrt(power * std::pow(10.0, -snr_db / 10.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (double& v : out) v += sigma * unit(rng);
  return out;
}

void write_folded(const FoldedRecord& record, std::ostream& out) {
  out << "N=" << record.folded.size() << '\n';
  out << "lambda=" << format_double(record.lambda) << '\n';
  if (record.bits >= 1)
    out << "bits=" << record.bits << '\n';
  else
    out << "bits=unquantized" << '\n';
  out << "has_folding_bits=" << (record.has_folding_bits() ? 1 : 0) << '\n';
  if (record.has_folding_bits() && record.folding_bits.size() != record.folded.size())
    throw std::invalid_argument("folding bit stream length mismatch");
  for (std::size_t n = 0; n < record.folded.size(); ++n) {
    out << format_double(record.folded[n]);
    if (record.has_folding_bits()) out << ',' << static_cast<int>(record.folding_bits[n] ? 1 : 0);
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing folded record");
}

void write_folded_file(const FoldedRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_folded(record, out);
}

FoldedRecord read_folded(std::istream& in) {
  FoldedRecord record;
  const long long n = parse_int(header_value(read_line(in, "header"), "N"), "N");
  if (n < 0) throw std::runtime_error("negative sample count");
  record.lambda = parse_double(header_value(read_line(in, "header"), "lambda"), "lambda");
  const std::string bits_text{header_value(read_line(in, "header"), "bits")};
  record.bits = (bits_text == "unquantized") ? 0 : static_cast<int>(parse_int(bits_text, "bits"));
  const long long has_bits = parse_int(header_value(read_line(in, "header"), "has_folding_bits"), "has_folding_bits");
  record.folded.reserve(static_cast<std::size_t>(n));
  if (has_bits) record.folding_bits.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const std::string line = read_line(in, "sample");
    if (has_bits) {
      auto comma = line.find(',');
      if (comma == std::string::npos) throw std::runtime_error("missing folding bit column");
      record.folded.push_back(parse_double(std::string_view(line).substr(0, comma), "sample"));
      const long long bit = parse_int(std::string_view(line).substr(comma + 1), "folding bit");
      if (bit != 0 && bit != 1) throw std::runtime_error("folding bit must be 0 or 1");
      record.folding_bits.push_back(static_cast<std::uint8_t>(bit));
    } else {
      record.folded.push_back(parse_double(line, "sample"));
    }
  }
  return record;
}

FoldedRecord read_folded_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_folded(in);
}

}  // namespace modrec
