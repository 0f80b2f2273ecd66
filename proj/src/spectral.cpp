#include "modrec/spectral.hpp"

#include <Eigen/Dense>
#include <stdexcept>

#include "modrec/dft.hpp"
#include "modrec/modulo.hpp"

namespace modrec {

bool in_band(int k, int n, double of) {
  const double half = n / (2.0 * of);
  return k <= half || k >= n - half;
}

std::vector<int> out_of_band_indices(int n, double of) {
  if (n < 4) throw std::invalid_argument("need at least 4 samples");
  if (!(of > 1.0)) throw std::invalid_argument("oversampling factor must exceed 1");
  std::vector<int> indices;
  for (int k = 0; k < n; ++k)
    if (!in_band(k, n, of)) indices.push_back(k);
  if (indices.empty()) throw std::runtime_error("no out-of-band measurements");
  return indices;
}

MeasurementSystem make_measurement_system(int n, double of) {
  return MeasurementSystem{n, of, out_of_band_indices(n, of)};
}

MeasurementVector measure(std::span<const double> folded, const MeasurementSystem& system,
                          MeasurementSource source) {
  if (folded.size() < static_cast<std::size_t>(system.n))
    throw std::invalid_argument("sequence shorter than the measurement length");
  const auto spectrum = dft::forward(first_difference(folded.first(static_cast<std::size_t>(system.n))));
  MeasurementVector y;
  y.source = source;
  y.values.reserve(system.indices.size());
  for (int k : system.indices) y.values.push_back(spectrum[static_cast<std::size_t>(k)]);
  return y;
}

std::vector<std::complex<double>> apply_forward(const MeasurementSystem& system,
                                                std::span<const double> zhat) {
  if (zhat.size() != static_cast<std::size_t>(system.n))
    throw std::invalid_argument("operand length mismatch");
  const auto spectrum = dft::forward(zhat);
  std::vector<std::complex<double>> out;
  out.reserve(system.indices.size());
  for (int k : system.indices) out.push_back(spectrum[static_cast<std::size_t>(k)]);
  return out;
}

std::vector<double> apply_adjoint(const MeasurementSystem& system,
                                  std::span<const std::complex<double>> y) {
  if (y.size() != system.indices.size()) throw std::invalid_argument("operand length mismatch");
  std::vector<std::complex<double>> full(static_cast<std::size_t>(system.n));
  for (std::size_t i = 0; i < y.size(); ++i)
    full[static_cast<std::size_t>(system.indices[i])] = y[i];
  const auto time = dft::backward(full);
  std::vector<double> out(static_cast<std::size_t>(system.n));
  for (int i = 0; i < system.n; ++i) out[static_cast<std::size_t>(i)] = time[static_cast<std::size_t>(i)].real();
  return out;
}

std::vector<double> restricted_pseudoinverse(const MeasurementSystem& system,
                                             std::span<const int> support,
                                             const MeasurementVector& y) {
  if (y.values.size() != system.indices.size())
    throw std::invalid_argument("measurement length mismatch");
  if (support.empty()) return {};
  if (support.size() > system.indices.size())
    throw std::runtime_error("support exceeds measurement capacity");
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 0 || support[i] >= system.n)
      throw std::invalid_argument("support index out of range");
    if (i > 0 && support[i] <= support[i - 1])
      throw std::invalid_argument("support must be sorted and duplicate-free");
  }

  // Gram entries depend only on index differences: (V_T^H V_T)[a,b] = h((t_b - t_a) mod n)
  // with h the DFT of the out-of-band indicator, so one FFT covers them all.
  std::vector<std::complex<double>> indicator(static_cast<std::size_t>(system.n));
  for (int k : system.indices) indicator[static_cast<std::size_t>(k)] = 1.0;
  const auto h = dft::forward(indicator);

  // Right-hand side V_T^H y: the zero-filled inverse transform at the support.
  std::vector<std::complex<double>> full(static_cast<std::size_t>(system.n));
  for (std::size_t i = 0; i < y.values.size(); ++i)
    full[static_cast<std::size_t>(system.indices[i])] = y.values[i];
  const auto adj = dft::backward(full);

  const auto t = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXcd gram(t, t);
  for (Eigen::Index a = 0; a < t; ++a)
    for (Eigen::Index b = 0; b < t; ++b) {
      int d = support[static_cast<std::size_t>(b)] - support[static_cast<std::size_t>(a)];
      if (d < 0) d += system.n;
      gram(a, b) = h[static_cast<std::size_t>(d)];
    }
  Eigen::VectorXcd rhs(t);
  for (Eigen::Index a = 0; a < t; ++a)
    rhs(a) = adj[static_cast<std::size_t>(support[static_cast<std::size_t>(a)])];

  Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("support Gram decomposition failed");
  // Pivot magnitudes stand in for the spectrum when guarding against a
  // degenerate support; exact eigenvalues are not worth the extra O(t^3).
  const Eigen::VectorXd d = ldlt.vectorD().real();
  const double largest = d.maxCoeff();
  if (!(largest > 0.0) || d.minCoeff() < largest * 1e-12)
    throw std::runtime_error("support Gram matrix is ill-conditioned");
  const Eigen::VectorXcd x = ldlt.solve(rhs);

  std::vector<double> out(support.size());
  for (Eigen::Index a = 0; a < t; ++a) out[static_cast<std::size_t>(a)] = x(a).real();
  return out;
}

}  // namespace modrec
