#include "modrec/dft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace modrec::dft {
namespace {

// FFTW's planner is not thread-safe; executing a plan on fresh buffers is.
// Plans are created once per (length, direction) under a lock and kept for
// the process lifetime. FFTW_UNALIGNED lets us execute on plain vector
// storage regardless of allocator alignment.
class PlanCache {
 public:
  fftw_plan get(int n, int sign) {
    std::scoped_lock lock(mutex_);
    const std::int64_t key = static_cast<std::int64_t>(n) * 4 + (sign == FFTW_FORWARD ? 0 : 1);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> in(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("fftw plan creation failed for n=" + std::to_string(n));
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::unordered_map<std::int64_t, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

std::vector<std::complex<double>> execute(std::span<const std::complex<double>> x, int sign) {
  if (x.empty()) throw std::invalid_argument("dft: empty input");
  const int n = static_cast<int>(x.size());
  fftw_plan plan = cache().get(n, sign);
  std::vector<std::complex<double>> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(x.size());
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x) {
  return execute(x, FFTW_FORWARD);
}

std::vector<std::complex<double>> forward(std::span<const double> x) {
  std::vector<std::complex<double>> cx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) cx[i] = x[i];
  return execute(cx, FFTW_FORWARD);
}

std::vector<std::complex<double>> backward(std::span<const std::complex<double>> x) {
  return execute(x, FFTW_BACKWARD);
}

std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> x) {
  auto out = execute(x, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace modrec::dft
