#include "modrec/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "modrec/modulo.hpp"
#include "modrec/signal.hpp"
#include "modrec/spectral.hpp"
#include "textio.hpp"

namespace modrec {
namespace {

using textio::format_double;
using textio::parse_double;
using textio::parse_int;
using textio::parse_uint;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string trim(std::string_view text) {
  const auto begin = text.find_first_not_of(" \t");
  if (begin == std::string_view::npos) return {};
  const auto end = text.find_last_not_of(" \t");
  return std::string(text.substr(begin, end - begin + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(trim(text.substr(start)));
      return parts;
    }
    parts.push_back(trim(text.substr(start, pos - start)));
    start = pos + 1;
  }
}

double parse_snr(const std::string& text) {
  if (text == "inf" || text == "noiseless") return kInf;
  return parse_double(text, "snr_db");
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  for (const auto& part : split(text, ','))
    if (!part.empty()) out.push_back(parse_double(part, what));
  return out;
}

struct Cell {
  int id = 0;
  double lambda = 0.0;
  double of = 0.0;
  double snr_db = kInf;
  std::uint64_t signal_key = 0;  // cell id of the signal draw stream
};

struct Task {
  const Cell* cell;
  int trial;
  Algorithm algorithm;
};

std::vector<double> clamped_quantized(std::vector<double> samples, double lambda, int bits) {
  for (double& v : samples) v = std::clamp(v, -lambda, lambda);
  return quantize(samples, QuantizerSpec{lambda, bits});
}

std::string cpu_model() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find(':');
    if (pos != std::string::npos && line.find("model name") == 0) return trim(line.substr(pos + 1));
  }
  return "unknown";
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.kind == ExperimentKind::bound_table)
    throw std::invalid_argument("bound_table has no trials; use run_bound_table");
  if (cfg.n < 8) throw std::invalid_argument("n must be at least 8");
  if (cfg.lambdas.empty() || cfg.ofs.empty()) throw std::invalid_argument("empty lambda or of list");
  for (double l : cfg.lambdas)
    if (!(l > 0.0)) throw std::invalid_argument("lambda must be positive");
  for (double of : cfg.ofs)
    if (!(of > 1.0)) throw std::invalid_argument("oversampling factor must exceed 1");
  if (cfg.bits < 0 || cfg.bits > 24) throw std::invalid_argument("bits must be in [0, 24]");
  if (cfg.algorithms.empty()) throw std::invalid_argument("no algorithms selected");
  if (cfg.bits == 1 &&
      std::find(cfg.algorithms.begin(), cfg.algorithms.end(), Algorithm::ls_onebit) != cfg.algorithms.end())
    throw std::invalid_argument("a 1-bit budget leaves no sample bits for ls_onebit");
  if (!(cfg.envelope_width > 0.0) || cfg.envelope_width > 1.0)
    throw std::invalid_argument("envelope width must be in (0, 1]");
  if (cfg.jobs < 1) throw std::invalid_argument("jobs must be positive");
  if (cfg.hod_order < 1 || cfg.hod_order > 8)
    throw std::invalid_argument("difference order must be in [1, 8]");
  if (cfg.support_dilation < 0) throw std::invalid_argument("dilation must be nonnegative");
}

TrialRow run_single(const ExperimentConfig& cfg, const std::string& kind, const Cell& cell,
                    int trial, Algorithm algorithm) {
  // Signal and noise seeds never depend on the algorithm, so algorithms under
  // comparison see identical data. snr_sweep reuses one signal per
  // (lambda, of) pair and redraws only the noise; the other experiments
  // redraw the signal every trial.
  const bool noise_only_redraw = cfg.kind == ExperimentKind::snr_sweep;
  const std::uint64_t signal_seed =
      noise_only_redraw ? derive_seed(cfg.base_seed, kind, cell.signal_key, 0, "signal")
                        : derive_seed(cfg.base_seed, kind, static_cast<std::uint64_t>(cell.id),
                                      static_cast<std::uint64_t>(trial), "signal");

  const auto signal = generate_bandlimited(signal_seed, cfg.n, cell.of, cfg.envelope_width);
  const auto record = fold_signal(signal.samples, cell.lambda);
  const auto bound = sparsity_bound(cfg.n, cell.of, signal.peak(), cell.lambda);
  const long long counted = count_jumps(record.residual, cell.lambda);

  auto samples = record.folded;
  if (std::isfinite(cell.snr_db))
    samples = add_noise(samples, cell.snr_db,
                        derive_seed(cfg.base_seed, kind, static_cast<std::uint64_t>(cell.id),
                                    static_cast<std::uint64_t>(trial), "noise"));

  std::vector<std::uint8_t> flags(record.folding_bits);
  int row_bits = cfg.bits;
  if (algorithm == Algorithm::ls_onebit && cfg.bits >= 2) {
    // The acquisition word spends its LSB on the folding flag.
    for (double& v : samples) v = std::clamp(v, -cell.lambda, cell.lambda);
    auto packed = pack_with_folding_bit(samples, cell.lambda, cfg.bits, flags);
    samples = std::move(packed.quantized);
  } else if (algorithm != Algorithm::ls_onebit && cfg.bits >= 1) {
    samples = clamped_quantized(std::move(samples), cell.lambda, cfg.bits);
  }

  TrialRow row;
  row.experiment = kind;
  row.cell_id = cell.id;
  row.lambda = cell.lambda;
  row.of = cell.of;
  row.snr_db = cell.snr_db;
  row.bits = row_bits;
  row.algorithm = to_string(algorithm);
  row.trial = trial;
  row.seed = signal_seed;
  row.l = counted;
  row.l_max = bound.l_max;

  long long m = bound.m;
  if (algorithm != Algorithm::hod) {
    // Measurement count of the system the solver will actually build.
    const auto n_eff = static_cast<int>(effective_length(samples, 0.99));
    m = static_cast<long long>(out_of_band_indices(n_eff, cell.of).size());
  }
  row.m = m;
  row.spark_ok = spark_feasible(counted, m);

  std::vector<double> estimate;
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (algorithm) {
      case Algorithm::lasso_b2r2: {
        auto result = lasso_b2r2(samples, cell.lambda, cell.of, cfg.ista,
                                 derive_seed(cfg.base_seed, kind, static_cast<std::uint64_t>(cell.id),
                                             static_cast<std::uint64_t>(trial), "init"));
        row.iterations = result.residual.iterations_used;
        row.converged = result.residual.converged;
        estimate = std::move(result.signal);
        break;
      }
      case Algorithm::ls_onebit: {
        auto result = ls_onebit(samples, flags, cell.lambda, cell.of, cfg.support_dilation);
        row.converged = true;
        estimate = std::move(result.signal);
        break;
      }
      case Algorithm::hod: {
        estimate = hod_unfold(samples, cell.lambda, cfg.hod_order);
        row.converged = true;
        break;
      }
    }
  } catch (const std::exception&) {
    // Recovery refused the instance (support too large, degenerate system,
    // divergence); score the untouched acquisition as the estimate.
    estimate = samples;
    row.converged = false;
    row.iterations = 0;
  }
  row.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  row.nmse = nmse(signal.samples, estimate);
  row.nmse_db = 10.0 * std::log10(row.nmse);
  return row;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::snr_sweep: return "snr_sweep";
    case ExperimentKind::of_sweep: return "of_sweep";
    case ExperimentKind::grid: return "grid";
    case ExperimentKind::onebit_compare: return "onebit_compare";
    case ExperimentKind::bound_table: return "bound_table";
    case ExperimentKind::timing: return "timing";
  }
  throw std::logic_error("unreachable");
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::lasso_b2r2: return "lasso_b2r2";
    case Algorithm::ls_onebit: return "ls_onebit";
    case Algorithm::hod: return "hod";
  }
  throw std::logic_error("unreachable");
}

ExperimentKind experiment_kind_from_string(std::string_view text) {
  for (auto kind : {ExperimentKind::snr_sweep, ExperimentKind::of_sweep, ExperimentKind::grid,
                    ExperimentKind::onebit_compare, ExperimentKind::bound_table, ExperimentKind::timing})
    if (text == to_string(kind)) return kind;
  throw std::invalid_argument("unknown experiment kind: '" + std::string(text) + "'");
}

Algorithm algorithm_from_string(std::string_view text) {
  for (auto algorithm : {Algorithm::lasso_b2r2, Algorithm::ls_onebit, Algorithm::hod})
    if (text == to_string(algorithm)) return algorithm;
  throw std::invalid_argument("unknown algorithm: '" + std::string(text) + "'");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  switch (kind) {
    case ExperimentKind::snr_sweep:
      cfg.lambdas = {0.25};
      cfg.ofs = {6};
      cfg.snrs_db = {0, 5, 10, 15, 20, 25};
      cfg.algorithms = {Algorithm::lasso_b2r2, Algorithm::hod};
      break;
    case ExperimentKind::of_sweep:
      cfg.lambdas = {0.25};
      cfg.ofs = {2, 4, 6, 8, 10, 14, 18, 22};
      cfg.snrs_db = {5, 10};
      cfg.algorithms = {Algorithm::lasso_b2r2, Algorithm::hod};
      break;
    case ExperimentKind::grid:
    case ExperimentKind::timing:
      cfg.lambdas = {0.15, 0.2, 0.25, 0.3, 0.4};
      cfg.ofs = {1.5, 2, 2.5, 3, 3.5, 4};
      cfg.snrs_db = {kInf};
      cfg.bits = 6;
      cfg.algorithms = {Algorithm::lasso_b2r2, Algorithm::ls_onebit};
      break;
    case ExperimentKind::onebit_compare:
      cfg.lambdas = {0.2};
      cfg.ofs = {3};
      cfg.snrs_db = {kInf};
      cfg.bits = 6;
      cfg.algorithms = {Algorithm::lasso_b2r2, Algorithm::ls_onebit};
      break;
    case ExperimentKind::bound_table:
      cfg.lambdas = {0.75, 0.5, 0.25, 0.05};
      cfg.ofs = {4, 6, 8};
      break;
  }
  return cfg;
}

int resolved_trials(const ExperimentConfig& cfg) {
  if (cfg.trials > 0) return cfg.trials;
  switch (cfg.kind) {
    case ExperimentKind::snr_sweep:
    case ExperimentKind::of_sweep:
      return cfg.paper_scale ? 250 : 25;
    case ExperimentKind::grid:
    case ExperimentKind::onebit_compare:
    case ExperimentKind::timing:
      return cfg.paper_scale ? 100 : 20;
    case ExperimentKind::bound_table:
      return 1;
  }
  throw std::logic_error("unreachable");
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));

    if (key == "experiment") {
      if (experiment_kind_from_string(value) != cfg.kind)
        throw std::runtime_error("config experiment '" + value + "' conflicts with the selected kind");
    } else if (key == "n") {
      cfg.n = static_cast<int>(parse_int(value, "n"));
    } else if (key == "lambda") {
      cfg.lambdas = parse_double_list(value, "lambda");
    } else if (key == "of") {
      cfg.ofs = parse_double_list(value, "of");
    } else if (key == "snr_db") {
      cfg.snrs_db.clear();
      for (const auto& part : split(value, ','))
        if (!part.empty()) cfg.snrs_db.push_back(parse_snr(part));
    } else if (key == "bits") {
      cfg.bits = value == "unquantized" ? 0 : static_cast<int>(parse_int(value, "bits"));
    } else if (key == "trials") {
      cfg.trials = static_cast<int>(parse_int(value, "trials"));
    } else if (key == "base_seed" || key == "seed") {
      cfg.base_seed = static_cast<std::uint64_t>(parse_int(value, "seed"));
    } else if (key == "algorithms") {
      cfg.algorithms.clear();
      for (const auto& part : split(value, ','))
        if (!part.empty()) cfg.algorithms.push_back(algorithm_from_string(part));
    } else if (key == "hod_order") {
      cfg.hod_order = static_cast<int>(parse_int(value, "hod_order"));
    } else if (key == "dilation") {
      cfg.support_dilation = static_cast<int>(parse_int(value, "dilation"));
    } else if (key == "envelope_width") {
      cfg.envelope_width = parse_double(value, "envelope_width");
    } else if (key == "jobs") {
      cfg.jobs = static_cast<int>(parse_int(value, "jobs"));
    } else if (key == "out") {
      cfg.output_path = value;
    } else if (key == "gamma") {
      cfg.ista.gamma = parse_double(value, "gamma");
    } else if (key == "tau") {
      cfg.ista.tau = parse_double(value, "tau");
    } else if (key == "max_iterations") {
      cfg.ista.max_iterations = static_cast<int>(parse_int(value, "max_iterations"));
    } else if (key == "tolerance") {
      cfg.ista.tolerance = parse_double(value, "tolerance");
    } else if (key == "normal_init") {
      cfg.ista.normal_init = parse_int(value, "normal_init") != 0;
    } else {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view kind, std::uint64_t cell,
                          std::uint64_t trial, std::string_view purpose) {
  std::uint64_t h = splitmix64(base ^ fnv1a(kind));
  h = splitmix64(h ^ cell);
  h = splitmix64(h ^ trial);
  return splitmix64(h ^ fnv1a(purpose));
}

std::vector<TrialRow> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::string kind = to_string(cfg.kind);
  const int trials = resolved_trials(cfg);
  const auto snrs = cfg.snrs_db.empty() ? std::vector<double>{kInf} : cfg.snrs_db;

  std::vector<Cell> cells;
  for (std::size_t li = 0; li < cfg.lambdas.size(); ++li)
    for (std::size_t oi = 0; oi < cfg.ofs.size(); ++oi)
      for (std::size_t si = 0; si < snrs.size(); ++si) {
        Cell cell;
        cell.id = static_cast<int>(cells.size());
        cell.lambda = cfg.lambdas[li];
        cell.of = cfg.ofs[oi];
        cell.snr_db = snrs[si];
        cell.signal_key = li * cfg.ofs.size() + oi;
        cells.push_back(cell);
      }

  std::vector<Task> tasks;
  tasks.reserve(cells.size() * static_cast<std::size_t>(trials) * cfg.algorithms.size());
  for (const auto& cell : cells)
    for (int trial = 0; trial < trials; ++trial)
      for (Algorithm algorithm : cfg.algorithms) tasks.push_back({&cell, trial, algorithm});

  std::vector<TrialRow> rows(tasks.size());
  const int jobs = cfg.kind == ExperimentKind::timing
                       ? 1
                       : static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), tasks.size()));

  if (jobs <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i)
      rows[i] = run_single(cfg, kind, *tasks[i].cell, tasks[i].trial, tasks[i].algorithm);
    return rows;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        rows[i] = run_single(cfg, kind, *tasks[i].cell, tasks[i].trial, tasks[i].algorithm);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<BoundReport> run_bound_table(const ExperimentConfig& cfg) {
  std::vector<BoundReport> reports;
  for (double lambda : cfg.lambdas)
    for (double of : cfg.ofs) reports.push_back(sparsity_bound(cfg.n, of, 1.0, lambda));
  return reports;
}

const char* const kCsvHeader =
    "experiment,cell_id,lambda,of,snr_db,bits,algorithm,trial,seed,nmse,nmse_db,time_s,"
    "iterations,converged,L,L_max,M,spark_ok";

void write_csv(std::span<const TrialRow> rows, std::ostream& out, bool with_fingerprint) {
  if (with_fingerprint) {
    out << "# cpu=" << cpu_model() << '\n';
    out << "# cores=" << std::thread::hardware_concurrency() << '\n';
  }
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    out << row.experiment << ',' << row.cell_id << ',' << format_double(row.lambda) << ','
        << format_double(row.of) << ',' << format_double(row.snr_db) << ',' << row.bits << ','
        << row.algorithm << ',' << row.trial << ',' << row.seed << ',' << format_double(row.nmse)
        << ',' << format_double(row.nmse_db) << ',' << format_double(row.time_s) << ','
        << row.iterations << ',' << (row.converged ? 1 : 0) << ',' << row.l << ',' << row.l_max
        << ',' << row.m << ',' << (row.spark_ok ? 1 : 0) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing results");
}

std::vector<TrialRow> read_csv(std::istream& in) {
  std::vector<TrialRow> rows;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      if (line != kCsvHeader) throw std::runtime_error("unexpected results header: '" + line + "'");
      saw_header = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 18) throw std::runtime_error("malformed results row: '" + line + "'");
    TrialRow row;
    row.experiment = fields[0];
    row.cell_id = static_cast<int>(parse_int(fields[1], "cell_id"));
    row.lambda = parse_double(fields[2], "lambda");
    row.of = parse_double(fields[3], "of");
    row.snr_db = parse_snr(fields[4]);
    row.bits = static_cast<int>(parse_int(fields[5], "bits"));
    row.algorithm = fields[6];
    row.trial = static_cast<int>(parse_int(fields[7], "trial"));
    row.seed = parse_uint(fields[8], "seed");
    row.nmse = parse_double(fields[9], "nmse");
    row.nmse_db = parse_double(fields[10], "nmse_db");
    row.time_s = parse_double(fields[11], "time_s");
    row.iterations = static_cast<int>(parse_int(fields[12], "iterations"));
    row.converged = parse_int(fields[13], "converged") != 0;
    row.l = parse_int(fields[14], "L");
    row.l_max = parse_int(fields[15], "L_max");
    row.m = parse_int(fields[16], "M");
    row.spark_ok = parse_int(fields[17], "spark_ok") != 0;
    rows.push_back(std::move(row));
  }
  if (!saw_header) throw std::runtime_error("missing results header");
  return rows;
}

void write_bound_csv(std::span<const BoundReport> reports, std::ostream& out) {
  out << "lambda,of,two_K,L_max\n";
  for (const auto& report : reports)
    out << format_double(report.lambda) << ',' << format_double(report.oversampling_factor) << ','
        << 2 * report.k << ',' << report.l_max << '\n';
  if (!out) throw std::runtime_error("failed writing bound table");
}

}  // namespace modrec
