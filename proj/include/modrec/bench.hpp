#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modrec/bounds.hpp"
#include "modrec/recovery.hpp"

namespace modrec {

enum class ExperimentKind { snr_sweep, of_sweep, grid, onebit_compare, bound_table, timing };
enum class Algorithm { lasso_b2r2, ls_onebit, hod };

std::string to_string(ExperimentKind kind);
std::string to_string(Algorithm algorithm);
ExperimentKind experiment_kind_from_string(std::string_view text);
Algorithm algorithm_from_string(std::string_view text);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::snr_sweep;
  int n = 1024;
  std::vector<double> lambdas;
  std::vector<double> ofs;
  std::vector<double> snrs_db;  // +inf entry = noiseless
  int bits = 0;                 // acquisition word size; 0 = unquantized
  int trials = 0;               // 0 = kind default at the current scale
  bool paper_scale = false;     // full trial counts instead of desk scale
  std::uint64_t base_seed = 1;
  std::vector<Algorithm> algorithms;
  IstaConfig ista;
  int hod_order = 3;
  int support_dilation = 0;
  double envelope_width = 0.5;
  int jobs = 1;
  std::string output_path;  // empty = stdout
};

/// Canonical lists, trial counts, and algorithm sets for each experiment.
ExperimentConfig default_config(ExperimentKind kind);

/// Overlays `key = value` lines from a config file onto `cfg`. Lists are
/// comma-separated; "inf" or "noiseless" mark a noiseless SNR entry.
/// Unknown keys are errors.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

/// Trial count after resolving the kind default and the scale flag.
int resolved_trials(const ExperimentConfig& cfg);

struct TrialRow {
  std::string experiment;
  int cell_id = 0;
  double lambda = 0.0;
  double of = 0.0;
  double snr_db = 0.0;
  int bits = 0;
  std::string algorithm;
  int trial = 0;
  std::uint64_t seed = 0;
  double nmse = 0.0;
  double nmse_db = 0.0;
  double time_s = 0.0;
  int iterations = 0;
  bool converged = false;
  long long l = 0;
  long long l_max = 0;
  long long m = 0;
  bool spark_ok = false;
};

/// Stable per-trial seed stream: splitmix64 chaining over the base seed, the
/// experiment kind, the cell and trial indices, and a purpose tag ("signal",
/// "noise", "init"). The algorithm is deliberately not an input so that
/// algorithms under comparison consume identical signals and noise.
std::uint64_t derive_seed(std::uint64_t base, std::string_view kind, std::uint64_t cell,
                          std::uint64_t trial, std::string_view purpose);

/// Runs every (cell, trial, algorithm) combination of a trial-based
/// experiment; rows come back sorted by (cell, trial, algorithm) regardless
/// of the worker count. bound_table has no trials and is rejected here.
std::vector<TrialRow> run_experiment(const ExperimentConfig& cfg);

/// Bound grid over cfg's lambda/of lists at peak 1 and cfg.n samples.
std::vector<BoundReport> run_bound_table(const ExperimentConfig& cfg);

extern const char* const kCsvHeader;

/// Writes rows under the fixed header. with_fingerprint prepends '#' comment
/// lines describing the CPU and core count (used by timing runs).
void write_csv(std::span<const TrialRow> rows, std::ostream& out, bool with_fingerprint = false);
std::vector<TrialRow> read_csv(std::istream& in);

void write_bound_csv(std::span<const BoundReport> reports, std::ostream& out);

}  // namespace modrec
