// Command-line front end: signal generation, folding, recovery, bound tables,
// and the seeded benchmark experiments. Exit codes: 0 success, 2 bad
// configuration or usage, 3 runtime failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "modrec/bench.hpp"
#include "modrec/bounds.hpp"
#include "modrec/modulo.hpp"
#include "modrec/recovery.hpp"
#include "modrec/signal.hpp"

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GenArgs {
  std::uint64_t seed = 1;
  int n = 1024;
  double of = 6.0;
  double width = 0.5;
  std::string out;
};

struct FoldArgs {
  std::string in;
  double lambda = 0.0;
  int bits = 0;
  double snr_db = kInf;
  std::uint64_t noise_seed = 0;
  std::string out;
};

struct RecoverArgs {
  std::string in;
  std::string algorithm = "lasso_b2r2";
  double of = 0.0;
  int hod_order = 3;
  int dilation = 0;
  std::uint64_t init_seed = 0;
  modrec::IstaConfig ista;
  std::string out;
  std::string ref;
};

struct BoundsArgs {
  int n = 1024;
  std::vector<double> lambdas = {0.75, 0.5, 0.25, 0.05};
  std::vector<double> ofs = {4, 6, 8};
  double peak = 1.0;
};

struct BenchArgs {
  std::string experiment;
  std::string config_path;
  bool paper_scale = false;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 0;
  int trials = 0;
  int n = 0;
  int bits = -1;
  std::vector<double> lambdas;
  std::vector<double> ofs;
  std::vector<std::string> snrs;
  std::vector<std::string> algorithms;
  double width = 0.0;
};

int run_gen(const GenArgs& args) {
  const auto signal = modrec::generate_bandlimited(args.seed, args.n, args.of, args.width);
  modrec::write_signal_file(signal, args.out);
  std::cout << "wrote " << signal.samples.size() << " samples to " << args.out << '\n';
  return 0;
}

int run_fold(const FoldArgs& args) {
  const auto signal = modrec::read_signal_file(args.in);
  auto record = modrec::fold_signal(signal.samples, args.lambda);
  if (std::isfinite(args.snr_db))
    record.folded = modrec::add_noise(record.folded, args.snr_db, args.noise_seed);
  if (args.bits >= 1) {
    for (double& v : record.folded) v = std::clamp(v, -args.lambda, args.lambda);
    record.folded = modrec::quantize(record.folded, modrec::QuantizerSpec{args.lambda, args.bits});
    record.bits = args.bits;
  }
  modrec::write_folded_file(record, args.out);
  long long jumps = 0;
  for (std::uint8_t b : record.folding_bits) jumps += b;
  std::cout << "wrote " << record.folded.size() << " folded samples (" << jumps
            << " folding events) to " << args.out << '\n';
  return 0;
}

int run_recover(const RecoverArgs& args) {
  const auto record = modrec::read_folded_file(args.in);
  const auto algorithm = modrec::algorithm_from_string(args.algorithm);

  modrec::SampledSignal recovered;
  recovered.oversampling_factor = args.of;
  int iterations = 0;
  bool converged = true;
  int effective_n = static_cast<int>(record.folded.size());
  int m = 0;
  std::size_t support = 0;

  switch (algorithm) {
    case modrec::Algorithm::lasso_b2r2: {
      auto result =
          modrec::lasso_b2r2(record.folded, record.lambda, args.of, args.ista, args.init_seed);
      iterations = result.residual.iterations_used;
      converged = result.residual.converged;
      effective_n = result.effective_n;
      m = result.m;
      support = result.residual.support.size();
      recovered.samples = std::move(result.signal);
      break;
    }
    case modrec::Algorithm::ls_onebit: {
      if (!record.has_folding_bits())
        throw std::runtime_error("record has no folding bits; refold with them or use lasso_b2r2");
      auto result = modrec::ls_onebit(record.folded, record.folding_bits, record.lambda, args.of,
                                      args.dilation);
      effective_n = result.effective_n;
      m = result.m;
      support = result.residual.support.size();
      recovered.samples = std::move(result.signal);
      break;
    }
    case modrec::Algorithm::hod: {
      recovered.samples = modrec::hod_unfold(record.folded, record.lambda, args.hod_order);
      break;
    }
  }

  std::cout << "algorithm=" << args.algorithm << " effective_n=" << effective_n << " m=" << m
            << " support=" << support << " iterations=" << iterations
            << " converged=" << (converged ? 1 : 0) << '\n';
  if (!args.ref.empty()) {
    const auto reference = modrec::read_signal_file(args.ref);
    std::cout << "nmse_db=" << modrec::nmse_db(reference.samples, recovered.samples) << '\n';
  }
  if (!args.out.empty()) modrec::write_signal_file(recovered, args.out);
  return 0;
}

int run_bounds(const BoundsArgs& args) {
  std::vector<modrec::BoundReport> reports;
  for (double lambda : args.lambdas)
    for (double of : args.ofs) reports.push_back(modrec::sparsity_bound(args.n, of, args.peak, lambda));
  modrec::write_bound_csv(reports, std::cout);
  return 0;
}

double parse_snr_arg(const std::string& text) {
  if (text == "inf" || text == "noiseless") return kInf;
  return std::stod(text);
}

int run_bench(const BenchArgs& args) {
  const auto kind = modrec::experiment_kind_from_string(args.experiment);
  auto cfg = modrec::default_config(kind);
  if (!args.config_path.empty()) {
    try {
      modrec::apply_config_file(cfg, args.config_path);
    } catch (const std::exception& e) {
      throw std::invalid_argument(e.what());  // configuration problem, not a runtime failure
    }
  }

  cfg.paper_scale = cfg.paper_scale || args.paper_scale;
  if (args.seed_set) cfg.base_seed = args.seed;
  if (args.jobs > 0) cfg.jobs = args.jobs;
  if (args.trials > 0) cfg.trials = args.trials;
  if (args.n > 0) cfg.n = args.n;
  if (args.bits >= 0) cfg.bits = args.bits;
  if (!args.lambdas.empty()) cfg.lambdas = args.lambdas;
  if (!args.ofs.empty()) cfg.ofs = args.ofs;
  if (!args.snrs.empty()) {
    cfg.snrs_db.clear();
    for (const auto& s : args.snrs) cfg.snrs_db.push_back(parse_snr_arg(s));
  }
  if (!args.algorithms.empty()) {
    cfg.algorithms.clear();
    for (const auto& a : args.algorithms) cfg.algorithms.push_back(modrec::algorithm_from_string(a));
  }
  if (args.width > 0.0) cfg.envelope_width = args.width;
  if (!args.out.empty()) cfg.output_path = args.out;

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!cfg.output_path.empty()) {
    file.open(cfg.output_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + cfg.output_path + "' for writing");
    out = &file;
  }

  if (kind == modrec::ExperimentKind::bound_table) {
    const auto reports = modrec::run_bound_table(cfg);
    modrec::write_bound_csv(reports, *out);
    return 0;
  }
  const auto rows = modrec::run_experiment(cfg);
  modrec::write_csv(rows, *out, kind == modrec::ExperimentKind::timing);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modulo-ADC folding simulator and unfolding benchmark"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a seeded bandlimited test signal");
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_option("--n", gen.n, "sample count")->check(CLI::Range(8, 1 << 22));
  gen_cmd->add_option("--of", gen.of, "oversampling factor (> 1)");
  gen_cmd->add_option("--width", gen.width, "envelope width in (0, 1]");
  gen_cmd->add_option("--out", gen.out, "output signal file")->required();

  FoldArgs fold;
  auto* fold_cmd = app.add_subcommand("fold", "fold a signal into the modulo range");
  fold_cmd->add_option("--in", fold.in, "input signal file")->required();
  fold_cmd->add_option("--lambda", fold.lambda, "ADC half-range")->required();
  fold_cmd->add_option("--bits", fold.bits, "quantizer bits for the stored samples (0 = none)");
  fold_cmd->add_option("--snr-db", fold.snr_db, "add Gaussian noise at this SNR before quantization");
  fold_cmd->add_option("--noise-seed", fold.noise_seed, "noise generator seed");
  fold_cmd->add_option("--out", fold.out, "output folded-record file")->required();

  RecoverArgs rec;
  auto* rec_cmd = app.add_subcommand("recover", "unfold a folded record");
  rec_cmd->add_option("--in", rec.in, "input folded-record file")->required();
  rec_cmd->add_option("--algorithm", rec.algorithm, "lasso_b2r2 | ls_onebit | hod");
  rec_cmd->add_option("--of", rec.of, "oversampling factor used during acquisition")->required();
  rec_cmd->add_option("--order", rec.hod_order, "difference order for hod");
  rec_cmd->add_option("--dilation", rec.dilation, "support dilation for ls_onebit");
  rec_cmd->add_option("--gamma", rec.ista.gamma, "solver regularization weight (auto if 0)");
  rec_cmd->add_option("--tau", rec.ista.tau, "solver step size (auto if 0)");
  rec_cmd->add_option("--max-iterations", rec.ista.max_iterations, "solver iteration cap");
  rec_cmd->add_option("--tolerance", rec.ista.tolerance, "solver stopping tolerance");
  rec_cmd->add_flag("--normal-init", rec.ista.normal_init, "random solver initialization");
  rec_cmd->add_option("--init-seed", rec.init_seed, "seed for --normal-init");
  rec_cmd->add_option("--out", rec.out, "write the recovered signal here");
  rec_cmd->add_option("--ref", rec.ref, "reference signal file; prints nmse_db");

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "print the folding-sparsity bound grid");
  bounds_cmd->add_option("--n", bounds.n, "sample count");
  bounds_cmd->add_option("--lambda", bounds.lambdas, "lambda list")->delimiter(',');
  bounds_cmd->add_option("--of", bounds.ofs, "oversampling factor list")->delimiter(',');
  bounds_cmd->add_option("--peak", bounds.peak, "signal peak");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "run a seeded benchmark experiment");
  bench_cmd
      ->add_option("--experiment", bench.experiment,
                   "snr_sweep | of_sweep | grid | onebit_compare | bound_table | timing")
      ->required();
  bench_cmd->add_option("--config", bench.config_path, "key = value config file");
  bench_cmd->add_flag("--paper-scale", bench.paper_scale, "full trial counts instead of desk scale");
  bench_cmd->add_option("--out", bench.out, "output CSV path (default stdout)");
  bench_cmd->add_option("--seed", bench.seed, "base seed");
  bench_cmd->add_option("--jobs", bench.jobs, "worker threads");
  bench_cmd->add_option("--trials", bench.trials, "trials per cell");
  bench_cmd->add_option("--n", bench.n, "sample count");
  bench_cmd->add_option("--bits", bench.bits, "acquisition word size (0 = unquantized)");
  bench_cmd->add_option("--lambda", bench.lambdas, "lambda list")->delimiter(',');
  bench_cmd->add_option("--of", bench.ofs, "oversampling factor list")->delimiter(',');
  bench_cmd->add_option("--snr-db", bench.snrs, "SNR list; inf = noiseless")->delimiter(',');
  bench_cmd->add_option("--algorithms", bench.algorithms, "algorithm list")->delimiter(',');
  bench_cmd->add_option("--width", bench.width, "envelope width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  bench.seed_set = bench_cmd->count("--seed") > 0;

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*fold_cmd) return run_fold(fold);
    if (*rec_cmd) return run_recover(rec);
    if (*bounds_cmd) return run_bounds(bounds);
    if (*bench_cmd) return run_bench(bench);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
