#ifndef INVMOD_TOOLS_CLI_HPP
#define INVMOD_TOOLS_CLI_HPP

// Command-line front end: compute, verify, bench, tune.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 operand not invertible,
// 3 verification found a disagreement.

#include "invmod/invmod.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace invmod::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNotInvertible = 2, kVerifyFailed = 3 };

inline constexpr std::size_t kMaxWidth = std::size_t{1} << 24;

inline std::uint64_t env_or(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return fallback;
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    return fallback;
  }
}

inline std::uint64_t default_seed() { return env_or("INVMOD_SEED", 20140701); }
inline std::uint64_t default_budget_ms() { return env_or("INVMOD_BUDGET_MS", 100); }

struct ComputeArgs {
  std::string a;
  std::size_t m = 0;
  std::string p = "2";
  std::string algo;
  std::string thresholds;
  bool hex = false;
  bool count = false;
};

struct VerifyArgs {
  long long trials = 1000;
  std::size_t max_bits = 2048;
  std::uint64_t seed = 0;
  std::string inject_fault;
};

struct BenchArgs {
  std::vector<std::string> algos;
  std::size_t min_bits = 64;
  std::size_t max_bits = 16384;
  double factor = 1.5;
  std::uint64_t budget_ms = 0;
  std::string csv = "bench.csv";
  std::string plot;
  std::string thresholds;
  std::string mul = "native";
  bool ratios = false;
  bool word = false;
  std::uint64_t seed = 0;
};

struct TuneArgs {
  std::string output = "thresholds.txt";
  std::uint64_t budget_ms = 0;
  std::size_t min_bits = 64;
  std::size_t max_bits = std::size_t{1} << 20;
  double factor = 1.5;
  bool validate = false;
  std::uint64_t seed = 0;
};

inline bool writable(const std::string& path) {
  std::ofstream probe(path, std::ios::app);
  return static_cast<bool>(probe);
}

inline int run_compute(const ComputeArgs& args, std::ostream& out, std::ostream& err) {
  BigNat a, p;
  try {
    a = parse_bignat(args.a);
    p = parse_bignat(args.p);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (args.m < 1 || args.m > kMaxWidth) {
    err << "error: exponent must be in [1, 2^24]\n";
    return kUsage;
  }
  std::optional<PrimePower> pp;
  try {
    pp.emplace(p, args.m);
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  Thresholds th;
  try {
    if (!args.thresholds.empty()) th = load_thresholds(args.thresholds);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  AlgoKind algo = pp->is_binary() ? AlgoKind(AlgoKind::Family::Hybrid) : AlgoKind(AlgoKind::Family::HenselRecursive);
  if (!args.algo.empty()) {
    try {
      algo = AlgoKind::parse(args.algo);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }
  }
  CountingContext ctx(args.count);
  LiftReport report;
  try {
    report = lift(algo, a, *pp, ctx, th);
  } catch (const NotInvertible& e) {
    err << "not invertible: gcd=" << e.gcd().get_str() << '\n';
    return kNotInvertible;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  out << report.inverse.get_str() << '\n';
  if (args.hex) out << to_hex(report.inverse) << '\n';
  if (args.count) out << "ops: " << report.tally << " iterations=" << report.iterations << '\n';
  return kOk;
}

inline int run_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  if (args.trials < 1) {
    err << "error: --trials must be >= 1\n";
    return kUsage;
  }
  if (args.max_bits < 1 || args.max_bits > kMaxWidth) {
    err << "error: --max-bits must be in [1, 2^24]\n";
    return kUsage;
  }
  std::optional<AlgoKind> faulty;
  if (!args.inject_fault.empty()) {
    try {
      faulty = AlgoKind::parse(args.inject_fault);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }
  }
  out << "seed = " << args.seed << '\n';
  RandomBigNat rng(args.seed);
  static const unsigned long primes[] = {2, 3, 5, 7, 65537};
  long long failures = 0;
  long long checks = 0;
  for (long long trial = 0; trial < args.trials; ++trial) {
    const unsigned long p = primes[static_cast<std::size_t>(trial) % std::size(primes)];
    const std::size_t bits_per_digit = static_cast<std::size_t>(mpz_sizeinbase(BigNat(p).get_mpz_t(), 2));
    const std::size_t max_m = std::max<std::size_t>(1, args.max_bits / bits_per_digit);
    const std::size_t m = 1 + static_cast<std::size_t>(rng.word() % max_m);
    const PrimePower pp(p, m);
    BigNat a = rng.below(pp.modulus());
    if (mpz_divisible_ui_p(a.get_mpz_t(), p) != 0) a += 1;
    const auto want = oracle::oracle_inverse(a, pp.modulus());
    for (AlgoKind algo : applicable_algorithms(pp.is_binary())) {
      BigNat got = lift(algo, a, pp).inverse;
      if (faulty && *faulty == algo) mpz_combit(got.get_mpz_t(), 0);
      ++checks;
      if (!want.inverse || got != *want.inverse) {
        ++failures;
        out << "FAIL a=" << a.get_str() << " p=" << p << " m=" << m << " algo=" << algo.name()
            << " got=" << got.get_str() << " want=" << (want.inverse ? want.inverse->get_str() : "none") << '\n';
      }
    }
  }
  out << "verify: " << args.trials << " trials, " << checks << " checks, " << failures << " failures\n";
  return failures == 0 ? kOk : kVerifyFailed;
}

inline int run_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
  if (args.min_bits < 1 || args.min_bits > args.max_bits) {
    err << "error: need 1 <= --min-bits <= --max-bits\n";
    return kUsage;
  }
  if (!(args.factor > 1.0)) {
    err << "error: --factor must exceed 1\n";
    return kUsage;
  }
  if (args.word && args.max_bits > 64) {
    err << "error: --word needs --max-bits <= 64\n";
    return kUsage;
  }
  if (!args.word && args.max_bits > kMaxWidth) {
    err << "error: --max-bits must be <= 2^24\n";
    return kUsage;
  }
  if (args.mul != "native" && args.mul != "schoolbook") {
    err << "error: --mul must be native or schoolbook\n";
    return kUsage;
  }
  Thresholds th;
  try {
    if (!args.thresholds.empty()) th = load_thresholds(args.thresholds);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::vector<Subject> subjects;
  std::vector<std::string> names;
  const std::string reference = args.word ? "explicit_word" : "hybrid";
  try {
    if (args.word) {
      std::vector<std::string> wanted = args.algos;
      if (wanted.empty()) wanted = {"arazi_qi", "hensel", "explicit"};
      for (const auto& w : wanted) {
        std::optional<WordAlgo> algo;
        for (WordAlgo k : {WordAlgo::AraziQi, WordAlgo::Hensel, WordAlgo::Explicit}) {
          if (w == word_algo_name(k)) algo = k;
        }
        if (!algo) throw std::invalid_argument("unknown word algorithm: " + w);
        Subject s = word_subject(*algo);
        s.name += "_word";
        subjects.push_back(std::move(s));
      }
    } else {
      std::vector<std::string> wanted = args.algos;
      if (wanted.empty()) wanted = {"arazi_qi", "hensel_iterative", "hensel_recursive", "hensel_product", "explicit", "hybrid"};
      for (const auto& w : wanted) {
        const AlgoKind algo = AlgoKind::parse(w);
        subjects.push_back(subject_for(algo, th));
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  for (const auto& s : subjects) names.push_back(s.name);
  // Ratios need the reference even when it is not charted.
  const bool extra_reference = args.ratios && std::find(names.begin(), names.end(), reference) == names.end();
  if (extra_reference) {
    subjects.push_back(args.word ? [] {
      Subject s = word_subject(WordAlgo::Explicit);
      s.name += "_word";
      return s;
    }()
                                 : subject_for(AlgoKind::Family::Hybrid, th));
  }

  const std::filesystem::path csv_path(args.csv);
  const std::string ratio_path = (csv_path.parent_path() / (csv_path.stem().string() + ".ratios.csv")).string();
  const std::string plot_path = args.plot.empty() ? (csv_path.parent_path() / (csv_path.stem().string() + ".gp")).string()
                                                  : args.plot;
  for (const std::string& path : {args.csv, plot_path}) {
    if (!writable(path)) {
      err << "error: cannot write " << path << '\n';
      return kUsage;
    }
  }
  if (args.ratios && !writable(ratio_path)) {
    err << "error: cannot write " << ratio_path << '\n';
    return kUsage;
  }

  MeasureOptions opt;
  opt.budget = std::chrono::milliseconds(args.budget_ms);
  opt.seed = args.seed;
  const ScopedMulBackend backend(args.mul == "schoolbook" ? MulBackend::Schoolbook : MulBackend::Native);
  out << "seed = " << args.seed << '\n';

  const std::vector<std::size_t> grid = geometric_grid(args.min_bits, args.max_bits, args.factor);
  std::vector<BenchRecord> rows;
  std::vector<BenchRecord> all;
  for (std::size_t bits : grid) {
    const auto timings = measure_interleaved(subjects, bits, opt);
    for (std::size_t k = 0; k < subjects.size(); ++k) {
      BenchRecord r{subjects[k].name, bits, timings[k].reps, timings[k].total_ns, timings[k].per_op_ns()};
      out << r.algo << " bits=" << bits << " ns/op=" << r.per_op_ns << '\n';
      all.push_back(r);
      if (k < names.size()) rows.push_back(r);
    }
  }

  std::ofstream csv(args.csv);
  write_bench_csv(csv, rows);
  std::optional<std::string> ratios;
  if (args.ratios) {
    std::ofstream rf(ratio_path);
    write_ratio_csv(rf, all, reference);
    ratios = ratio_path;
  }
  std::ofstream plot(plot_path);
  write_plot_script(plot, args.csv, names, ratios,
                    args.word ? "Modular inverse on 64-bit machine words" : "Modular inverse on arbitrary precision integers");
  if (!csv || !plot) {
    err << "error: failed writing output\n";
    return kUsage;
  }
  out << "wrote " << args.csv << " (" << rows.size() << " rows), " << plot_path;
  if (ratios) out << ", " << *ratios;
  out << '\n';
  return kOk;
}

inline int run_tune(const TuneArgs& args, std::ostream& out, std::ostream& err) {
  if (args.min_bits < 1 || args.min_bits > args.max_bits || args.max_bits > kMaxWidth || !(args.factor > 1.0)) {
    err << "error: need 1 <= --min-bits <= --max-bits <= 2^24 and --factor > 1\n";
    return kUsage;
  }
  if (!writable(args.output)) {
    err << "error: cannot write " << args.output << '\n';
    return kUsage;
  }
  MeasureOptions opt;
  opt.budget = std::chrono::milliseconds(args.budget_ms);
  opt.seed = args.seed;
  const std::vector<std::size_t> grid = geometric_grid(args.min_bits, args.max_bits, args.factor);
  out << "seed = " << args.seed << '\n';
  const Thresholds th = autotune(grid, opt, &out);
  try {
    save_thresholds(args.output, th);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  out << "explicit_cutoff = " << th.explicit_cutoff << '\n'
      << "arazi_lower = " << th.arazi_lower << '\n'
      << "arazi_upper = " << th.arazi_upper << '\n';
  if (args.validate) {
    for (const auto& c : check_hybrid(th, grid, opt)) {
      out << "check bits=" << c.bits << " hybrid=" << c.hybrid_ns << "ns best=" << c.best_algo << ' ' << c.best_ns
          << "ns ratio=" << c.ratio() << '\n';
    }
  }
  out << "wrote " << args.output << '\n';
  return kOk;
}

/// Parses argv and runs one command.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modular inverses modulo prime powers by Newton-Hensel lifting"};
  app.require_subcommand(1, 1);

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "Print a^{-1} mod p^m");
  c->add_option("a", compute.a, "Operand (decimal or 0x-hex)")->required();
  c->add_option("m", compute.m, "Exponent m")->required();
  c->add_option("--p", compute.p, "Prime p (default 2)");
  c->add_option("--algo", compute.algo,
                "arazi_qi | hensel_iterative | hensel_recursive | hensel_product | explicit | hybrid | rth_order<r>");
  c->add_option("--thresholds", compute.thresholds, "Thresholds file for hybrid");
  c->add_flag("--hex", compute.hex, "Also print the inverse in hex");
  c->add_flag("--count", compute.count, "Print the operation tally");

  VerifyArgs verify;
  verify.seed = default_seed();
  auto* v = app.add_subcommand("verify", "Check every algorithm against the reference inverse");
  v->add_option("--trials", verify.trials, "Random trials")->capture_default_str();
  v->add_option("--max-bits", verify.max_bits, "Largest modulus width in bits")->capture_default_str();
  v->add_option("--seed", verify.seed, "PRNG seed (env INVMOD_SEED)")->capture_default_str();
  v->add_option("--inject-fault", verify.inject_fault, "Flip the low bit of one algorithm's output")->group("");

  BenchArgs bench;
  bench.seed = default_seed();
  bench.budget_ms = default_budget_ms();
  auto* b = app.add_subcommand("bench", "Time algorithms over a geometric grid of widths");
  b->add_option("--algos", bench.algos, "Algorithms to time")->delimiter(',');
  b->add_option("--min-bits", bench.min_bits, "Smallest width")->capture_default_str();
  b->add_option("--max-bits", bench.max_bits, "Largest width")->capture_default_str();
  b->add_option("--factor", bench.factor, "Grid step factor")->capture_default_str();
  b->add_option("--budget-ms", bench.budget_ms, "Time per algorithm per width (env INVMOD_BUDGET_MS)")->capture_default_str();
  b->add_option("--csv", bench.csv, "CSV output path")->capture_default_str();
  b->add_option("--plot", bench.plot, "gnuplot script path (default: <csv stem>.gp)");
  b->add_option("--thresholds", bench.thresholds, "Thresholds file for hybrid");
  b->add_option("--mul", bench.mul, "Multiplication backend: native | schoolbook")->capture_default_str();
  b->add_flag("--ratios", bench.ratios, "Also write <csv stem>.ratios.csv");
  b->add_flag("--word", bench.word, "Time the 64-bit word algorithms instead");
  b->add_option("--seed", bench.seed, "PRNG seed (env INVMOD_SEED)")->capture_default_str();

  TuneArgs tune;
  tune.seed = default_seed();
  tune.budget_ms = default_budget_ms();
  auto* t = app.add_subcommand("tune", "Measure crossover points and write a thresholds file");
  t->add_option("--output", tune.output, "Thresholds file to write")->capture_default_str();
  t->add_option("--budget-ms", tune.budget_ms, "Time per subject per width (env INVMOD_BUDGET_MS)")->capture_default_str();
  t->add_option("--min-bits", tune.min_bits, "Smallest width")->capture_default_str();
  t->add_option("--max-bits", tune.max_bits, "Largest width")->capture_default_str();
  t->add_option("--factor", tune.factor, "Grid step factor")->capture_default_str();
  t->add_flag("--validate", tune.validate, "Time hybrid against each single algorithm afterwards");
  t->add_option("--seed", tune.seed, "PRNG seed (env INVMOD_SEED)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kUsage;
  }

  try {
    if (c->parsed()) return run_compute(compute, out, err);
    if (v->parsed()) return run_verify(verify, out, err);
    if (b->parsed()) return run_bench(bench, out, err);
    if (t->parsed()) return run_tune(tune, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace invmod::cli

#endif  // INVMOD_TOOLS_CLI_HPP
