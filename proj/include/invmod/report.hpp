#ifndef INVMOD_REPORT_HPP
#define INVMOD_REPORT_HPP

// CSV and plot-script output of the benchmark harness.

#include "invmod/tuning.hpp"

#include <algorithm>
#include <cstddef>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace invmod {

inline constexpr const char* kBenchCsvHeader = "algo,bits,reps,total_ns,ns_per_op";

/// `algo,bits,reps,total_ns,ns_per_op`, one row per record, in order.
inline void write_bench_csv(std::ostream& os, std::span<const BenchRecord> rows) {
  os << kBenchCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.algo << ',' << r.bits << ',' << r.reps << ',' << r.total_ns << ',' << std::fixed << std::setprecision(3)
       << r.per_op_ns << std::defaultfloat << '\n';
  }
}

/// Per-size time ratios. Column `<algo>/<reference>` for every algorithm
/// other than the reference, plus `explicit/hensel_recursive` when both were
/// measured. Empty cells where a value is missing.
inline void write_ratio_csv(std::ostream& os, std::span<const BenchRecord> rows, const std::string& reference = "hybrid") {
  std::vector<std::string> algos;
  std::map<std::size_t, std::map<std::string, double>> table;
  for (const auto& r : rows) {
    if (std::find(algos.begin(), algos.end(), r.algo) == algos.end()) algos.push_back(r.algo);
    table[r.bits][r.algo] = r.per_op_ns;
  }
  const bool pair = std::find(algos.begin(), algos.end(), "explicit") != algos.end() &&
                    std::find(algos.begin(), algos.end(), "hensel_recursive") != algos.end();
  os << "bits";
  for (const auto& a : algos) {
    if (a != reference) os << ',' << a << '/' << reference;
  }
  if (pair) os << ",explicit/hensel_recursive";
  os << '\n';
  auto ratio = [](const std::map<std::string, double>& at, const std::string& num, const std::string& den) {
    const auto n = at.find(num);
    const auto d = at.find(den);
    return (n == at.end() || d == at.end() || d->second <= 0) ? std::optional<double>{} : n->second / d->second;
  };
  os << std::fixed << std::setprecision(4);
  for (const auto& [bits, at] : table) {
    os << bits;
    for (const auto& a : algos) {
      if (a == reference) continue;
      os << ',';
      if (auto v = ratio(at, a, reference)) os << *v;
    }
    if (pair) {
      os << ',';
      if (auto v = ratio(at, "explicit", "hensel_recursive")) os << *v;
    }
    os << '\n';
  }
  os << std::defaultfloat;
}

/// gnuplot script drawing time per inversion against width (log-log), and
/// the ratio file when one was written.
inline void write_plot_script(std::ostream& os, const std::string& csv_path, std::span<const std::string> algos,
                              const std::optional<std::string>& ratio_path, const std::string& title) {
  os << "# gnuplot script; run: gnuplot -p <this file>\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set logscale xy\n"
     << "set grid\n"
     << "set xlabel 'bits'\n"
     << "set ylabel 'ns per inversion'\n"
     << "set title '" << title << "'\n"
     << "algos = \"";
  for (std::size_t i = 0; i < algos.size(); ++i) os << (i ? " " : "") << algos[i];
  os << "\"\n"
     << "plot for [a in algos] '" << csv_path
     << "' using (strcol(1) eq a ? $2 : 1/0):5 with linespoints title a\n";
  if (ratio_path) {
    os << "pause -1 'next: ratios'\n"
       << "unset logscale y\n"
       << "set ylabel 'time ratio'\n"
       << "set title 'time ratios per width'\n"
       << "plot for [c=2:*] '" << *ratio_path << "' using 1:c with linespoints\n";
  }
}

}  // namespace invmod

#endif  // INVMOD_REPORT_HPP
