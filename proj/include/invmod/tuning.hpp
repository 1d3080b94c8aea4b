#ifndef INVMOD_TUNING_HPP
#define INVMOD_TUNING_HPP

#include "invmod/bignat.hpp"
#include "invmod/lifting.hpp"
#include "invmod/thresholds.hpp"
#include "invmod/word_inverse.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace invmod {

/// One timing row. per_op_ns == total_ns / reps.
struct BenchRecord {
  std::string algo;
  std::size_t bits = 0;
  std::uint64_t reps = 0;
  std::uint64_t total_ns = 0;
  double per_op_ns = 0.0;
};

struct MeasureOptions {
  /// Time allotted to each subject at each size.
  std::chrono::nanoseconds budget = std::chrono::milliseconds(100);
  /// Minimum number of timed batches; the median one is reported.
  unsigned batches = 5;
  /// Preferred length of one batch. Short batches taken round-robin spread
  /// scheduler interference evenly over the subjects.
  std::chrono::nanoseconds batch = std::chrono::microseconds(500);
  std::uint64_t seed = 1;
  std::size_t pool = 32;
};

/// A timed unit of work: one inversion of `a` at width `bits`.
struct Subject {
  std::string name;
  std::function<void(const BigNat& a, std::size_t bits)> run;
};

/// Median batch of one subject.
struct Timing {
  std::uint64_t reps = 0;
  std::uint64_t total_ns = 0;
  double per_op_ns() const { return reps == 0 ? 0.0 : static_cast<double>(total_ns) / static_cast<double>(reps); }
};

inline Subject subject_for(AlgoKind algo, const Thresholds& th = {}) {
  using F = AlgoKind::Family;
  switch (algo.family()) {
    case F::AraziQi: return {algo.name(), [](const BigNat& a, std::size_t bits) { (void)arazi_qi_lift(a, bits); }};
    case F::Explicit: return {algo.name(), [](const BigNat& a, std::size_t bits) { (void)explicit_2m(a, bits); }};
    case F::Hybrid:
      return {algo.name(), [th](const BigNat& a, std::size_t bits) { (void)hybrid_inverse(a, bits, th); }};
    default: break;
  }
  // The remaining algorithms take a PrimePower; build it once per size.
  auto modulus = std::make_shared<std::optional<PrimePower>>();
  return {algo.name(), [algo, modulus](const BigNat& a, std::size_t bits) {
            if (!*modulus || (*modulus)->m() != bits) modulus->emplace(PrimePower::binary(bits));
            CountingContext quiet;
            (void)lift(algo, a, **modulus, quiet);
          }};
}

inline Subject hybrid_subject(std::string name, std::function<Thresholds(std::size_t)> thresholds_for) {
  return {std::move(name), [f = std::move(thresholds_for)](const BigNat& a, std::size_t bits) {
            (void)hybrid_inverse(a, bits, f(bits));
          }};
}

inline Subject word_subject(WordAlgo algo) {
  return {std::string(word_algo_name(algo)), [algo](const BigNat& a, std::size_t bits) {
            const std::uint64_t w = to_u64(a);
            volatile std::uint64_t sink = word_inverse(w, WordExp(static_cast<unsigned>(bits)), algo).value;
            (void)sink;
          }};
}

namespace detail {

inline std::vector<BigNat> input_pool(std::size_t bits, const MeasureOptions& opt) {
  RandomBigNat rng(opt.seed * 0x9E3779B97F4A7C15ULL + bits);
  std::vector<BigNat> pool;
  pool.reserve(opt.pool);
  for (std::size_t i = 0; i < std::max<std::size_t>(opt.pool, 1); ++i) pool.push_back(rng.odd_of_width(bits));
  return pool;
}

inline std::uint64_t time_batch(const Subject& s, const std::vector<BigNat>& pool, std::size_t bits,
                                std::uint64_t reps) {
  const auto start = std::chrono::steady_clock::now();
  for (std::uint64_t i = 0; i < reps; ++i) s.run(pool[i % pool.size()], bits);
  const auto stop = std::chrono::steady_clock::now();
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
}

}  // namespace detail

namespace detail {

/// One subject at one size with its inputs.
struct Job {
  const Subject* subject;
  std::size_t bits;
  const std::vector<BigNat>* pool;
};

/// Repetition counts are calibrated (and the code warmed up) first,
/// untimed. Each job then gets about opt.budget / batch batches of about
/// opt.batch, at least opt.batches (and never fewer than 5). Batches are
/// taken round-robin, a job with fewer batches being spread evenly over
/// the schedule. Each job reports its median batch.
inline std::vector<Timing> measure_jobs(std::span<const Job> jobs, const MeasureOptions& opt) {
  const unsigned min_batches = std::max(opt.batches, 5U);
  const auto budget = static_cast<std::uint64_t>(std::max<std::int64_t>(opt.budget.count(), 0));
  const std::uint64_t target = std::max<std::uint64_t>(
      1, std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max<std::int64_t>(opt.batch.count(), 0)),
                                 budget / (min_batches + 1)));

  std::vector<std::uint64_t> reps(jobs.size(), 1);
  std::vector<std::uint64_t> rounds(jobs.size());
  std::uint64_t most = 0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const Job& job = jobs[k];
    std::uint64_t ns = 0;
    while (reps[k] < (std::uint64_t{1} << 40)) {
      ns = time_batch(*job.subject, *job.pool, job.bits, reps[k]);
      if (ns >= target) break;
      // grow towards the target, at most 16x per round
      const double scale = ns == 0 ? 16.0 : std::min(16.0, 1.2 * static_cast<double>(target) / static_cast<double>(ns));
      reps[k] = std::max<std::uint64_t>(reps[k] + 1, static_cast<std::uint64_t>(static_cast<double>(reps[k]) * scale));
    }
    rounds[k] = std::clamp<std::uint64_t>(budget / std::max<std::uint64_t>(ns, 1), min_batches, 100000);
    most = std::max(most, rounds[k]);
  }

  std::vector<std::vector<std::uint64_t>> samples(jobs.size());
  for (std::size_t k = 0; k < jobs.size(); ++k) samples[k].reserve(rounds[k]);
  for (std::uint64_t b = 0; b < most; ++b) {
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      const std::uint64_t due = (b + 1) * rounds[k] / most;
      while (samples[k].size() < due) {
        samples[k].push_back(time_batch(*jobs[k].subject, *jobs[k].pool, jobs[k].bits, reps[k]));
      }
    }
  }

  std::vector<Timing> out;
  out.reserve(jobs.size());
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    auto& v = samples[k];
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    out.push_back({reps[k], v[v.size() / 2]});
  }
  return out;
}

}  // namespace detail

/// Times several subjects at one size, batches interleaved so slow drift
/// in machine speed hits every subject alike. Strictly sequential.
inline std::vector<Timing> measure_interleaved(std::span<const Subject> subjects, std::size_t bits,
                                               const MeasureOptions& opt) {
  const std::vector<BigNat> pool = detail::input_pool(bits, opt);
  std::vector<detail::Job> jobs;
  for (const Subject& s : subjects) jobs.push_back({&s, bits, &pool});
  return detail::measure_jobs(jobs, opt);
}

/// Times every subject at every size in one interleaved schedule, so
/// timings at different sizes are comparable. Result [size][subject].
inline std::vector<std::vector<Timing>> measure_grid(std::span<const Subject> subjects,
                                                     std::span<const std::size_t> sizes, const MeasureOptions& opt) {
  std::vector<std::vector<BigNat>> pools;
  pools.reserve(sizes.size());
  for (std::size_t bits : sizes) pools.push_back(detail::input_pool(bits, opt));
  std::vector<detail::Job> jobs;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    for (const Subject& s : subjects) jobs.push_back({&s, sizes[i], &pools[i]});
  }
  const std::vector<Timing> flat = detail::measure_jobs(jobs, opt);
  std::vector<std::vector<Timing>> out(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out[i].assign(flat.begin() + static_cast<std::ptrdiff_t>(i * subjects.size()),
                  flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * subjects.size()));
  }
  return out;
}

/// Median-of-batches time of `algo` inverting random odd `bits`-bit inputs
/// modulo 2^bits.
inline BenchRecord measure(AlgoKind algo, std::size_t bits, const MeasureOptions& opt, const Thresholds& th = {}) {
  if (bits < 1) throw std::domain_error("measure: bits must be >= 1");
  const Subject s = subject_for(algo, th);
  const Timing t = measure_interleaved(std::span<const Subject>(&s, 1), bits, opt).front();
  return {algo.name(), bits, t.reps, t.total_ns, t.per_op_ns()};
}

/// Sizes lo, lo*factor, lo*factor^2, ... (rounded, deduplicated) up to hi.
inline std::vector<std::size_t> geometric_grid(std::size_t lo, std::size_t hi, double factor = 1.5) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("geometric_grid: need 1 <= lo <= hi");
  if (!(factor > 1.0)) throw std::invalid_argument("geometric_grid: factor must exceed 1");
  std::vector<std::size_t> grid;
  for (double x = static_cast<double>(lo); x <= static_cast<double>(hi) * (1 + 1e-12); x *= factor) {
    const auto v = static_cast<std::size_t>(std::llround(x));
    if (grid.empty() || v > grid.back()) grid.push_back(v);
  }
  return grid;
}

/// Smallest grid size from which `challenger_faster` holds at that point and
/// the next two, located by bisection on the grid index (assumes the
/// challenger stays ahead once it gets ahead). Answers are
/// memoized so each size is evaluated at most once.
template <class Faster>
std::optional<std::size_t> bisect_crossover(std::span<const std::size_t> grid, Faster&& challenger_faster) {
  if (grid.size() < 3) return std::nullopt;
  std::map<std::size_t, bool> memo;
  auto faster_at = [&](std::size_t idx) {
    auto it = memo.find(idx);
    if (it != memo.end()) return it->second;
    const bool f = challenger_faster(grid[idx]);
    memo.emplace(idx, f);
    return f;
  };
  auto persistent = [&](std::size_t idx) { return faster_at(idx) && faster_at(idx + 1) && faster_at(idx + 2); };

  std::size_t hi = grid.size() - 3;
  if (!persistent(hi)) return std::nullopt;
  if (persistent(0)) return grid[0];
  std::size_t lo = 0;  // !persistent(lo) && persistent(hi)
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (persistent(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return grid[hi];
}

/// First grid size from which `challenger_faster` holds at that point and
/// the next two, by a left-to-right scan. Unlike bisection this finds the
/// start of a band that closes again further up the grid.
template <class Faster>
std::optional<std::size_t> scan_crossover(std::span<const std::size_t> grid, Faster&& challenger_faster) {
  std::size_t run = 0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    run = challenger_faster(grid[idx]) ? run + 1 : 0;
    if (run == 3) return grid[idx - 2];
  }
  return std::nullopt;
}

/// Smallest size in [lo, hi] (geometric grid, step `factor`) from which
/// `challenger` is persistently faster than `incumbent`.
inline std::optional<std::size_t> find_crossover(const Subject& incumbent, const Subject& challenger, std::size_t lo,
                                                 std::size_t hi, const MeasureOptions& opt, double factor = 1.5) {
  if (lo >= hi) throw std::invalid_argument("find_crossover: need lo < hi");
  const std::vector<std::size_t> grid = geometric_grid(lo, hi, factor);
  const Subject pair[2] = {incumbent, challenger};
  return bisect_crossover(std::span<const std::size_t>(grid), [&](std::size_t bits) {
    const auto t = measure_interleaved(pair, bits, opt);
    return t[1].per_op_ns() < t[0].per_op_ns();
  });
}

inline std::optional<std::size_t> find_crossover(AlgoKind a1, AlgoKind a2, std::size_t lo, std::size_t hi,
                                                 const MeasureOptions& opt, double factor = 1.5) {
  if (lo >= hi) throw std::invalid_argument("find_crossover: need lo < hi");
  if (a1 == a2) return std::nullopt;
  return find_crossover(subject_for(a1), subject_for(a2), lo, hi, opt, factor);
}

/// The three comparisons autotune makes, each challenger vs incumbent.
enum class TuneStage {
  /// explicit formula at m vs the hybrid's Newton chain run all the way down
  ExplicitCutoff,
  /// Newton steps at every level above the cutoff vs Arazi-Qi steps there
  AraziLower,
  /// Arazi-Qi steps vs Newton steps, above arazi_lower
  AraziUpper,
};

constexpr std::string_view stage_name(TuneStage s) {
  switch (s) {
    case TuneStage::ExplicitCutoff: return "explicit_cutoff";
    case TuneStage::AraziLower: return "arazi_lower";
    case TuneStage::AraziUpper: return "arazi_upper";
  }
  return "?";
}

/// Threshold selection from challenger-vs-incumbent answers.
///
/// `faster(stage, bits, partial)` reports whether the stage's challenger
/// beats its incumbent at `bits`, given the thresholds fixed so far. A grid
/// too short to evaluate (< 3 points) yields the defaults. A crossover that
/// is searched for but not observed puts the threshold at the end of the
/// searched range. The result is always well ordered.
template <class Faster>
Thresholds autotune_by(std::span<const std::size_t> grid, Faster&& faster) {
  Thresholds th;
  if (grid.size() < 3) return th;
  constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();

  auto below = [&](std::span<const std::size_t> g, std::size_t hit, std::size_t floor) {
    const auto it = std::find(g.begin(), g.end(), hit);
    return it == g.begin() ? std::max(floor, hit - 1) : *(it - 1);
  };

  const auto cut = scan_crossover(grid, [&](std::size_t bits) { return faster(TuneStage::ExplicitCutoff, bits, th); });
  th.explicit_cutoff = cut ? below(grid, *cut, 1) : grid.back();
  th.arazi_lower = th.arazi_upper = kNever;

  std::vector<std::size_t> upper_part;
  for (std::size_t g : grid) {
    if (g > th.explicit_cutoff) upper_part.push_back(g);
  }
  if (upper_part.size() < 3) {
    th.arazi_lower = std::max(Thresholds{}.arazi_lower, th.explicit_cutoff);
    th.arazi_upper = std::max(Thresholds{}.arazi_upper, th.arazi_lower);
    return th;
  }
  const auto lower = scan_crossover(std::span<const std::size_t>(upper_part),
                                      [&](std::size_t bits) { return faster(TuneStage::AraziLower, bits, th); });
  if (!lower) {
    // Newton steps won throughout: empty Arazi band.
    th.arazi_lower = th.arazi_upper = upper_part.back();
    return th;
  }
  th.arazi_lower = below(upper_part, *lower, th.explicit_cutoff);

  std::vector<std::size_t> band;
  for (std::size_t g : upper_part) {
    if (g > th.arazi_lower) band.push_back(g);
  }
  const auto upper = scan_crossover(std::span<const std::size_t>(band),
                                      [&](std::size_t bits) { return faster(TuneStage::AraziUpper, bits, th); });
  th.arazi_upper = upper ? *upper : (band.empty() ? th.arazi_lower : band.back() + 1);
  th.validate();
  return th;
}

/// Incumbent and challenger subjects for one tuning stage.
inline std::pair<Subject, Subject> stage_subjects(TuneStage stage, const Thresholds& partial) {
  constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
  const std::size_t cutoff = partial.explicit_cutoff;
  Subject all_newton = hybrid_subject("hybrid_newton", [cutoff](std::size_t) { return Thresholds{cutoff, kNever, kNever}; });
  Subject all_arazi = hybrid_subject("hybrid_arazi", [cutoff](std::size_t) { return Thresholds{cutoff, cutoff, kNever}; });
  switch (stage) {
    case TuneStage::ExplicitCutoff:
      return {subject_for(AlgoKind::Family::Explicit),
              hybrid_subject("newton_chain", [](std::size_t) { return Thresholds{1, kNever, kNever}; })};
    case TuneStage::AraziLower: return {all_newton, all_arazi};
    case TuneStage::AraziUpper: return {all_arazi, all_newton};
  }
  throw std::invalid_argument("stage_subjects: unknown stage");
}

/// Measured thresholds for this machine. Progress lines go to `log`.
inline Thresholds autotune(std::span<const std::size_t> grid, const MeasureOptions& opt, std::ostream* log = nullptr) {
  if (grid.empty()) throw std::invalid_argument("autotune: grid must be nonempty");
  if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("autotune: grid must be ascending");
  return autotune_by(grid, [&](TuneStage stage, std::size_t bits, const Thresholds& partial) {
    const auto [incumbent, challenger] = stage_subjects(stage, partial);
    const Subject pair[2] = {incumbent, challenger};
    const auto t = measure_interleaved(pair, bits, opt);
    const bool wins = t[1].per_op_ns() < t[0].per_op_ns();
    if (log != nullptr) {
      *log << stage_name(stage) << " bits=" << bits << ' ' << incumbent.name << '=' << t[0].per_op_ns() << "ns "
           << challenger.name << '=' << t[1].per_op_ns() << "ns -> " << (wins ? challenger.name : incumbent.name)
           << '\n';
    }
    return wins;
  });
}

/// Single algorithms the hybrid is held against.
inline std::vector<AlgoKind> baseline_algorithms() {
  using F = AlgoKind::Family;
  return {F::AraziQi, F::HenselIterative, F::HenselRecursive, F::Explicit};
}

struct HybridCheck {
  std::size_t bits = 0;
  double hybrid_ns = 0.0;
  double best_ns = 0.0;
  std::string best_algo;
  double ratio() const { return best_ns > 0 ? hybrid_ns / best_ns : 0.0; }
};

/// Hybrid (with `th`) against each baseline algorithm at every grid size.
inline std::vector<HybridCheck> check_hybrid(const Thresholds& th, std::span<const std::size_t> grid,
                                             const MeasureOptions& opt) {
  std::vector<Subject> subjects{subject_for(AlgoKind::Family::Hybrid, th)};
  for (AlgoKind k : baseline_algorithms()) subjects.push_back(subject_for(k));
  std::vector<HybridCheck> out;
  for (std::size_t bits : grid) {
    const auto t = measure_interleaved(subjects, bits, opt);
    HybridCheck c{bits, t[0].per_op_ns(), std::numeric_limits<double>::infinity(), ""};
    for (std::size_t k = 1; k < t.size(); ++k) {
      if (t[k].per_op_ns() < c.best_ns) {
        c.best_ns = t[k].per_op_ns();
        c.best_algo = subjects[k].name;
      }
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace invmod

#endif  // INVMOD_TUNING_HPP
