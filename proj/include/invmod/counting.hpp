#ifndef INVMOD_COUNTING_HPP
#define INVMOD_COUNTING_HPP

#include "invmod/bignat.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string_view>

namespace invmod {

enum class OpKind { Mul, Sqr, AddSub, Shift, MaskOr, ModReduce, Egcd };

/// Per-category count of arithmetic operations.
///
/// Counting convention: each compound-assignment step of a lifting
/// algorithm (`*`, squaring, `+`, `-`, `<<`, `>>`, `&`, `|`, `%`) is one
/// operation in its category, the base-case extended gcd is one `egcd`,
/// and a final reduction is one operation. Modulus construction and entry
/// reduction of oversized inputs are bookkeeping and are not counted.
struct OpTally {
  std::uint64_t mul = 0;
  std::uint64_t sqr = 0;
  std::uint64_t add_sub = 0;
  std::uint64_t shift = 0;
  std::uint64_t mask_or = 0;
  std::uint64_t mod_reduce = 0;
  std::uint64_t egcd = 0;

  std::uint64_t total() const { return mul + sqr + add_sub + shift + mask_or + mod_reduce + egcd; }
  void reset() { *this = OpTally{}; }

  void add(OpKind kind, std::uint64_t n = 1) {
    switch (kind) {
      case OpKind::Mul: mul += n; break;
      case OpKind::Sqr: sqr += n; break;
      case OpKind::AddSub: add_sub += n; break;
      case OpKind::Shift: shift += n; break;
      case OpKind::MaskOr: mask_or += n; break;
      case OpKind::ModReduce: mod_reduce += n; break;
      case OpKind::Egcd: egcd += n; break;
    }
  }

  OpTally& operator+=(const OpTally& o) {
    mul += o.mul;
    sqr += o.sqr;
    add_sub += o.add_sub;
    shift += o.shift;
    mask_or += o.mask_or;
    mod_reduce += o.mod_reduce;
    egcd += o.egcd;
    return *this;
  }

  /// Field-wise difference; `o` must be an earlier snapshot of this tally.
  OpTally since(const OpTally& o) const {
    return {mul - o.mul, sqr - o.sqr, add_sub - o.add_sub, shift - o.shift,
            mask_or - o.mask_or, mod_reduce - o.mod_reduce, egcd - o.egcd};
  }

  friend bool operator==(const OpTally&, const OpTally&) = default;

  friend std::ostream& operator<<(std::ostream& os, const OpTally& t) {
    return os << "mul=" << t.mul << " sqr=" << t.sqr << " add_sub=" << t.add_sub << " shift=" << t.shift
              << " mask_or=" << t.mask_or << " mod_reduce=" << t.mod_reduce << " egcd=" << t.egcd
              << " total=" << t.total();
  }
};

/// Snapshot handed to a step observer after each lifting step.
struct StepEvent {
  std::string_view algorithm;
  /// 1-based step index within the call that emitted it.
  unsigned step = 0;
  /// Exponent k such that the iterate is expected to be an inverse mod p^k
  /// (for the explicit formula: the n of U_n).
  std::size_t precision = 0;
  const BigNat& iterate;
  /// Widest value (in bits) produced by a counted operation since the
  /// previous step event; 0 when width probing is off.
  std::size_t peak_bits = 0;
};

/// Instrumentation carried through one lifting call. Disabled contexts
/// leave results bit-identical and record nothing.
class CountingContext {
 public:
  CountingContext() = default;
  explicit CountingContext(bool enabled) : enabled(enabled) {}

  bool enabled = false;
  bool probe_width = false;
  OpTally tally;
  std::function<void(const StepEvent&)> on_step;

  void count(OpKind kind) {
    if (enabled) tally.add(kind);
  }

  void record(OpKind kind, const BigNat& result) {
    if (!enabled) return;
    tally.add(kind);
    if (probe_width) {
      const std::size_t w = bit_length(result);
      if (w > peak_bits_) peak_bits_ = w;
    }
  }

  void step(std::string_view algorithm, unsigned index, std::size_t precision, const BigNat& iterate) {
    if (enabled && on_step) on_step(StepEvent{algorithm, index, precision, iterate, peak_bits_});
    peak_bits_ = 0;
  }

  /// Forgets the widths seen so far; setup work before the first step
  /// then does not show up in that step's peak.
  void clear_peak() { peak_bits_ = 0; }

  void reset() {
    tally.reset();
    peak_bits_ = 0;
  }

 private:
  std::size_t peak_bits_ = 0;
};

}  // namespace invmod

#endif  // INVMOD_COUNTING_HPP
