#ifndef INVMOD_THRESHOLDS_HPP
#define INVMOD_THRESHOLDS_HPP

#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace invmod {

/// Bit-size switch points of the hybrid inverse.
///
/// m <= explicit_cutoff            -> explicit formula
/// m <= arazi_lower or m >= arazi_upper -> Newton step on top of the recursion
/// otherwise                        -> Arazi-Qi step on top of the recursion
struct Thresholds {
  std::size_t explicit_cutoff = 640;
  std::size_t arazi_lower = 9000;
  std::size_t arazi_upper = 1000000;

  bool well_ordered() const { return explicit_cutoff <= arazi_lower && arazi_lower <= arazi_upper; }

  void validate() const {
    if (!well_ordered()) {
      throw std::invalid_argument("thresholds must satisfy explicit_cutoff <= arazi_lower <= arazi_upper");
    }
  }

  bool uses_arazi_step(std::size_t m) const { return m > arazi_lower && m < arazi_upper; }

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

inline void write_thresholds(std::ostream& os, const Thresholds& th) {
  os << "explicit_cutoff = " << th.explicit_cutoff << '\n'
     << "arazi_lower = " << th.arazi_lower << '\n'
     << "arazi_upper = " << th.arazi_upper << '\n';
}

/// Parses `key = value` lines. Blank lines and `#` comments are skipped;
/// unknown keys, duplicates, malformed values and ordering violations throw
/// std::invalid_argument. Missing keys keep their defaults.
inline Thresholds read_thresholds(std::istream& is) {
  Thresholds th;
  bool seen[3] = {false, false, false};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("thresholds line " + std::to_string(lineno) + ": expected `key = value`");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string text = trim(line.substr(eq + 1));
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("thresholds line " + std::to_string(lineno) + ": value must be a decimal integer");
    }
    const std::size_t value = std::stoull(text);
    int slot = -1;
    if (key == "explicit_cutoff") {
      slot = 0;
      th.explicit_cutoff = value;
    } else if (key == "arazi_lower") {
      slot = 1;
      th.arazi_lower = value;
    } else if (key == "arazi_upper") {
      slot = 2;
      th.arazi_upper = value;
    } else {
      throw std::invalid_argument("thresholds line " + std::to_string(lineno) + ": unknown key `" + key + "`");
    }
    if (seen[slot]) throw std::invalid_argument("thresholds: duplicate key `" + key + "`");
    seen[slot] = true;
  }
  th.validate();
  return th;
}

inline Thresholds load_thresholds(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open thresholds file: " + path);
  return read_thresholds(in);
}

inline void save_thresholds(const std::string& path, const Thresholds& th) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write thresholds file: " + path);
  write_thresholds(out, th);
  if (!out) throw std::runtime_error("failed writing thresholds file: " + path);
}

}  // namespace invmod

#endif  // INVMOD_THRESHOLDS_HPP
