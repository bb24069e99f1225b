// Small shared helpers: string splitting, key=value config files,
// a deterministic RNG wrapper, and a stable content hash.
#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bartle {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char delimiter);

// Reads `key = value` lines, '#' starts a comment. Later keys override
// earlier ones.
std::map<std::string, std::string> read_key_values(std::istream& in);

// FNV-1a, used for config hashes embedded in run manifests.
std::uint64_t fnv1a64(std::string_view data);

// mt19937_64 with hand-rolled draws so that generated streams do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
    const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(next());  // full 64-bit span
    return lo + static_cast<std::int64_t>(next() % range);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool chance(double p) { return uniform() < p; }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    if (items.empty()) throw std::invalid_argument("pick: empty pool");
    return items[static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(items.size()) - 1))];
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

  // Weighted index draw; weights need not be normalized.
  std::size_t weighted_index(const std::vector<double>& weights);

 private:
  std::mt19937_64 engine_;
};

// Shortest round-trip decimal form of a double (full precision, stable).
std::string format_double(double value);

// Fixed two-decimal form, e.g. 99.55 -> "99.55".
std::string format_fixed2(double value);

}  // namespace bartle
