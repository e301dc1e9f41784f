#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

namespace wsi {

// splitmix64 finalizer; turns arbitrary keys into well-mixed 64-bit values
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Stream seed for one (base seed, target lemma, run index) chain. Streams are
// independent of each other and of worker scheduling.
inline std::uint64_t stream_seed(std::uint64_t base, std::string_view lemma,
                                 std::uint64_t run_index) {
  return mix64(mix64(base) ^
               mix64(fnv1a64(lemma) + 0x632be59bd9b4e019ull * (run_index + 1)));
}

// Draw interface used by init and sweeps, so tests can force outcomes.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual double next_double() = 0;              // uniform in [0, 1)
  virtual std::uint32_t next_below(std::uint32_t n) = 0;  // uniform in [0, n)
};

// mt19937_64-backed source. Real and bounded-int draws are produced by our
// own bit manipulation: std::*_distribution output differs across standard
// libraries, and chain replays must be exact.
class Rng final : public RandomSource {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double next_double() override {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint32_t next_below(std::uint32_t n) override {
    // unbiased via rejection on the top of the 64-bit range
    const std::uint64_t limit = ~0ull - (~0ull % n + 1) % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x > limit);
    return static_cast<std::uint32_t>(x % n);
  }

  std::string state_string() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
  }

  void set_state(const std::string& s) {
    std::istringstream is(s);
    is >> engine_;
  }

 private:
  std::mt19937_64 engine_;
};

// Inverse-CDF walk over unnormalized nonnegative weights. `u01` in [0, 1).
inline int pick_index(const double* w, int n, double total, double u01) {
  const double u = u01 * total;
  double acc = 0.0;
  int last_positive = 0;
  for (int i = 0; i < n; ++i) {
    acc += w[i];
    if (u < acc) return i;
    if (w[i] > 0.0) last_positive = i;
  }
  return last_positive;  // rounding pushed u past the final cumulative sum
}

}  // namespace wsi
