#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace baldiag {

// Seeded RNG used wherever an algorithm needs randomness (instance
// generators, walk restarts). mt19937_64 output is fully specified by the
// standard; the helpers below avoid std::uniform_int_distribution, whose
// output is implementation-defined, so identical seeds give identical
// streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Unbiased integer in [0, bound). bound == 0 yields 0.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t x = eng_();
      if (x >= threshold) return x % bound;
    }
  }

  int below_int(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

  // Uniform double in [0, 1).
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  bool coin(double p) { return unit() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct values from [0, pool), in selection order.
  std::vector<int> sample(int pool, int k) {
    std::vector<int> all(static_cast<std::size_t>(pool));
    for (int i = 0; i < pool; ++i) all[static_cast<std::size_t>(i)] = i;
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      int j = i + below_int(pool - i);
      std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
      out.push_back(all[static_cast<std::size_t>(i)]);
    }
    return out;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace baldiag
