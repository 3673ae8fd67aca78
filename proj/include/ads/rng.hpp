#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace ads {

// All randomized stages run on SplitMix64 (Steele, Lea & Flood 2014).
// The generator is fixed here so that a seed reproduces the same bytes
// on every platform; std:: distributions are never used.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64_next(state_); }

  // Unbiased draw in [0, bound) via rejection. bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Fisher-Yates, back to front.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    shuffle(p);
    return p;
  }

 private:
  std::uint64_t state_;
};

// Stable combiner used to derive per-sample seeds from (global seed, index):
// feeding both words through the SplitMix64 finalizer keeps samples
// independent while the whole run stays a pure function of the global seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a;
  const std::uint64_t h = splitmix64_next(s);
  s = h ^ b;
  return splitmix64_next(s);
}

}  // namespace ads
