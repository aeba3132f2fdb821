#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace hwp {

/// Seeded generator. Bounded draws avoid std::uniform_int_distribution so that
/// results are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform-ish integer in [0, bound).
  std::size_t below(std::size_t bound) { return bound == 0 ? 0 : static_cast<std::size_t>(engine_() % bound); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  /// Derives an independent seed for a sub-task.
  std::uint64_t fork() { return engine_() ^ 0x9e3779b97f4a7c15ULL; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hwp
