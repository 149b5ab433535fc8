#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace qags {

// Seeded generator with a portable bounded draw. std::uniform_int_distribution
// differs across standard libraries, so results would not reproduce bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Uniform real in [0, 1) with 53 random bits.
  double uniform();

  // k distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view data);
std::uint64_t splitmix64(std::uint64_t x);

// Independent stream seed for one instance under a global seed.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view instance_id);

}  // namespace qags
