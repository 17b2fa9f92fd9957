#pragma once

#include <array>
#include <cstdint>

namespace stochopt {

/// Seeded xoshiro256** generator.
///
/// The 256-bit state is expanded from the 64-bit seed with splitmix64, so
/// identical seeds give identical streams on every platform. Child streams
/// come from derive(), which hashes (seed, index) into a fresh seed.
///
/// Normal variates use the Marsaglia polar method (one cached spare per
/// pair). Only +, *, sqrt and log are involved, which keeps the stream
/// reproducible across standard libraries that round sqrt correctly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);
  static Rng derive(std::uint64_t master, std::uint64_t index) {
    return Rng(derive_seed(master, index));
  }

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  // Uniform integer on [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  double normal();

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace stochopt
