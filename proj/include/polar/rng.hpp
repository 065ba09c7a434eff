#pragma once

#include <cstdint>

namespace polar {

// Identifies a reproducible random stream. Identical (seed, stream) pairs
// replay identical draws; distinct streams are independent for Monte Carlo
// purposes. Estimators key sub-streams off chunk indices, so results do not
// depend on how chunks are scheduled across threads.
struct RandomSource {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  [[nodiscard]] RandomSource derive(std::uint64_t child) const;
};

// xoshiro256++ seeded through splitmix64. Uniforms and gaussians are
// generated in-house (Box-Muller) so the byte stream never depends on the
// standard library's distribution internals.
class Rng {
 public:
  explicit Rng(RandomSource src);

  std::uint64_t next_u64();
  double uniform();       // [0, 1)
  double uniform_open();  // (0, 1]
  double gaussian();
  int rademacher();       // +1 or -1, fair
  std::int64_t uniform_index(std::int64_t n);  // [0, n)

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace polar
