#include "polar/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polar {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RandomSource RandomSource::derive(std::uint64_t child) const {
  std::uint64_t x = stream;
  std::uint64_t h = splitmix64(x);
  x ^= child * 0xd1b54a32d192ed03ULL + 0x8bb84b93962eacc9ULL;
  h ^= splitmix64(x);
  return RandomSource{seed, h};
}

Rng::Rng(RandomSource src) {
  std::uint64_t x = src.seed;
  (void)splitmix64(x);
  x ^= rotl(src.stream, 31) + 0x2545f4914f6cdd1dULL;
  for (auto& s : s_) s = splitmix64(x);
  // all-zero state is invalid for xoshiro
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() { return 1.0 - uniform(); }

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

int Rng::rademacher() { return (next_u64() >> 63) ? 1 : -1; }

std::int64_t Rng::uniform_index(std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("uniform_index: n must be positive");
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
  return static_cast<std::int64_t>(wide >> 64);
}

}  // namespace polar
