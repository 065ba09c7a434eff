#include <doctest.h>

#include <cstdlib>
#include <numeric>

#include "polar/parallel.hpp"
#include "polar/rng.hpp"
#include "polar/sphere_integrals.hpp"

using namespace polar;

TEST_CASE("identical sources replay identical draws; distinct streams differ") {
  Rng a(RandomSource{7, 3});
  Rng b(RandomSource{7, 3});
  Rng c(RandomSource{7, 4});
  bool any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t xa = a.next_u64();
    CHECK(xa == b.next_u64());
    any_diff = any_diff || xa != c.next_u64();
  }
  CHECK(any_diff);
}

TEST_CASE("derive is deterministic and child-sensitive") {
  const RandomSource base{123, 55};
  CHECK(base.derive(0).stream == base.derive(0).stream);
  CHECK(base.derive(0).stream != base.derive(1).stream);
  CHECK(base.derive(17).seed == base.seed);
}

TEST_CASE("uniform and gaussian look sane") {
  Rng rng(RandomSource{2024, 1});
  double sum = 0.0, sumsq = 0.0;
  const int n = 200'000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double g = rng.gaussian();
    sum += g;
    sumsq += g * g;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("chunked_reduce is independent of the thread cap") {
  auto run = [](const char* threads) {
    setenv("POLARLAB_THREADS", threads, 1);
    const double out = chunked_reduce(
        64, 0.0,
        [](std::int64_t chunk) {
          Rng rng(RandomSource{9, static_cast<std::uint64_t>(chunk)});
          double s = 0.0;
          for (int i = 0; i < 1000; ++i) s += rng.gaussian();
          return s;
        },
        [](double a, double b) { return a + b; });
    unsetenv("POLARLAB_THREADS");
    return out;
  };
  const double one = run("1");
  const double four = run("4");
  CHECK(one == four);  // bitwise
}

TEST_CASE("estimates are bit-identical across thread caps") {
  auto estimate = [](const char* threads) {
    setenv("POLARLAB_THREADS", threads, 1);
    const LogIntegralEstimate est =
        mc_pnorm_moment(3.0, 6, Field::Real, 100'000, RandomSource{77, 5});
    unsetenv("POLARLAB_THREADS");
    return est;
  };
  const LogIntegralEstimate a = estimate("1");
  const LogIntegralEstimate b = estimate("3");
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.samples == b.samples);
}

TEST_CASE("chunked_reduce propagates worker exceptions") {
  setenv("POLARLAB_THREADS", "4", 1);
  CHECK_THROWS_AS(chunked_reduce(
                      16, 0,
                      [](std::int64_t chunk) -> int {
                        if (chunk == 7) throw std::runtime_error("boom");
                        return 1;
                      },
                      [](int a, int b) { return a + b; }),
                  std::runtime_error);
  unsetenv("POLARLAB_THREADS");
}
