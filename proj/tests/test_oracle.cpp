#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polar/errors.hpp"
#include "polar/hilbert_exact.hpp"
#include "polar/oracle.hpp"

using namespace polar;

TEST_CASE("adaptive quadrature on smooth integrands") {
  CHECK(oracle::integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-13) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(oracle::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-13) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("quadrature_L reference values") {
  CHECK(oracle::quadrature_L(2, Field::Real) == doctest::Approx(-std::log(2.0)).epsilon(1e-10));
  CHECK(oracle::quadrature_L(4, Field::Real) ==
        doctest::Approx(-(0.5 + std::log(2.0))).epsilon(1e-10));
  CHECK(oracle::quadrature_L(3, Field::Real) == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(oracle::quadrature_L(2, Field::Complex) == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("complex quadrature matches the harmonic identity to 1e-10") {
  for (int d = 2; d <= 64; ++d) {
    const double quad = oracle::quadrature_L(d, Field::Complex);
    CHECK(std::abs(quad + 0.5 * harmonic_number(d - 1)) <= 1e-10);
  }
}

TEST_CASE("grid_norm on single functionals attains the dual norm") {
  const PSpace space(2.0, 2, Field::Real);
  const FunctionalSystem sys({Vec{cplx{1, 0}, cplx{2, 0}}}, space);
  const double value = oracle::grid_norm(sys, oracle::GridSpec{1'000'000, space});
  CHECK(value == doctest::Approx(std::sqrt(5.0)).epsilon(1e-6));
}

TEST_CASE("grid_norm coordinate products") {
  const PSpace space(2.0, 2, Field::Real);
  const FunctionalSystem sys({Vec{cplx{1, 0}, cplx{0, 0}}, Vec{cplx{0, 0}, cplx{1, 0}}}, space);
  CHECK(oracle::grid_norm(sys, oracle::GridSpec{200'000, space}) ==
        doctest::Approx(0.5).epsilon(1e-6));

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const FunctionalSystem tilted(
      {Vec{cplx{1, 0}, cplx{0, 0}}, Vec{cplx{inv_sqrt2, 0}, cplx{inv_sqrt2, 0}}}, space);
  const double expected = (1.0 + std::sqrt(2.0)) / (2.0 * std::sqrt(2.0));
  CHECK(oracle::grid_norm(tilted, oracle::GridSpec{200'000, space}) ==
        doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("grid_norm is monotone under nested resolution doubling") {
  const PSpace space(3.0, 2, Field::Real);
  const FunctionalSystem sys(
      {Vec{cplx{0.3, 0}, cplx{0.9, 0}}, Vec{cplx{1.0, 0}, cplx{-0.4, 0}}}, space);
  double prev = 0.0;
  for (std::int64_t res : {64, 128, 256, 512, 1024}) {
    const double value = oracle::grid_norm(sys, oracle::GridSpec{res, space});
    CHECK(value >= prev);
    prev = value;
  }
}

TEST_CASE("grid_norm on the complex 2-sphere") {
  const PSpace space(2.0, 2, Field::Complex);
  // orthonormal pair: sup of |x1 x2| is 1/2
  const FunctionalSystem sys({Vec{cplx{1, 0}, cplx{0, 0}}, Vec{cplx{0, 0}, cplx{1, 0}}}, space);
  CHECK(oracle::grid_norm(sys, oracle::GridSpec{512, space}) ==
        doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("grid_norm guards") {
  const PSpace space(2.0, 4, Field::Real);
  const FunctionalSystem sys({Vec{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{0, 0}}}, space);
  CHECK_THROWS_AS(oracle::grid_norm(sys, oracle::GridSpec{64, space}), std::invalid_argument);
  const PSpace small(2.0, 2, Field::Real);
  const FunctionalSystem sys2({Vec{cplx{1, 0}, cplx{0, 0}}}, small);
  CHECK_THROWS_AS(oracle::grid_norm(sys2, oracle::GridSpec{4, small}), std::invalid_argument);
}

TEST_CASE("torus grid norm closed forms") {
  // rows (+,+),(+,-): |z1^2 - z2^2| has sup 2 on the torus
  std::vector<Vec> diff{{cplx{1, 0}, cplx{1, 0}}, {cplx{1, 0}, cplx{-1, 0}}};
  CHECK(oracle::torus_grid_norm(diff, 4096) == doctest::Approx(2.0).epsilon(1e-9));
  // aligned rows: |(z1+z2)^2| has sup 4
  std::vector<Vec> aligned{{cplx{1, 0}, cplx{1, 0}}, {cplx{1, 0}, cplx{1, 0}}};
  CHECK(oracle::torus_grid_norm(aligned, 4096) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("exhaustive sign minimum") {
  CHECK(oracle::exhaustive_sign_min(1, 2, 24).value == doctest::Approx(2.0).epsilon(1e-9));
  const oracle::SignMinResult r22 = oracle::exhaustive_sign_min(2, 2, 48);
  CHECK(r22.value == doctest::Approx(2.0).epsilon(1e-9));
  // minimizing matrices have non-proportional rows
  const int r0 = r22.sign.sign(0, 0) * r22.sign.sign(1, 0);
  const int r1 = r22.sign.sign(0, 1) * r22.sign.sign(1, 1);
  CHECK(r0 != r1);
  CHECK(oracle::exhaustive_sign_min(2, 1, 48).value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(oracle::exhaustive_sign_min(5, 4, 120), ResourceError);
}

TEST_CASE("sign minimum respects the second-moment floor") {
  for (int n : {1, 2}) {
    for (int d : {1, 2, 3}) {
      const double value = oracle::exhaustive_sign_min(n, d, 24 * n).value;
      const double floor = std::pow(static_cast<double>(d), 0.5 * n);
      CHECK(value >= floor - 1e-6);
    }
  }
}
