#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polar/bounds_engine.hpp"
#include "polar/hilbert_exact.hpp"
#include "polar/oracle.hpp"
#include "polar/product_poly.hpp"

using namespace polar;

namespace {

constexpr double kPi = std::numbers::pi;

Vec e1(int d) {
  Vec v(static_cast<std::size_t>(d), cplx{0, 0});
  v[0] = cplx{1, 0};
  return v;
}

}  // namespace

TEST_CASE("lower bound: p=2 complex recovers the Hilbert constant") {
  const PSpace space(2.0, 2, Field::Complex);
  const LowerBoundEstimate est = lower_bound_candidate(space, e1(2), 200'000, RandomSource{50, 1});
  CHECK(std::abs(est.integral.mean - l_constant(2, Field::Complex)) <=
        3.0 * est.integral.std_error);
  CHECK(std::abs(est.value - std::exp(0.5)) <= 3.5 * est.std_error());

  // rotational symmetry: a different unit x0 gives the same estimate
  Vec tilted{cplx{0.6, 0}, cplx{0, 0.8}};
  const LowerBoundEstimate other = lower_bound_candidate(space, tilted, 200'000, RandomSource{50, 2});
  CHECK(std::abs(est.integral.mean - other.integral.mean) <=
        3.0 * combined_std_error(est.integral, other.integral));
}

TEST_CASE("lower bound: p=4 real against a 1-D quadrature oracle") {
  const PSpace space(4.0, 2, Field::Real);
  const double q = space.q();  // 4/3
  // mean over the circle of log(|cos t| / ||(cos t, sin t)||_q)
  //   = -log 2 - (2/pi) Int_0^{pi/2} (1/q) log(cos^q + sin^q) dt
  const double expected =
      -std::log(2.0) - (2.0 / kPi) * oracle::integrate(
                                         [q](double t) {
                                           const double c = std::abs(std::cos(t));
                                           const double s = std::abs(std::sin(t));
                                           return std::log(std::pow(c, q) + std::pow(s, q)) / q;
                                         },
                                         0.0, kPi / 2.0, 1e-11);
  const LowerBoundEstimate est = lower_bound_candidate(space, e1(2), 300'000, RandomSource{50, 3});
  CHECK(std::abs(est.integral.mean - expected) <= 3.0 * est.integral.std_error);
  CHECK(est.value >= 1.0);
  CHECK(std::isfinite(est.value));
}

TEST_CASE("lower bound rejects off-sphere candidates") {
  const PSpace space(2.0, 2, Field::Real);
  Vec x{cplx{2, 0}, cplx{0, 0}};
  CHECK_THROWS_AS(lower_bound_candidate(space, x, 1000, RandomSource{50, 4}),
                  std::invalid_argument);
}

TEST_CASE("upper bound: p=2 complex collapses to the Hilbert constant") {
  const PSpace space(2.0, 2, Field::Complex);
  UpperBoundConfig cfg;
  cfg.starts = 4;
  const UpperBoundResult est = upper_bound(space, 100'000, cfg, RandomSource{51, 1});
  CHECK(std::abs(est.integral.mean - l_constant(2, Field::Complex)) <=
        3.0 * est.integral.std_error);
  CHECK(p_norm(est.psi0, 2.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("upper bound objective is constant over the 2-sphere") {
  const PSpace space(2.0, 3, Field::Complex);
  Rng rng(RandomSource{51, 2});
  double lo = kInf, hi = -kInf, max_se = 0.0;
  for (int i = 0; i < 16; ++i) {
    Vec psi = normalize_to_sphere(sample_euclidean_sphere(3, Field::Complex, rng), 2.0);
    const LogIntegralEstimate g = mc_log_pairing_integral(
        psi, Measure::q_pushforward(2.0), 3, Field::Complex, 50'000,
        kInf, RandomSource{51, 100 + static_cast<std::uint64_t>(i)});
    lo = std::min(lo, g.mean);
    hi = std::max(hi, g.mean);
    max_se = std::max(max_se, g.std_error);
  }
  CHECK(hi - lo <= 6.0 * max_se);
}

TEST_CASE("upper bound: p=1 d=4 lands within a factor 4 of d") {
  const PSpace space(1.0, 4, Field::Real);
  UpperBoundConfig cfg;
  cfg.starts = 6;
  const UpperBoundResult est = upper_bound(space, 100'000, cfg, RandomSource{51, 3});
  CHECK(est.value >= 4.0 * (1.0 - 0.05));
  CHECK(est.value <= 16.0 * (1.0 + 0.05));
}

TEST_CASE("upper bound enforces its sample floor") {
  const PSpace space(2.0, 2, Field::Real);
  CHECK_THROWS_AS(upper_bound(space, 5'000, UpperBoundConfig{}, RandomSource{51, 4}),
                  std::invalid_argument);
}

TEST_CASE("Step II bounds") {
  CHECK(step2_lower_bound(1.0, 3, 1) == doctest::Approx(27.0).epsilon(1e-14));
  CHECK(step2_per_factor_bound(1.0, 3) == 3.0);
  CHECK(step2_lower_bound(2.0, 2, 2) == doctest::Approx(4.0).epsilon(1e-14));

  // the per-factor root is k-independent
  for (int k : {1, 3}) {
    const double root =
        std::pow(step2_lower_bound(1.5, 3, k), 1.0 / (3.0 * k));
    CHECK(root == doctest::Approx(step2_per_factor_bound(1.5, 3)).epsilon(1e-12));
  }
  for (int d = 2; d <= 32; ++d) {
    CHECK(step2_per_factor_bound(1.0, d) == static_cast<double>(d));  // exact
  }
  CHECK_THROWS_AS(step2_lower_bound(kInf, 2, 1), std::domain_error);
}

TEST_CASE("empirical functional sequences obey the strong law") {
  const PSpace space(4.0, 3, Field::Real);  // q = 4/3
  const int n = 100'000;
  const FunctionalSystem sys = empirical_functional_sequence(space, n, RandomSource{52, 1});
  CHECK(sys.normalized);
  CHECK(sys.n() == n);

  // empirical averages against an independent Monte Carlo eta-mean
  double emp_coord = 0.0, emp_norm2 = 0.0;
  for (const Vec& row : sys.rows) {
    emp_coord += std::norm(row[0]);
    emp_norm2 += p_norm(row, 2.0);
  }
  emp_coord /= n;
  emp_norm2 /= n;

  Rng rng(RandomSource{52, 2});
  double ref_coord = 0.0, ref_norm2 = 0.0, ref_coord_sq = 0.0, ref_norm2_sq = 0.0;
  const int m = 100'000;
  for (int i = 0; i < m; ++i) {
    const Vec psi = normalize_to_sphere(sample_euclidean_sphere(3, Field::Real, rng), space.q());
    const double a = std::norm(psi[0]);
    const double b = p_norm(psi, 2.0);
    ref_coord += a;
    ref_coord_sq += a * a;
    ref_norm2 += b;
    ref_norm2_sq += b * b;
  }
  ref_coord /= m;
  ref_norm2 /= m;
  const double se_coord = std::sqrt((ref_coord_sq / m - ref_coord * ref_coord) / m);
  const double se_norm2 = std::sqrt((ref_norm2_sq / m - ref_norm2 * ref_norm2) / m);
  CHECK(std::abs(emp_coord - ref_coord) <= 3.0 * std::sqrt(2.0) * std::max(se_coord, 1e-9));
  CHECK(std::abs(emp_norm2 - ref_norm2) <= 3.0 * std::sqrt(2.0) * std::max(se_norm2, 1e-9));
}

TEST_CASE("no Hilbert system can undercut the c_n reciprocal") {
  const PSpace space(2.0, 2, Field::Real);
  const FunctionalSystem sys = empirical_functional_sequence(space, 4, RandomSource{52, 3});
  AscentConfig cfg;
  cfg.starts = 24;
  const NormEstimate est = sup_norm(sys, cfg, RandomSource{52, 4});
  CHECK(est.value >= std::pow(4.0, -2.0) * (1.0 - 1e-9));
}

TEST_CASE("Step I chain identity holds per sample") {
  const PSpace space(4.0, 3, Field::Real);
  const double q = space.q();
  Rng rng(RandomSource{53, 1});
  Vec x0 = normalize_to_sphere(sample_euclidean_sphere(3, Field::Real, rng), space.p);
  const double x0_norm2 = p_norm(x0, 2.0);
  Vec x0_unit2(x0);
  for (auto& c : x0_unit2) c /= x0_norm2;
  for (int rep = 0; rep < 200; ++rep) {
    const Vec phi = sample_euclidean_sphere(3, Field::Real, rng);
    const Vec psi = pushforward_to_q_sphere(phi, q);
    const double lhs = std::log(std::abs(pairing(psi, x0)));
    const double rhs = std::log(std::abs(pairing(phi, x0_unit2))) +
                       std::log(1.0 / p_norm(phi, q)) + std::log(x0_norm2);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("sandwich collapses for Hilbert space") {
  const PSpace space(2.0, 8, Field::Complex);
  SandwichConfig cfg;
  cfg.samples = 100'000;
  cfg.upper.starts = 4;
  const BoundReport report = sandwich_report(space, cfg, RandomSource{54, 1});
  const double truth = hilbert_polarization(8, Field::Complex);
  const double combined =
      std::sqrt(report.lower_se() * report.lower_se() + report.upper_se() * report.upper_se());
  CHECK(std::abs(report.upper - report.lower) <= 6.0 * combined);
  CHECK(std::abs(report.lower - truth) <= 4.0 * report.lower_se());
  CHECK(std::abs(report.upper - truth) <= 4.0 * report.upper_se());
  CHECK(report.lower >= 1.0);
  REQUIRE(report.step2_lower.has_value());  // p = 2 still carries d^(1/p)
  CHECK(*report.step2_lower == doctest::Approx(std::sqrt(8.0)).epsilon(1e-13));
}

TEST_CASE("sandwich honours the Step II line at p=1.5") {
  const PSpace space(1.5, 16, Field::Real);
  SandwichConfig cfg;
  cfg.samples = 60'000;
  cfg.candidates = 8;
  cfg.upper.starts = 4;
  const BoundReport report = sandwich_report(space, cfg, RandomSource{54, 2});
  REQUIRE(report.step2_lower.has_value());
  CHECK(*report.step2_lower == doctest::Approx(std::pow(16.0, 2.0 / 3.0)).epsilon(1e-12));
  CHECK(*report.step2_lower >= std::pow(16.0, 2.0 / 3.0) / 1.05);
  // both lines sit under the upper estimate
  const double band = 6.0 * std::sqrt(report.lower_se() * report.lower_se() +
                                      report.upper_se() * report.upper_se());
  CHECK(report.lower <= report.upper + band);
  CHECK(*report.step2_lower <= report.upper * 1.05 + band);
}

TEST_CASE("sandwich adds the torus line at p=inf complex") {
  const PSpace space(kInf, 4, Field::Complex);
  SandwichConfig cfg;
  cfg.samples = 30'000;
  cfg.candidates = 4;
  cfg.pilot_samples = 1'000;
  cfg.upper.starts = 2;
  cfg.upper.max_iters = 60;
  const BoundReport report = sandwich_report(space, cfg, RandomSource{54, 3});
  REQUIRE(report.rademacher_lower.has_value());
  double best = 0.0;
  for (int n = 1; n <= cfg.rademacher_max_n; ++n) {
    best = std::max(best, cn_infty_per_factor_root(n, 4));
  }
  CHECK(*report.rademacher_lower == doctest::Approx(best).epsilon(1e-13));
  CHECK(report.lower >= 1.0 - 1e-9);
}
