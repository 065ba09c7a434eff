#pragma once

#include <optional>

#include "polar/product_poly.hpp"
#include "polar/sphere_integrals.hpp"

namespace polar {

struct LowerBoundEstimate {
  double value = 1.0;  // exp(-integral.mean)
  Vec x0;
  LogIntegralEstimate integral;

  [[nodiscard]] double std_error() const { return value * integral.std_error; }
};

// exp(-Int log|<x0, psi>| d eta(psi)) with eta the q-pushforward measure.
// A statistical estimate of a valid c(l_p^d) lower bound at the extremal
// x0; a candidate line for any other unit x0.
LowerBoundEstimate lower_bound_candidate(const PSpace& space, const Vec& x0,
                                         std::int64_t samples, RandomSource src);

struct UpperBoundConfig {
  std::int64_t saa_samples = 10'000;  // frozen sample set during optimization
  double saa_truncation = 20.0;       // kernel floor while optimizing
  int starts = 8;
  int max_iters = 200;
  double tol = 1e-10;
  double init_step = 0.25;
};

struct UpperBoundResult {
  double value = 1.0;  // exp(-integral.mean), evaluated on fresh samples
  Vec psi0;
  LogIntegralEstimate integral;
  bool converged = true;

  [[nodiscard]] double std_error() const { return value * integral.std_error; }
};

// Minimizes the estimated g(psi) = Int log|<x, psi>| d mu(x) over the unit
// q-sphere (mu = p-pushforward of the surface measure), on one frozen
// sample set, then re-evaluates g at the minimizer on fresh samples.
// Any psi yields a valid conservative bound; optimization only tightens it.
UpperBoundResult upper_bound(const PSpace& space, std::int64_t samples,
                             const UpperBoundConfig& cfg, RandomSource src);

// d^(n_k / p) with n_k = d*k: the reciprocal of the uniform-monomial norm,
// a c_{n_k} lower bound. Its n_k-th root is d^(1/p) independent of k.
double step2_lower_bound(double p, int d, int k);
double step2_per_factor_bound(double p, int d);

// n independent draws from the q-pushforward measure, as rows of a system.
FunctionalSystem empirical_functional_sequence(const PSpace& space, int n, RandomSource src);

enum class X0Strategy { FixedE1, UniformRandom, BestOfCandidates };

struct SandwichConfig {
  std::int64_t samples = 100'000;
  X0Strategy strategy = X0Strategy::BestOfCandidates;
  int candidates = 32;
  std::int64_t pilot_samples = 3'000;
  UpperBoundConfig upper{};
  int rademacher_max_n = 50;  // p = inf extra lower line sweeps n up to here
};

// The lower line normalizes away the sampled x0's Euclidean norm by its
// worst case over the p-sphere, the same elimination the existence
// argument needs; the reported value is then a valid bound regardless of
// which candidate was sampled (strategies only affect variance).
struct BoundReport {
  PSpace space;
  double lower = 1.0;
  Vec lower_witness_x0;
  double upper = kInf;
  Vec upper_witness_psi0;
  LogIntegralEstimate lower_integral;
  LogIntegralEstimate upper_integral;
  std::optional<double> step2_lower;       // per-factor d^(1/p), p <= 2
  std::optional<double> rademacher_lower;  // p = inf complex only
  bool converged = true;

  [[nodiscard]] double lower_se() const { return lower * lower_integral.std_error; }
  [[nodiscard]] double upper_se() const { return upper * upper_integral.std_error; }
};

BoundReport sandwich_report(const PSpace& space, const SandwichConfig& cfg, RandomSource src);

}  // namespace polar
