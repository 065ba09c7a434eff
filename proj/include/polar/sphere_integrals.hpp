#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "polar/spaces.hpp"

namespace polar {

struct LogIntegralEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(samples)
  std::int64_t samples = 0;
  double truncation_m = kInf;  // inf means untruncated kernel
  std::int64_t zero_redraws = 0;
};

double combined_std_error(const LogIntegralEstimate& a, const LogIntegralEstimate& b);

// max{ log|<x, psi>|, -m }. Never -inf for finite m; -inf only for a zero
// pairing with m = inf, which callers must handle.
double truncated_log_kernel(std::span<const cplx> x, std::span<const cplx> psi, double m);

// What the functional sample psi is drawn from: the normalized surface
// measure on the Euclidean sphere, or its pushforward phi -> phi/||phi||_q.
struct Measure {
  enum class Kind { UniformEuclidean, QPushforward };
  Kind kind = Kind::UniformEuclidean;
  double q = 2.0;

  static Measure uniform() { return Measure{Kind::UniformEuclidean, 2.0}; }
  static Measure q_pushforward(double q) { return Measure{Kind::QPushforward, q}; }
};

// Monte Carlo mean of the truncated log kernel at x0 against the given
// measure. With m = inf, samples with an exactly zero pairing are redrawn
// (and counted); the singularity is logarithmic hence integrable.
LogIntegralEstimate mc_log_pairing_integral(const Vec& x0, Measure measure, int d, Field field,
                                            std::int64_t samples, double m, RandomSource src);

// Monte Carlo mean of ||t||_p^p over the Euclidean sphere (1 <= p < inf).
LogIntegralEstimate mc_pnorm_moment(double p, int d, Field field, std::int64_t samples,
                                    RandomSource src);

// Monte Carlo mean of ||t||_inf over the Euclidean sphere.
LogIntegralEstimate mc_infnorm_moment(int d, Field field, std::int64_t samples, RandomSource src);

// Monte Carlo mean of log(1/||z||_p) over the Euclidean sphere.
LogIntegralEstimate mc_log_inverse_pnorm(double p, int d, Field field, std::int64_t samples,
                                         RandomSource src);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (d, value)
};

// Ordinary least squares of log(value) against log(d). Needs >= 3 distinct
// d values and positive values.
SlopeFit fit_asymptotic_slope(std::span<const std::pair<double, double>> points);

}  // namespace polar
