#include "polar/sphere_integrals.hpp"

#include <cmath>
#include <stdexcept>

#include "polar/parallel.hpp"
#include "polar/summation.hpp"

namespace polar {

namespace {

constexpr std::int64_t kChunk = 16384;  // fixed; results never depend on thread count

struct MomentPartial {
  CompensatedSum sum;
  CompensatedSum sum_sq;
  std::int64_t count = 0;
  std::int64_t redraws = 0;

  void absorb(double x) {
    sum.add(x);
    sum_sq.add(x * x);
    ++count;
  }
  void merge(const MomentPartial& o) {
    sum.merge(o.sum);
    sum_sq.merge(o.sum_sq);
    count += o.count;
    redraws += o.redraws;
  }
};

// Chunked, order-fixed Monte Carlo mean. The kernel may ask for a redraw by
// returning false (only used for zero pairings under an untruncated kernel).
template <class Kernel>
LogIntegralEstimate mc_mean(std::int64_t samples, RandomSource src, double truncation_m,
                            Kernel kernel) {
  if (samples < 2) throw std::invalid_argument("monte carlo estimate needs samples >= 2");
  const std::int64_t n_chunks = (samples + kChunk - 1) / kChunk;
  MomentPartial total = chunked_reduce(
      n_chunks, MomentPartial{},
      [&](std::int64_t chunk) {
        MomentPartial part;
        Rng rng(src.derive(static_cast<std::uint64_t>(chunk)));
        const std::int64_t lo = chunk * kChunk;
        const std::int64_t hi = std::min(samples, lo + kChunk);
        for (std::int64_t i = lo; i < hi; ++i) {
          double value;
          while (!kernel(rng, value)) ++part.redraws;
          part.absorb(value);
        }
        return part;
      },
      [](MomentPartial acc, MomentPartial part) {
        acc.merge(part);
        return acc;
      });

  LogIntegralEstimate est;
  est.samples = total.count;
  est.truncation_m = truncation_m;
  est.zero_redraws = total.redraws;
  const double n = static_cast<double>(total.count);
  est.mean = total.sum.value() / n;
  const double var = std::max(0.0, (total.sum_sq.value() / n - est.mean * est.mean)) * n / (n - 1.0);
  est.std_error = std::sqrt(var / n);
  return est;
}

}  // namespace

double combined_std_error(const LogIntegralEstimate& a, const LogIntegralEstimate& b) {
  return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

double truncated_log_kernel(std::span<const cplx> x, std::span<const cplx> psi, double m) {
  const double a = std::abs(pairing(psi, x));
  const double lg = std::log(a);  // -inf at a == 0
  return std::max(lg, -m);
}

LogIntegralEstimate mc_log_pairing_integral(const Vec& x0, Measure measure, int d, Field field,
                                            std::int64_t samples, double m, RandomSource src) {
  if (p_norm(x0, 2.0) == 0.0) {
    throw std::invalid_argument("mc_log_pairing_integral: x0 must be nonzero");
  }
  if (static_cast<int>(x0.size()) != d) {
    throw std::invalid_argument("mc_log_pairing_integral: x0 dimension mismatch");
  }
  const bool untruncated = std::isinf(m);
  const bool push = measure.kind == Measure::Kind::QPushforward;
  const double q = measure.q;
  return mc_mean(samples, src, m, [&, untruncated, push, q](Rng& rng, double& out) {
    Vec psi = sample_euclidean_sphere(d, field, rng);
    if (push && q != 2.0) psi = normalize_to_sphere(psi, q);
    const double a = std::abs(pairing(psi, x0));
    if (a == 0.0 && untruncated) return false;  // measure-zero; redraw
    out = std::max(std::log(a), -m);
    return true;
  });
}

LogIntegralEstimate mc_pnorm_moment(double p, int d, Field field, std::int64_t samples,
                                    RandomSource src) {
  if (std::isinf(p)) {
    throw std::invalid_argument("mc_pnorm_moment: p = inf not supported, use mc_infnorm_moment");
  }
  if (p < 1.0 || std::isnan(p)) throw std::domain_error("mc_pnorm_moment: p must lie in [1, inf)");
  return mc_mean(samples, src, kInf, [&](Rng& rng, double& out) {
    const Vec t = sample_euclidean_sphere(d, field, rng);
    const double nrm = p_norm(t, p);
    out = std::pow(nrm, p);
    return true;
  });
}

LogIntegralEstimate mc_infnorm_moment(int d, Field field, std::int64_t samples, RandomSource src) {
  return mc_mean(samples, src, kInf, [&](Rng& rng, double& out) {
    const Vec t = sample_euclidean_sphere(d, field, rng);
    out = p_norm(t, kInf);
    return true;
  });
}

LogIntegralEstimate mc_log_inverse_pnorm(double p, int d, Field field, std::int64_t samples,
                                         RandomSource src) {
  if (p < 1.0 || std::isnan(p)) throw std::domain_error("mc_log_inverse_pnorm: p must lie in [1, inf]");
  return mc_mean(samples, src, kInf, [&](Rng& rng, double& out) {
    const Vec z = sample_euclidean_sphere(d, field, rng);
    out = -std::log(p_norm(z, p));
    return true;
  });
}

SlopeFit fit_asymptotic_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_asymptotic_slope: need >= 3 points");
  SlopeFit fit;
  fit.points.assign(points.begin(), points.end());
  double sx = 0, sy = 0;
  for (const auto& [d, v] : points) {
    if (!(v > 0.0) || !(d > 0.0)) {
      throw std::invalid_argument("fit_asymptotic_slope: values and d must be positive");
    }
    sx += std::log(d);
    sy += std::log(v);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [d, v] : points) {
    const double dx = std::log(d) - mx;
    const double dy = std::log(v) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_asymptotic_slope: need distinct d values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace polar
