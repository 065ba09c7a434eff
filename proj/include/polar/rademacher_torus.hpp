#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "polar/product_poly.hpp"
#include "polar/sphere_integrals.hpp"

namespace polar {

// n x d table of +-1 coefficients; row j is the functional
// phi_j(z) = sum_k eps_jk z_k on l_inf^d(C).
struct SignMatrix {
  int n = 0;
  int d = 0;
  std::vector<std::int8_t> entries;  // row-major, values +-1

  SignMatrix() = default;
  SignMatrix(int n_, int d_);

  [[nodiscard]] int sign(int j, int k) const {
    return entries[static_cast<std::size_t>(j) * d + k];
  }
  void set_sign(int j, int k, int value);

  static SignMatrix all_plus(int n, int d);
  static SignMatrix from_bits(int n, int d, std::uint64_t bits);
  static SignMatrix random(int n, int d, Rng& rng);

  [[nodiscard]] std::vector<Vec> rows_as_vectors() const;
};

// F(z) = prod_j sum_k eps_jk z_k.
cplx f_evaluate(const SignMatrix& sign, std::span<const cplx> z);

// E |F(z, .)|^2 over uniform sign matrices; equals d^n exactly on the
// torus. Exhaustive mode enumerates all 2^(nd) matrices (n*d <= 20).
double second_moment_exhaustive(int n, int d, const Vec& z);
LogIntegralEstimate second_moment_mc(int n, int d, const Vec& z, std::int64_t trials,
                                     RandomSource src);

struct TailCheck {
  double empirical = 0.0;  // P(|F(z,.)| > R), exhaustive or sampled
  double bound = 0.0;      // d^n / R^2
  std::int64_t trials = 0;
};
TailCheck chebyshev_tail_check_exhaustive(int n, int d, const Vec& z, double R);
TailCheck chebyshev_tail_check_mc(int n, int d, const Vec& z, double R, std::int64_t trials,
                                  RandomSource src);

// The N^d-point covering net of the torus: per-coordinate N-th roots of
// unity, l_inf covering radius pi/N.
struct TorusNet {
  int N = 1;
  int d = 1;
};

// Exact point count; rejects enumeration requests beyond 2^40 points.
std::int64_t net_size(const TorusNet& net);
// Lexicographic point order: index digits in base N, leading digit first.
Vec net_point(const TorusNet& net, std::int64_t index);
void for_each_net_point(const TorusNet& net,
                        const std::function<void(std::int64_t, std::span<const cplx>)>& fn);

// n^n / (n-1)^(n-1), the derivative-to-norm factor for n-homogeneous
// polynomials; always <= n*e.
double harris_factor(int n);

struct RademacherDefaults {
  static constexpr std::int64_t enumeration_budget = std::int64_t{1} << 22;
};

// Certified polydisc sup-norm for a product of linear functionals with
// arbitrary complex coefficient rows. The maximum over the closed unit
// ball of l_inf^d(C) is attained on the torus, so only T^d is searched.
// When the N^d net fits the enumeration budget the certificate
// net_max / (1 - n*e*pi/N) is rigorous; otherwise the net is subsampled
// and the certificate is flagged heuristic. Requires N >= 2*pi*n*e.
NormEstimate polydisc_sup_norm(const std::vector<Vec>& rows, int N, bool refine,
                               std::int64_t enumeration_budget = RademacherDefaults::enumeration_budget,
                               RandomSource src = RandomSource{0x70125, 3});

NormEstimate sup_norm_polydisc(const SignMatrix& sign, int N, bool refine = true,
                               std::int64_t enumeration_budget = RademacherDefaults::enumeration_budget,
                               RandomSource src = RandomSource{0x70125, 3});

struct RademacherReport {
  int n = 0;
  int d = 0;
  SignMatrix sign;
  NormEstimate sup_norm;
  double threshold_2R = 0.0;  // 2 * sqrt((24n)^d * d^n)
  bool satisfied = false;     // certified sup-norm beat the threshold
  std::int64_t trials_used = 0;
};

// Samples (or exhausts) sign matrices, certifies each sup-norm on the
// N = 24n net, and returns the one with the smallest certificate.
RademacherReport search_good_signs(int n, int d, std::int64_t trials, RandomSource src,
                                   int N = -1);

// (1/2) sqrt(d^n / (24n)^d), the l_inf^d(C) polarization lower bound.
double cn_infty_lower_bound(int n, int d);
double log_cn_infty_lower_bound(int n, int d);
// n-th root of the bound; tends to sqrt(d) as n grows.
double cn_infty_per_factor_root(int n, int d);

}  // namespace polar
