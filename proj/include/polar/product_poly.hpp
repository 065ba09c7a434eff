#pragma once

#include <optional>
#include <span>
#include <vector>

#include "polar/spaces.hpp"

namespace polar {

// n linear functionals psi_1..psi_n given by coefficient rows, read as the
// n-homogeneous product polynomial P(x) = psi_1(x) * ... * psi_n(x).
struct FunctionalSystem {
  std::vector<Vec> rows;
  PSpace space;
  bool normalized;  // every row has unit q-norm within 1e-12

  FunctionalSystem(std::vector<Vec> rows_, PSpace space_);

  [[nodiscard]] int n() const { return static_cast<int>(rows.size()); }
  [[nodiscard]] int d() const { return space.d; }
};

cplx evaluate(const FunctionalSystem& sys, std::span<const cplx> x);

// sum_j log|psi_j(x)|; -inf on the zero set. Stable for large n.
double log_abs_evaluate(const FunctionalSystem& sys, std::span<const cplx> x);

// Steepest-ascent direction of log|P| at x in the real inner-product sense
// (C^d read as R^2d). Throws std::domain_error when some psi_j(x) = 0;
// callers should restart from a fresh point.
Vec log_abs_ascent_direction(const FunctionalSystem& sys, std::span<const cplx> x);

struct NormEstimate {
  double value = 0.0;              // best |P| found; lower certificate
  Vec witness;                     // unit p-norm point attaining value
  std::optional<double> upper_certificate;
  bool certificate_heuristic = false;
  int starts = 0;
  bool converged = true;
};

struct AscentConfig {
  int starts = 64;
  int max_iters = 500;
  double tol = 1e-12;       // on log|P| improvement
  double init_step = 0.5;
};

// Multi-start projected ascent of log|P| on the unit p-sphere. The value is
// always a valid lower bound on the true sup-norm and is nondecreasing in
// the number of starts. Nonsmooth spheres (p = 1, p = inf real) run on a
// smoothed exponent and polish the witness on the true sphere; p = inf
// complex searches the torus, where the polydisc maximum lives.
NormEstimate sup_norm(const FunctionalSystem& sys, const AscentConfig& cfg = {},
                      RandomSource src = RandomSource{0x5eed, 1});

// sup over the unit p-sphere of prod |x_i|^{k_i}: the Lagrange closed form
// prod (k_i/n)^{k_i/p} with n = sum k_i. Requires p < inf.
double monomial_norm_exact(std::span<const int> exponents, const PSpace& space);

}  // namespace polar
