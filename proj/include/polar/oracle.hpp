#pragma once

#include <functional>

#include "polar/product_poly.hpp"
#include "polar/rademacher_torus.hpp"

// Brute-force ground truth, deliberately independent of the optimization
// paths it checks: dense angular grids for polynomial sup-norms, full sign
// enumeration, and 1-D adaptive quadrature for the closed-form constants.
namespace polar::oracle {

// Adaptive Simpson on [a, b] to absolute tolerance tol. Throws
// ConvergenceError when the recursion depth is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

struct GridSpec {
  std::int64_t resolution;  // points per angular dimension, >= 8
  PSpace space;
};

// max |P| over an angular parametrization of the p-sphere. One-sided: a
// lower bound converging to the true sup as resolution grows. Real d <= 3,
// complex d <= 2; p = inf supported in the complex case only (torus).
double grid_norm(const FunctionalSystem& sys, const GridSpec& grid);

// max |prod psi_j(z)| over the torus T^d for complex coefficient rows,
// via a dense phase grid (global phase quotiented out) plus golden-section
// polish. d <= 3.
double torus_grid_norm(const std::vector<Vec>& rows, std::int64_t resolution, bool polish = true);

struct SignMinResult {
  SignMatrix sign;
  double value = 0.0;
};

// Enumerates all 2^(nd) sign matrices and returns one minimizing the
// refined net sup-norm (n*d <= 16).
SignMinResult exhaustive_sign_min(int n, int d, int N);

// L(d, K) by direct quadrature of the defining sphere integral, with the
// logarithmic endpoint singularity split off and integrated under u = e^-v.
double quadrature_L(int d, Field field);

}  // namespace polar::oracle
