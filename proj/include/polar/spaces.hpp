#pragma once

#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "polar/rng.hpp"

namespace polar {

using cplx = std::complex<double>;
using Vec = std::vector<cplx>;

enum class Field { Real, Complex };

inline constexpr double kInf = std::numeric_limits<double>::infinity();

std::string field_name(Field field);
Field parse_field(const std::string& name);

// Conjugate exponent: 1/p + 1/q = 1, with q = inf at p = 1 and q = 1 at
// p = inf. Involutive. Rejects p < 1 and NaN.
double dual_exponent(double p);

// The ambient space l_p^d over the given scalar field.
struct PSpace {
  double p;
  int d;
  Field field;

  PSpace(double p_, int d_, Field field_);

  [[nodiscard]] double q() const { return dual_exponent(p); }
};

// (sum |v_i|^p)^(1/p); max modulus for p = inf.
double p_norm(std::span<const cplx> v, double p);

// Bilinear dual pairing <x, psi> = sum psi_i x_i (no conjugation).
cplx pairing(std::span<const cplx> psi, std::span<const cplx> x);

// v / ||v||_exponent. Rejects the zero vector. Idempotent on the sphere.
Vec normalize_to_sphere(std::span<const cplx> v, double exponent);

// The pushforward map behind the measure eta: uniform phi on the Euclidean
// sphere maps to phi / ||phi||_q on the q-sphere.
inline Vec pushforward_to_q_sphere(std::span<const cplx> phi, double q) {
  return normalize_to_sphere(phi, q);
}

// Uniform draw from the Euclidean unit sphere (normalized surface measure):
// standard gaussian components, 2d real components in the complex case,
// divided by the Euclidean norm. All-zero draws are redrawn.
Vec sample_euclidean_sphere(int d, Field field, Rng& rng);

// Unit p-norm point x with <x, psi> = ||psi||_q (the Holder equality case).
Vec holder_witness(std::span<const cplx> psi, double p);

// Component of g tangent to the p-sphere at x (real inner product on C^d
// read as R^2d). Keeps projected gradient steps from being swallowed by
// the retraction when the gradient is nearly normal to the sphere.
Vec sphere_tangent_component(std::span<const cplx> g, std::span<const cplx> x, double p);

}  // namespace polar
