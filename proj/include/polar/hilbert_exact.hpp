#pragma once

#include "polar/spaces.hpp"

namespace polar {

inline constexpr double kEulerGamma = 0.57721566490153286061;

// H_m = sum_{j=1}^m 1/j.
double harmonic_number(int m);

// L(d, K) = mean of log|<x, psi>| over the Euclidean unit sphere, psi any
// unit functional. Closed forms:
//   complex:   L = -(1/2) H_{d-1}
//   real even: L = -(sum_{j=1}^{(d-2)/2} 1/(2j) + log 2)
//   real odd:  L = -(sum of reciprocals of odd integers 1, 3, ..., d-2)
// The real odd series here starts at 1; an alternative indexing that starts
// at 3 circulates but disagrees with direct quadrature (l_constant_alt_odd
// keeps it available for cross-checking).
double l_constant(int d, Field field);

// Alternative odd-d series indexing: sum_{j=1}^{(d-3)/2} 1/(2j+1), negated.
// Evaluates to 0 at d = 3 while quadrature of the defining integral gives
// -1; exposed only so the discrepancy can be reported next to l_constant.
double l_constant_alt_odd(int d);

// c(H_d) = exp(-L).
double hilbert_polarization(int d, Field field);

struct CnValue {
  double value = 0.0;  // n^(n/2); conjectural when !known
  bool known = false;
};

// c_n of a d >= n dimensional Hilbert space: n^(n/2), proven for all n in
// the complex case and for n <= 5 in the real case.
CnValue hilbert_cn(int n, Field field);

// Monotone Euler-Mascheroni majorant of c(H_d): e^(gamma/2) sqrt(d) in the
// complex case and e^(gamma/2) sqrt(2d) in the real case.
double euler_mascheroni_bound(int d, Field field);

struct HilbertConstants {
  int d = 0;
  Field field = Field::Complex;
  double L = 0.0;
  double c = 1.0;  // exp(-L)
  double gamma_bound = 0.0;
};

HilbertConstants hilbert_constants(int d, Field field);

}  // namespace polar
