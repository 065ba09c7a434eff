#include "polar/hilbert_exact.hpp"

#include <cmath>
#include <stdexcept>

namespace polar {

namespace {

void require_dim(int d) {
  if (d < 2) throw std::invalid_argument("Hilbert constants need d >= 2");
}

}  // namespace

double harmonic_number(int m) {
  if (m < 0) throw std::invalid_argument("harmonic_number: m must be >= 0");
  double h = 0.0;
  for (int j = m; j >= 1; --j) h += 1.0 / j;  // small terms first
  return h;
}

double l_constant(int d, Field field) {
  require_dim(d);
  if (field == Field::Complex) {
    return -0.5 * harmonic_number(d - 1);
  }
  if (d % 2 == 0) {
    double s = 0.0;
    for (int j = (d - 2) / 2; j >= 1; --j) s += 1.0 / (2.0 * j);
    return -(s + std::log(2.0));
  }
  // odd reciprocals 1 + 1/3 + ... + 1/(d-2); validated against quadrature_L
  double s = 0.0;
  for (int i = d - 2; i >= 1; i -= 2) s += 1.0 / i;
  return -s;
}

double l_constant_alt_odd(int d) {
  require_dim(d);
  if (d % 2 == 0) throw std::invalid_argument("l_constant_alt_odd: d must be odd");
  double s = 0.0;
  for (int j = (d - 3) / 2; j >= 1; --j) s += 1.0 / (2.0 * j + 1.0);
  return -s;
}

double hilbert_polarization(int d, Field field) { return std::exp(-l_constant(d, field)); }

CnValue hilbert_cn(int n, Field field) {
  if (n < 1) throw std::invalid_argument("hilbert_cn: n must be >= 1");
  CnValue out;
  out.value = std::pow(static_cast<double>(n), 0.5 * static_cast<double>(n));
  out.known = field == Field::Complex || n <= 5;
  return out;
}

double euler_mascheroni_bound(int d, Field field) {
  require_dim(d);
  const double scale = std::exp(0.5 * kEulerGamma);
  if (field == Field::Complex) return scale * std::sqrt(static_cast<double>(d));
  return scale * std::sqrt(2.0 * static_cast<double>(d));
}

HilbertConstants hilbert_constants(int d, Field field) {
  HilbertConstants hc;
  hc.d = d;
  hc.field = field;
  hc.L = l_constant(d, field);
  hc.c = std::exp(-hc.L);
  hc.gamma_bound = euler_mascheroni_bound(d, field);
  return hc;
}

}  // namespace polar
