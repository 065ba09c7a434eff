#include "polar/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polar {

std::string field_name(Field field) {
  return field == Field::Real ? "real" : "complex";
}

Field parse_field(const std::string& name) {
  if (name == "real" || name == "r" || name == "R") return Field::Real;
  if (name == "complex" || name == "c" || name == "C") return Field::Complex;
  throw std::invalid_argument("unknown scalar field '" + name + "' (use real|complex)");
}

double dual_exponent(double p) {
  if (std::isnan(p) || p < 1.0) {
    throw std::domain_error("dual_exponent: p must lie in [1, inf]");
  }
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

PSpace::PSpace(double p_, int d_, Field field_) : p(p_), d(d_), field(field_) {
  if (std::isnan(p) || p < 1.0) throw std::domain_error("PSpace: p must lie in [1, inf]");
  if (d < 1) throw std::invalid_argument("PSpace: dimension must be >= 1");
}

double p_norm(std::span<const cplx> v, double p) {
  if (std::isnan(p) || p < 1.0) throw std::domain_error("p_norm: p must lie in [1, inf]");
  if (std::isinf(p)) {
    double best = 0.0;
    for (const cplx& c : v) best = std::max(best, std::abs(c));
    return best;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (const cplx& c : v) s += std::norm(c);
    return std::sqrt(s);
  }
  if (p == 1.0) {
    double s = 0.0;
    for (const cplx& c : v) s += std::abs(c);
    return s;
  }
  // scale by the max modulus so large exponents neither underflow nor
  // overflow (ratios lie in [0, 1], the sum in [1, d])
  double top = 0.0;
  for (const cplx& c : v) top = std::max(top, std::abs(c));
  if (top == 0.0) return 0.0;
  double s = 0.0;
  for (const cplx& c : v) {
    const double a = std::abs(c) / top;
    if (a > 0.0) s += std::pow(a, p);
  }
  return top * std::pow(s, 1.0 / p);
}

cplx pairing(std::span<const cplx> psi, std::span<const cplx> x) {
  if (psi.size() != x.size()) {
    throw std::invalid_argument("apply: dimension mismatch");
  }
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < psi.size(); ++i) acc += psi[i] * x[i];
  return acc;
}

Vec normalize_to_sphere(std::span<const cplx> v, double exponent) {
  const double nrm = p_norm(v, exponent);
  if (nrm == 0.0) throw std::invalid_argument("normalize_to_sphere: zero vector");
  Vec out(v.begin(), v.end());
  for (cplx& c : out) c /= nrm;
  return out;
}

Vec sample_euclidean_sphere(int d, Field field, Rng& rng) {
  if (d < 1) throw std::invalid_argument("sample_euclidean_sphere: d must be >= 1");
  Vec v(static_cast<std::size_t>(d));
  for (;;) {
    double s = 0.0;
    for (cplx& c : v) {
      const double re = rng.gaussian();
      const double im = field == Field::Complex ? rng.gaussian() : 0.0;
      c = cplx{re, im};
      s += re * re + im * im;
    }
    if (s > 0.0) {
      const double inv = 1.0 / std::sqrt(s);
      for (cplx& c : v) c *= inv;
      return v;
    }
    // all-zero gaussian draw has probability zero; redraw
  }
}

Vec sphere_tangent_component(std::span<const cplx> g, std::span<const cplx> x, double p) {
  if (g.size() != x.size()) {
    throw std::invalid_argument("sphere_tangent_component: dimension mismatch");
  }
  // normal direction of the level set ||x||_p: n_i = x_i |x_i|^(p-2)
  Vec normal(x.size());
  if (std::isinf(p)) {
    // supporting direction of the max-modulus face
    double top = 0.0;
    for (const cplx& c : x) top = std::max(top, std::abs(c));
    for (std::size_t i = 0; i < x.size(); ++i) {
      normal[i] = std::abs(x[i]) >= top * (1.0 - 1e-12) ? x[i] : cplx{0.0, 0.0};
    }
  } else {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double a = std::abs(x[i]);
      normal[i] = a == 0.0 ? cplx{0.0, 0.0} : x[i] * std::pow(a, p - 2.0);
    }
  }
  double gn = 0.0, nn = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    gn += g[i].real() * normal[i].real() + g[i].imag() * normal[i].imag();
    nn += std::norm(normal[i]);
  }
  Vec out(g.begin(), g.end());
  if (nn > 0.0) {
    const double coef = gn / nn;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] -= coef * normal[i];
  }
  return out;
}

Vec holder_witness(std::span<const cplx> psi, double p) {
  const double q = dual_exponent(p);
  const std::size_t d = psi.size();
  Vec x(d, cplx{0.0, 0.0});
  // phase factors s_i with s_i * psi_i = |psi_i|
  auto phase = [](const cplx& c) {
    const double a = std::abs(c);
    return a == 0.0 ? cplx{0.0, 0.0} : std::conj(c) / a;
  };
  if (p == 1.0) {
    // mass on a largest-modulus coordinate
    std::size_t best = 0;
    for (std::size_t i = 1; i < d; ++i) {
      if (std::abs(psi[i]) > std::abs(psi[best])) best = i;
    }
    if (std::abs(psi[best]) == 0.0) {
      throw std::invalid_argument("holder_witness: zero functional");
    }
    x[best] = phase(psi[best]);
    return x;
  }
  if (std::isinf(p)) {
    bool any = false;
    for (std::size_t i = 0; i < d; ++i) {
      const cplx s = phase(psi[i]);
      x[i] = (s == cplx{0.0, 0.0}) ? cplx{1.0, 0.0} : s;
      any = any || std::abs(psi[i]) > 0.0;
    }
    if (!any) throw std::invalid_argument("holder_witness: zero functional");
    return x;
  }
  // 1 < p < inf: |x_i| proportional to |psi_i|^(q-1), phase aligned
  const double expo = q / p;  // q - 1 == q/p
  bool any = false;
  for (std::size_t i = 0; i < d; ++i) {
    const double a = std::abs(psi[i]);
    if (a > 0.0) {
      x[i] = phase(psi[i]) * std::pow(a, expo);
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("holder_witness: zero functional");
  return normalize_to_sphere(x, p);
}

}  // namespace polar
