#include "polar/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "polar/errors.hpp"
#include "polar/parallel.hpp"

namespace polar::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

struct AdaptState {
  const std::function<double(double)>& f;
  bool converged = true;
};

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(AdaptState& st, double a, double fa, double b, double fb, double m, double fm,
             double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) {
    st.converged = false;
    return left + right + delta / 15.0;
  }
  return adapt(st, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(st, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

// first-coordinate density constant of the real sphere S^{d-1}:
// Gamma(d/2) / (sqrt(pi) Gamma((d-1)/2))
double real_marginal_constant(int d) {
  return std::exp(std::lgamma(0.5 * d) - std::lgamma(0.5 * (d - 1))) / std::sqrt(kPi);
}

double signed_power(double u, double expo) {
  if (u == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(u), expo), u);
}

double abs_product(const FunctionalSystem& sys, std::span<const cplx> x) {
  double a = 1.0;
  for (const Vec& row : sys.rows) a *= std::abs(pairing(row, x));
  return a;
}

double abs_product_rows(const std::vector<Vec>& rows, std::span<const cplx> z) {
  double a = 1.0;
  for (const Vec& row : rows) a *= std::abs(pairing(row, z));
  return a;
}

// golden-section maximization of a smooth 1-D function
double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  AdaptState st{f};
  // pre-split into 13 panels: an odd count breaks the symmetry aliasing
  // that makes one Simpson pass look converged on periodic integrands
  constexpr int kPanels = 13;
  double out = 0.0;
  for (int panel = 0; panel < kPanels; ++panel) {
    const double lo = a + (b - a) * panel / kPanels;
    const double hi = a + (b - a) * (panel + 1) / kPanels;
    const double m = 0.5 * (lo + hi);
    const double flo = f(lo), fhi = f(hi), fm = f(m);
    const double whole = simpson(flo, fm, fhi, hi - lo);
    out += adapt(st, lo, flo, hi, fhi, m, fm, whole, tol / kPanels, 48);
  }
  if (!st.converged) {
    throw ConvergenceError("adaptive quadrature did not reach tolerance");
  }
  return out;
}

double grid_norm(const FunctionalSystem& sys, const GridSpec& grid) {
  if (grid.resolution < 8) throw std::invalid_argument("grid_norm: resolution must be >= 8");
  const PSpace& sp = grid.space;
  if (sp.d != sys.space.d || sp.field != sys.space.field) {
    throw std::invalid_argument("grid_norm: grid space does not match the system");
  }
  const double p = sp.p;
  const std::int64_t res = grid.resolution;

  if (sp.field == Field::Complex) {
    if (std::isinf(p)) return torus_grid_norm(sys.rows, res);
    if (sp.d == 1) {
      double best = 0.0;
      Vec x(1);
      for (std::int64_t j = 0; j < res; ++j) {
        const double th = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(res);
        x[0] = cplx{std::cos(th), std::sin(th)};
        best = std::max(best, abs_product(sys, x));
      }
      return best;
    }
    if (sp.d == 2) {
      // moduli ((cos t)^{2/p}, (sin t)^{2/p}), relative phase beta; the
      // global phase drops out of |P|
      const double expo = 2.0 / p;
      return chunked_reduce(
          res + 1, 0.0,
          [&](std::int64_t it) {
            const double t = 0.5 * kPi * static_cast<double>(it) / static_cast<double>(res);
            const double r1 = std::pow(std::cos(t), expo);
            const double r2 = std::pow(std::sin(t), expo);
            double best = 0.0;
            Vec x(2);
            for (std::int64_t jb = 0; jb < res; ++jb) {
              const double beta = 2.0 * kPi * static_cast<double>(jb) / static_cast<double>(res);
              x[0] = cplx{r1, 0.0};
              x[1] = cplx{r2 * std::cos(beta), r2 * std::sin(beta)};
              best = std::max(best, abs_product(sys, x));
            }
            return best;
          },
          [](double a, double b) { return std::max(a, b); });
    }
    throw std::invalid_argument("grid_norm: complex grids support d <= 2");
  }

  // real field
  if (std::isinf(p)) {
    throw std::invalid_argument("grid_norm: p = inf real is not parametrized by angles");
  }
  const double expo = 2.0 / p;
  if (sp.d == 1) {
    Vec x(1);
    x[0] = cplx{1.0, 0.0};
    const double a = abs_product(sys, x);
    x[0] = cplx{-1.0, 0.0};
    return std::max(a, abs_product(sys, x));
  }
  if (sp.d == 2) {
    double best = 0.0;
    Vec x(2);
    for (std::int64_t j = 0; j < res; ++j) {
      const double th = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(res);
      x[0] = cplx{signed_power(std::cos(th), expo), 0.0};
      x[1] = cplx{signed_power(std::sin(th), expo), 0.0};
      best = std::max(best, abs_product(sys, x));
    }
    return best;
  }
  if (sp.d == 3) {
    return chunked_reduce(
        res + 1, 0.0,
        [&](std::int64_t it) {
          const double th = kPi * static_cast<double>(it) / static_cast<double>(res);
          const double u1 = std::cos(th);
          const double s = std::sin(th);
          double best = 0.0;
          Vec x(3);
          x[0] = cplx{signed_power(u1, expo), 0.0};
          for (std::int64_t jp = 0; jp < res; ++jp) {
            const double ph = 2.0 * kPi * static_cast<double>(jp) / static_cast<double>(res);
            x[1] = cplx{signed_power(s * std::cos(ph), expo), 0.0};
            x[2] = cplx{signed_power(s * std::sin(ph), expo), 0.0};
            best = std::max(best, abs_product(sys, x));
          }
          return best;
        },
        [](double a, double b) { return std::max(a, b); });
  }
  throw std::invalid_argument("grid_norm: real grids support d <= 3");
}

double torus_grid_norm(const std::vector<Vec>& rows, std::int64_t resolution, bool polish) {
  if (rows.empty()) throw std::invalid_argument("torus_grid_norm: no rows");
  if (resolution < 8) throw std::invalid_argument("torus_grid_norm: resolution must be >= 8");
  const int d = static_cast<int>(rows.front().size());
  const std::int64_t res = resolution;

  if (d == 1) {
    double best = 0.0;
    Vec z(1);
    for (std::int64_t j = 0; j < res; ++j) {
      const double th = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(res);
      z[0] = cplx{std::cos(th), std::sin(th)};
      best = std::max(best, abs_product_rows(rows, z));
    }
    return best;
  }
  if (d == 2) {
    // global phase fixed: z = (1, e^{i beta})
    auto value = [&](double beta) {
      Vec z{cplx{1.0, 0.0}, cplx{std::cos(beta), std::sin(beta)}};
      return abs_product_rows(rows, z);
    };
    double best = 0.0, best_beta = 0.0;
    for (std::int64_t j = 0; j < res; ++j) {
      const double beta = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(res);
      const double v = value(beta);
      if (v > best) {
        best = v;
        best_beta = beta;
      }
    }
    if (polish) {
      const double h = 2.0 * kPi / static_cast<double>(res);
      best = std::max(best, golden_max(value, best_beta - h, best_beta + h, 120));
    }
    return best;
  }
  if (d == 3) {
    auto value = [&](double b2, double b3) {
      Vec z{cplx{1.0, 0.0}, cplx{std::cos(b2), std::sin(b2)}, cplx{std::cos(b3), std::sin(b3)}};
      return abs_product_rows(rows, z);
    };
    double best = 0.0, bb2 = 0.0, bb3 = 0.0;
    for (std::int64_t j2 = 0; j2 < res; ++j2) {
      const double b2 = 2.0 * kPi * static_cast<double>(j2) / static_cast<double>(res);
      for (std::int64_t j3 = 0; j3 < res; ++j3) {
        const double b3 = 2.0 * kPi * static_cast<double>(j3) / static_cast<double>(res);
        const double v = value(b2, b3);
        if (v > best) {
          best = v;
          bb2 = b2;
          bb3 = b3;
        }
      }
    }
    if (polish) {
      // coordinate-wise refinement around the grid argmax, shrinking window
      double h = 2.0 * kPi / static_cast<double>(res);
      for (int round = 0; round < 10; ++round) {
        double cur = bb2;
        for (int g = 0; g <= 64; ++g) {
          const double cand = bb2 - h + 2.0 * h * g / 64.0;
          const double v = value(cand, bb3);
          if (v > best) {
            best = v;
            cur = cand;
          }
        }
        bb2 = cur;
        cur = bb3;
        for (int g = 0; g <= 64; ++g) {
          const double cand = bb3 - h + 2.0 * h * g / 64.0;
          const double v = value(bb2, cand);
          if (v > best) {
            best = v;
            cur = cand;
          }
        }
        bb3 = cur;
        h *= 0.25;
      }
    }
    return best;
  }
  throw std::invalid_argument("torus_grid_norm: d <= 3 only");
}

SignMinResult exhaustive_sign_min(int n, int d, int N) {
  if (n < 1 || d < 1) throw std::invalid_argument("exhaustive_sign_min: n and d must be >= 1");
  if (n * d > 16) throw ResourceError("exhaustive_sign_min: n*d <= 16 required");
  const std::int64_t matrices = std::int64_t{1} << (n * d);
  const std::int64_t per_matrix = net_size(TorusNet{N, d});
  if (matrices > (std::int64_t{1} << 32) / std::max<std::int64_t>(per_matrix, 1)) {
    throw ResourceError("exhaustive_sign_min: enumeration work exceeds budget");
  }

  struct Best {
    double value = kInf;
    std::int64_t bits = -1;
  };
  Best best = chunked_reduce(
      matrices, Best{},
      [&](std::int64_t bits) {
        const SignMatrix m = SignMatrix::from_bits(n, d, static_cast<std::uint64_t>(bits));
        Best b;
        b.bits = bits;
        b.value = sup_norm_polydisc(m, N, true).value;
        return b;
      },
      [](Best acc, Best cand) {
        if (cand.bits < 0) return acc;
        if (acc.bits < 0 || cand.value < acc.value ||
            (cand.value == acc.value && cand.bits < acc.bits)) {
          return cand;
        }
        return acc;
      });

  SignMinResult out;
  out.sign = SignMatrix::from_bits(n, d, static_cast<std::uint64_t>(best.bits));
  out.value = best.value;
  return out;
}

double quadrature_L(int d, Field field) {
  if (d < 2) throw std::invalid_argument("quadrature_L: d must be >= 2");
  constexpr double cut = 1e-3;  // singularity split point
  constexpr double tol = 5e-13;

  if (field == Field::Complex) {
    // |<x, psi>|^2 has density (d-1)(1-s)^{d-2} on [0,1]
    auto weight = [d](double s) {
      return (d - 1) * std::pow(1.0 - s, static_cast<double>(d - 2));
    };
    const double main_piece = integrate(
        [&](double s) { return 0.5 * std::log(s) * weight(s); }, cut, 1.0, tol);
    // u = e^{-v} flattens the log endpoint
    const double singular_piece = integrate(
        [&](double v) {
          const double s = std::exp(-v);
          return 0.5 * (-v) * weight(s) * s;
        },
        std::log(1.0 / cut), 45.0, tol);
    return main_piece + singular_piece;
  }

  // real: L = 2 c_d Int_0^{pi/2} log(sin a) cos^{d-2} a da  (u = sin a)
  const double cd = real_marginal_constant(d);
  auto weight = [d](double a) { return std::pow(std::cos(a), static_cast<double>(d - 2)); };
  const double main_piece = integrate(
      [&](double a) { return std::log(std::sin(a)) * weight(a); }, cut, 0.5 * kPi, tol);
  const double singular_piece = integrate(
      [&](double v) {
        const double a = std::exp(-v);
        return std::log(std::sin(a)) * weight(a) * a;
      },
      std::log(1.0 / cut), 40.0, tol);
  return 2.0 * cd * (main_piece + singular_piece);
}

}  // namespace polar::oracle
