#include "polar/product_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "polar/rademacher_torus.hpp"

namespace polar {

namespace {

constexpr double kRowNormTol = 1e-12;

// |psi_j(x)| below this multiple of ||psi_j||_q counts as a degenerate
// start; zero sets have measure zero so a redraw always escapes.
constexpr double kDegenerate = 1e-12;

bool ascent_direction_into(const FunctionalSystem& sys, std::span<const cplx> x, Vec& g) {
  const std::size_t d = x.size();
  std::fill(g.begin(), g.end(), cplx{0.0, 0.0});
  for (const Vec& row : sys.rows) {
    const cplx a = pairing(row, x);
    if (a == cplx{0.0, 0.0}) return false;
    const cplx inv = 1.0 / a;
    for (std::size_t i = 0; i < d; ++i) g[i] += std::conj(row[i] * inv);
  }
  return true;
}

struct StartResult {
  double log_value = -kInf;
  Vec x;
  bool converged = false;
};

StartResult ascend_from(const FunctionalSystem& sys, Vec x, double p_opt,
                        const AscentConfig& cfg) {
  StartResult res;
  double level = log_abs_evaluate(sys, x);
  double step = cfg.init_step;
  Vec g(x.size()), trial(x.size());
  bool converged = false;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if (!ascent_direction_into(sys, x, g)) break;
    // stepping along the raw gradient is mostly cancelled by the
    // retraction once the tangential part is small; project first
    const Vec gt = sphere_tangent_component(g, x, p_opt);
    double gn = 0.0;
    for (const cplx& c : gt) gn += std::norm(c);
    gn = std::sqrt(gn);
    if (gn == 0.0) {
      converged = true;
      break;
    }
    const double scale = step / gn;
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + scale * gt[i];
    Vec candidate;
    try {
      candidate = normalize_to_sphere(trial, p_opt);
    } catch (const std::invalid_argument&) {
      step *= 0.5;
      continue;
    }
    const double trial_level = log_abs_evaluate(sys, candidate);
    if (trial_level > level) {
      const double gain = trial_level - level;
      x = std::move(candidate);
      level = trial_level;
      step = std::min(step * 1.5, 1.0);
      if (gain < cfg.tol && step < 1e-8) {
        converged = true;
        break;
      }
    } else {
      step *= 0.5;
      if (step < 1e-14) {
        converged = true;
        break;
      }
    }
  }
  res.log_value = level;
  res.x = std::move(x);
  res.converged = converged;
  return res;
}

Vec draw_start(const FunctionalSystem& sys, double p_opt, Rng& rng) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    Vec x = sample_euclidean_sphere(sys.d(), sys.space.field, rng);
    x = normalize_to_sphere(x, p_opt);
    bool ok = true;
    for (const Vec& row : sys.rows) {
      const double rn = p_norm(row, 2.0);
      if (std::abs(pairing(row, x)) < kDegenerate * rn) {
        ok = false;
        break;
      }
    }
    if (ok) return x;
  }
  // pathological system; start anywhere and let the line search cope
  Rng fallback(RandomSource{0x57a27, 0});
  return normalize_to_sphere(sample_euclidean_sphere(sys.d(), sys.space.field, fallback), p_opt);
}

NormEstimate holder_case(const FunctionalSystem& sys) {
  NormEstimate est;
  est.witness = holder_witness(sys.rows[0], sys.space.p);
  est.value = std::abs(evaluate(sys, est.witness));
  est.starts = 1;
  est.converged = true;
  return est;
}

// Hill-climb on the true p-sphere by shrinking random perturbations; used
// to polish witnesses that were optimized on a smoothed exponent.
void polish_on_sphere(const FunctionalSystem& sys, double p, Vec& x, double& level, Rng& rng) {
  const std::size_t d = x.size();
  double radius = 0.25;
  for (int round = 0; round < 40; ++round) {
    bool improved = false;
    for (int k = 0; k < 24; ++k) {
      Vec trial(d);
      for (std::size_t i = 0; i < d; ++i) {
        const double re = rng.gaussian();
        const double im = sys.space.field == Field::Complex ? rng.gaussian() : 0.0;
        trial[i] = x[i] + radius * cplx{re, im};
      }
      try {
        trial = normalize_to_sphere(trial, p);
      } catch (const std::invalid_argument&) {
        continue;
      }
      const double lv = log_abs_evaluate(sys, trial);
      if (lv > level) {
        x = std::move(trial);
        level = lv;
        improved = true;
      }
    }
    if (!improved) radius *= 0.5;
    if (radius < 1e-10) break;
  }
}

}  // namespace

FunctionalSystem::FunctionalSystem(std::vector<Vec> rows_, PSpace space_)
    : rows(std::move(rows_)), space(space_), normalized(true) {
  if (rows.empty()) throw std::invalid_argument("FunctionalSystem: no rows");
  const double q = space.q();
  for (const Vec& row : rows) {
    if (static_cast<int>(row.size()) != space.d) {
      throw std::invalid_argument("FunctionalSystem: row dimension mismatch");
    }
    const double qn = p_norm(row, q);
    if (qn == 0.0) throw std::invalid_argument("FunctionalSystem: zero row");
    if (std::abs(qn - 1.0) > kRowNormTol) normalized = false;
  }
}

cplx evaluate(const FunctionalSystem& sys, std::span<const cplx> x) {
  cplx prod{1.0, 0.0};
  for (const Vec& row : sys.rows) prod *= pairing(row, x);
  return prod;
}

double log_abs_evaluate(const FunctionalSystem& sys, std::span<const cplx> x) {
  double s = 0.0;
  for (const Vec& row : sys.rows) {
    const double a = std::abs(pairing(row, x));
    if (a == 0.0) return -kInf;
    s += std::log(a);
  }
  return s;
}

Vec log_abs_ascent_direction(const FunctionalSystem& sys, std::span<const cplx> x) {
  Vec g(x.size());
  if (!ascent_direction_into(sys, x, g)) {
    throw std::domain_error("log_abs_ascent_direction: x lies on a zero set");
  }
  return g;
}

NormEstimate sup_norm(const FunctionalSystem& sys, const AscentConfig& cfg, RandomSource src) {
  if (sys.rows.empty()) throw std::invalid_argument("sup_norm: empty system");
  const double p = sys.space.p;

  if (sys.n() == 1) return holder_case(sys);

  if (std::isinf(p)) {
    if (sys.space.field == Field::Complex) {
      // polydisc maximum lives on the torus
      const int n = sys.n();
      const int N = 24 * n;
      NormEstimate est = polydisc_sup_norm(sys.rows, N, true, RademacherDefaults::enumeration_budget, src);
      est.starts = cfg.starts;
      return est;
    }
    // real cube: optimize on a large smooth exponent, then polish
    const double p_opt = 1e6;
    NormEstimate est;
    est.starts = cfg.starts;
    StartResult best;
    bool have = false;
    for (int s = 0; s < cfg.starts; ++s) {
      Rng rng(src.derive(static_cast<std::uint64_t>(s)));
      StartResult r = ascend_from(sys, draw_start(sys, p_opt, rng), p_opt, cfg);
      if (!have || r.log_value > best.log_value) {
        best = std::move(r);
        have = true;
      }
    }
    Vec w = normalize_to_sphere(best.x, p);
    double level = log_abs_evaluate(sys, w);
    Rng prng(src.derive(0x901157));
    polish_on_sphere(sys, p, w, level, prng);
    est.witness = std::move(w);
    est.value = std::abs(evaluate(sys, est.witness));
    est.converged = best.converged;
    return est;
  }

  const bool smooth = p > 1.0;
  const double p_opt = smooth ? p : 1.0 + 1e-6;

  NormEstimate est;
  est.starts = cfg.starts;
  StartResult best;
  bool have = false;
  for (int s = 0; s < cfg.starts; ++s) {
    Rng rng(src.derive(static_cast<std::uint64_t>(s)));
    StartResult r = ascend_from(sys, draw_start(sys, p_opt, rng), p_opt, cfg);
    if (!have || r.log_value > best.log_value) {
      best = std::move(r);
      have = true;
    }
  }
  Vec w = normalize_to_sphere(best.x, p);
  double level = log_abs_evaluate(sys, w);
  if (!smooth) {
    Rng prng(src.derive(0x901157));
    polish_on_sphere(sys, p, w, level, prng);
  }
  est.witness = std::move(w);
  est.value = std::abs(evaluate(sys, est.witness));
  est.converged = best.converged;
  return est;
}

double monomial_norm_exact(std::span<const int> exponents, const PSpace& space) {
  if (std::isinf(space.p)) {
    throw std::domain_error("monomial_norm_exact: requires p < inf");
  }
  if (static_cast<int>(exponents.size()) != space.d) {
    throw std::invalid_argument("monomial_norm_exact: exponent count must equal d");
  }
  long long n = 0;
  for (int k : exponents) {
    if (k < 0) throw std::invalid_argument("monomial_norm_exact: negative exponent");
    n += k;
  }
  if (n == 0) throw std::invalid_argument("monomial_norm_exact: all exponents zero");
  // maximize sum (k_i/p) log|x_i| subject to sum |x_i|^p = 1: |x_i|^p = k_i/n
  double log_value = 0.0;
  for (int k : exponents) {
    if (k > 0) {
      log_value += (static_cast<double>(k) / space.p) *
                   std::log(static_cast<double>(k) / static_cast<double>(n));
    }
  }
  return std::exp(log_value);
}

}  // namespace polar
