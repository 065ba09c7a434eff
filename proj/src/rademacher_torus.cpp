#include "polar/rademacher_torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "polar/errors.hpp"
#include "polar/parallel.hpp"
#include "polar/summation.hpp"

namespace polar {

namespace {

constexpr double kTorusTol = 1e-9;

void require_torus(const Vec& z) {
  for (const cplx& c : z) {
    if (std::abs(std::abs(c) - 1.0) > kTorusTol) {
      throw std::invalid_argument("point must lie on the torus (all |z_k| = 1)");
    }
  }
}

void require_exhaustible(int n, int d, int limit) {
  if (n < 1 || d < 1) throw std::invalid_argument("n and d must be >= 1");
  if (n * d > limit) {
    throw ResourceError("exhaustive sign enumeration limited to n*d <= " + std::to_string(limit));
  }
}

// |F(z)|^2 for the sign matrix encoded in the low n*d bits.
double f_abs_sq_bits(int n, int d, std::uint64_t bits, const Vec& z) {
  double out = 1.0;
  for (int j = 0; j < n; ++j) {
    cplx a{0.0, 0.0};
    for (int k = 0; k < d; ++k) {
      const cplx& zk = z[static_cast<std::size_t>(k)];
      if ((bits >> (j * d + k)) & 1u) {
        a += zk;
      } else {
        a -= zk;
      }
    }
    out *= std::norm(a);
  }
  return out;
}

double pow_ll(double base, int expo) {
  double out = 1.0;
  for (int i = 0; i < expo; ++i) out *= base;
  return out;
}

struct ThetaState {
  std::vector<double> theta;
  double level = -kInf;
};

Vec theta_to_point(std::span<const double> theta) {
  Vec z(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    z[k] = cplx{std::cos(theta[k]), std::sin(theta[k])};
  }
  return z;
}

double torus_log_abs(const std::vector<Vec>& rows, std::span<const double> theta) {
  const Vec z = theta_to_point(theta);
  double s = 0.0;
  for (const Vec& row : rows) {
    const double a = std::abs(pairing(row, z));
    if (a == 0.0) return -kInf;
    s += std::log(a);
  }
  return s;
}

// Gradient of log|F| in the angles theta_k (z_k = e^{i theta_k}).
bool torus_gradient(const std::vector<Vec>& rows, std::span<const double> theta,
                    std::vector<double>& grad) {
  const std::size_t d = theta.size();
  std::fill(grad.begin(), grad.end(), 0.0);
  const Vec z = theta_to_point(theta);
  for (const Vec& row : rows) {
    const cplx a = pairing(row, z);
    const double n2 = std::norm(a);
    if (n2 == 0.0) return false;
    for (std::size_t k = 0; k < d; ++k) {
      // d a / d theta_k = i * row_k * z_k
      grad[k] += (std::conj(a) * cplx{0.0, 1.0} * row[k] * z[k]).real() / n2;
    }
  }
  return true;
}

ThetaState theta_ascend(const std::vector<Vec>& rows, std::vector<double> theta, int max_iters,
                        double tol) {
  ThetaState st;
  st.level = torus_log_abs(rows, theta);
  double step = 0.25;
  const std::size_t d = theta.size();
  std::vector<double> grad(d), trial(d);
  for (int iter = 0; iter < max_iters; ++iter) {
    if (!torus_gradient(rows, theta, grad)) break;
    double gn = 0.0;
    for (double g : grad) gn += g * g;
    gn = std::sqrt(gn);
    if (gn == 0.0) break;
    for (std::size_t k = 0; k < d; ++k) trial[k] = theta[k] + step / gn * grad[k];
    const double lv = torus_log_abs(rows, trial);
    if (lv > st.level) {
      const double gain = lv - st.level;
      theta = trial;
      st.level = lv;
      step = std::min(step * 1.5, 1.0);
      if (gain < tol && step < 1e-8) break;
    } else {
      step *= 0.5;
      if (step < 1e-14) break;
    }
  }
  st.theta = std::move(theta);
  return st;
}

std::vector<double> index_to_theta(std::int64_t index, int N, int d) {
  std::vector<double> theta(static_cast<std::size_t>(d));
  const double w = 2.0 * std::numbers::pi / N;
  std::int64_t rem = index;
  for (int k = d - 1; k >= 0; --k) {
    theta[static_cast<std::size_t>(k)] = w * static_cast<double>(rem % N);
    rem /= N;
  }
  return theta;
}

}  // namespace

SignMatrix::SignMatrix(int n_, int d_) : n(n_), d(d_) {
  if (n < 1 || d < 1) throw std::invalid_argument("SignMatrix: n and d must be >= 1");
  entries.assign(static_cast<std::size_t>(n) * d, 1);
}

void SignMatrix::set_sign(int j, int k, int value) {
  if (value != 1 && value != -1) throw std::invalid_argument("SignMatrix: entries must be +-1");
  entries[static_cast<std::size_t>(j) * d + k] = static_cast<std::int8_t>(value);
}

SignMatrix SignMatrix::all_plus(int n, int d) { return SignMatrix(n, d); }

SignMatrix SignMatrix::from_bits(int n, int d, std::uint64_t bits) {
  SignMatrix m(n, d);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < d; ++k) {
      m.set_sign(j, k, ((bits >> (j * d + k)) & 1u) ? 1 : -1);
    }
  }
  return m;
}

SignMatrix SignMatrix::random(int n, int d, Rng& rng) {
  SignMatrix m(n, d);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < d; ++k) m.set_sign(j, k, rng.rademacher());
  }
  return m;
}

std::vector<Vec> SignMatrix::rows_as_vectors() const {
  std::vector<Vec> rows(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(d)));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < d; ++k) {
      rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
          cplx{static_cast<double>(sign(j, k)), 0.0};
    }
  }
  return rows;
}

cplx f_evaluate(const SignMatrix& sign, std::span<const cplx> z) {
  if (static_cast<int>(z.size()) != sign.d) {
    throw std::invalid_argument("f_evaluate: dimension mismatch");
  }
  cplx prod{1.0, 0.0};
  for (int j = 0; j < sign.n; ++j) {
    cplx a{0.0, 0.0};
    for (int k = 0; k < sign.d; ++k) {
      const cplx& zk = z[static_cast<std::size_t>(k)];
      if (sign.sign(j, k) > 0) {
        a += zk;
      } else {
        a -= zk;
      }
    }
    prod *= a;
  }
  return prod;
}

double second_moment_exhaustive(int n, int d, const Vec& z) {
  require_exhaustible(n, d, 20);
  require_torus(z);
  if (static_cast<int>(z.size()) != d) {
    throw std::invalid_argument("second_moment_exhaustive: dimension mismatch");
  }
  const std::uint64_t total = std::uint64_t{1} << (n * d);
  CompensatedSum sum = chunked_reduce(
      static_cast<std::int64_t>((total + 4095) / 4096), CompensatedSum{},
      [&](std::int64_t chunk) {
        CompensatedSum part;
        const std::uint64_t lo = static_cast<std::uint64_t>(chunk) * 4096;
        const std::uint64_t hi = std::min<std::uint64_t>(total, lo + 4096);
        for (std::uint64_t bits = lo; bits < hi; ++bits) {
          part.add(f_abs_sq_bits(n, d, bits, z));
        }
        return part;
      },
      [](CompensatedSum acc, CompensatedSum part) {
        acc.merge(part);
        return acc;
      });
  return sum.value() / static_cast<double>(total);
}

LogIntegralEstimate second_moment_mc(int n, int d, const Vec& z, std::int64_t trials,
                                     RandomSource src) {
  require_torus(z);
  if (static_cast<int>(z.size()) != d) {
    throw std::invalid_argument("second_moment_mc: dimension mismatch");
  }
  if (trials < 2) throw std::invalid_argument("second_moment_mc: trials must be >= 2");
  LogIntegralEstimate est;
  est.samples = trials;
  CompensatedSum sum, sum_sq;
  Rng rng(src);
  for (std::int64_t i = 0; i < trials; ++i) {
    const SignMatrix m = SignMatrix::random(n, d, rng);
    const double v = std::norm(f_evaluate(m, z));
    sum.add(v);
    sum_sq.add(v * v);
  }
  const double cnt = static_cast<double>(trials);
  est.mean = sum.value() / cnt;
  const double var = std::max(0.0, sum_sq.value() / cnt - est.mean * est.mean) * cnt / (cnt - 1.0);
  est.std_error = std::sqrt(var / cnt);
  return est;
}

TailCheck chebyshev_tail_check_exhaustive(int n, int d, const Vec& z, double R) {
  require_exhaustible(n, d, 20);
  require_torus(z);
  if (!(R > 0.0)) throw std::invalid_argument("chebyshev_tail_check: R must be positive");
  const std::uint64_t total = std::uint64_t{1} << (n * d);
  std::uint64_t hits = 0;
  const double r2 = R * R;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    if (f_abs_sq_bits(n, d, bits, z) > r2) ++hits;
  }
  TailCheck out;
  out.empirical = static_cast<double>(hits) / static_cast<double>(total);
  out.bound = std::exp(n * std::log(static_cast<double>(d)) - 2.0 * std::log(R));
  out.trials = static_cast<std::int64_t>(total);
  return out;
}

TailCheck chebyshev_tail_check_mc(int n, int d, const Vec& z, double R, std::int64_t trials,
                                  RandomSource src) {
  require_torus(z);
  if (!(R > 0.0)) throw std::invalid_argument("chebyshev_tail_check: R must be positive");
  if (trials < 1) throw std::invalid_argument("chebyshev_tail_check: trials must be >= 1");
  Rng rng(src);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    const SignMatrix m = SignMatrix::random(n, d, rng);
    if (std::abs(f_evaluate(m, z)) > R) ++hits;
  }
  TailCheck out;
  out.empirical = static_cast<double>(hits) / static_cast<double>(trials);
  out.bound = std::exp(n * std::log(static_cast<double>(d)) - 2.0 * std::log(R));
  out.trials = trials;
  return out;
}

std::int64_t net_size(const TorusNet& net) {
  if (net.N < 1 || net.d < 1) throw std::invalid_argument("TorusNet: N and d must be >= 1");
  const double approx = static_cast<double>(net.d) * std::log2(static_cast<double>(net.N));
  if (approx > 40.0) {
    throw ResourceError("torus net enumeration rejected: N^d exceeds 2^40 points");
  }
  std::int64_t size = 1;
  for (int k = 0; k < net.d; ++k) size *= net.N;
  return size;
}

Vec net_point(const TorusNet& net, std::int64_t index) {
  const std::int64_t size = net_size(net);
  if (index < 0 || index >= size) throw std::out_of_range("net_point: index out of range");
  Vec z(static_cast<std::size_t>(net.d));
  const double w = 2.0 * std::numbers::pi / net.N;
  std::int64_t rem = index;
  for (int k = net.d - 1; k >= 0; --k) {
    const std::int64_t j = rem % net.N;
    rem /= net.N;
    z[static_cast<std::size_t>(k)] = cplx{std::cos(w * static_cast<double>(j)),
                                          std::sin(w * static_cast<double>(j))};
  }
  return z;
}

void for_each_net_point(const TorusNet& net,
                        const std::function<void(std::int64_t, std::span<const cplx>)>& fn) {
  const std::int64_t size = net_size(net);
  std::vector<cplx> roots(static_cast<std::size_t>(net.N));
  const double w = 2.0 * std::numbers::pi / net.N;
  for (int j = 0; j < net.N; ++j) {
    roots[static_cast<std::size_t>(j)] = cplx{std::cos(w * j), std::sin(w * j)};
  }
  std::vector<int> digit(static_cast<std::size_t>(net.d), 0);
  Vec z(static_cast<std::size_t>(net.d), roots[0]);
  for (std::int64_t index = 0;; ++index) {
    fn(index, z);
    if (index + 1 == size) break;
    // odometer increment; last coordinate is the least significant digit
    int k = net.d - 1;
    for (;; --k) {
      auto& dk = digit[static_cast<std::size_t>(k)];
      if (++dk < net.N) break;
      dk = 0;
    }
    for (int kk = k; kk < net.d; ++kk) {
      z[static_cast<std::size_t>(kk)] = roots[static_cast<std::size_t>(digit[static_cast<std::size_t>(kk)])];
    }
  }
}

double harris_factor(int n) {
  if (n < 1) throw std::invalid_argument("harris_factor: n must be >= 1");
  if (n == 1) return 1.0;
  if (n <= 140) {
    return pow_ll(static_cast<double>(n), n) / pow_ll(static_cast<double>(n - 1), n - 1);
  }
  return std::exp(n * std::log(static_cast<double>(n)) -
                  (n - 1) * std::log(static_cast<double>(n - 1)));
}

NormEstimate polydisc_sup_norm(const std::vector<Vec>& rows, int N, bool refine,
                               std::int64_t enumeration_budget, RandomSource src) {
  if (rows.empty()) throw std::invalid_argument("polydisc_sup_norm: no rows");
  const int n = static_cast<int>(rows.size());
  const int d = static_cast<int>(rows.front().size());
  for (const Vec& row : rows) {
    if (static_cast<int>(row.size()) != d) {
      throw std::invalid_argument("polydisc_sup_norm: ragged rows");
    }
  }
  const double lipschitz = n * std::numbers::e;  // Harris majorant n*e
  if (static_cast<double>(N) < 2.0 * std::numbers::pi * lipschitz) {
    throw std::invalid_argument("polydisc_sup_norm: N must be at least 2*pi*n*e");
  }
  const double contraction = 1.0 - lipschitz * std::numbers::pi / N;

  const double log_points = d * std::log2(static_cast<double>(N));
  const bool exact = log_points <= 40.0 && net_size(TorusNet{N, d}) <= enumeration_budget;

  NormEstimate est;
  double net_max = 0.0;
  std::vector<std::vector<double>> seeds;  // refinement starts in angle space
  const std::size_t n_seeds = refine ? 6 : 1;

  if (exact) {
    // full enumeration; keep the best few points as ascent seeds
    std::vector<std::pair<double, std::int64_t>> top;
    for_each_net_point(TorusNet{N, d}, [&](std::int64_t index, std::span<const cplx> z) {
      double a = 1.0;
      for (const Vec& row : rows) a *= std::abs(pairing(row, z));
      if (a > net_max) net_max = a;
      top.emplace_back(a, index);
      if (top.size() > 512) {
        std::nth_element(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(n_seeds),
                         top.end(),
                         [](const auto& l, const auto& r) { return l.first > r.first; });
        top.resize(n_seeds);
      }
    });
    std::sort(top.begin(), top.end(), [](const auto& l, const auto& r) {
      if (l.first != r.first) return l.first > r.first;
      return l.second < r.second;
    });
    for (std::size_t i = 0; i < top.size() && i < n_seeds; ++i) {
      seeds.push_back(index_to_theta(top[i].second, N, d));
    }
    est.upper_certificate = net_max / contraction;
    est.certificate_heuristic = false;
  } else {
    // net too large to enumerate: random net subsample, certificate downgraded
    Rng rng(src.derive(0xba5e));
    const double w = 2.0 * std::numbers::pi / N;
    std::vector<std::pair<double, std::vector<double>>> top;
    for (std::int64_t i = 0; i < enumeration_budget; ++i) {
      std::vector<double> theta(static_cast<std::size_t>(d));
      for (int k = 0; k < d; ++k) {
        theta[static_cast<std::size_t>(k)] = w * static_cast<double>(rng.uniform_index(N));
      }
      const double lv = torus_log_abs(rows, theta);
      const double a = std::isinf(lv) ? 0.0 : std::exp(lv);
      if (a > net_max) net_max = a;
      top.emplace_back(a, std::move(theta));
      if (top.size() > 64) {
        std::nth_element(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(n_seeds),
                         top.end(),
                         [](const auto& l, const auto& r) { return l.first > r.first; });
        top.resize(n_seeds);
      }
    }
    std::sort(top.begin(), top.end(),
              [](const auto& l, const auto& r) { return l.first > r.first; });
    for (std::size_t i = 0; i < top.size() && i < n_seeds; ++i) {
      seeds.push_back(top[i].second);
    }
    est.upper_certificate = net_max / contraction;
    est.certificate_heuristic = true;
  }

  double best_level = net_max > 0.0 ? std::log(net_max) : -kInf;
  Vec best_z;
  if (!seeds.empty()) best_z = theta_to_point(seeds.front());
  if (refine) {
    for (const auto& seed : seeds) {
      const ThetaState st = theta_ascend(rows, seed, 300, 1e-13);
      if (st.level > best_level) {
        best_level = st.level;
        best_z = theta_to_point(st.theta);
      }
    }
  }
  if (best_z.empty()) best_z = net_point(TorusNet{N, d}, 0);
  est.witness = std::move(best_z);
  double value = 1.0;
  for (const Vec& row : rows) value *= std::abs(pairing(row, est.witness));
  est.value = value;
  est.starts = static_cast<int>(seeds.size());
  est.converged = true;
  // floating-point guard only: mathematically value <= sup <= certificate
  if (est.upper_certificate && *est.upper_certificate < est.value) {
    est.upper_certificate = est.value;
  }
  return est;
}

NormEstimate sup_norm_polydisc(const SignMatrix& sign, int N, bool refine,
                               std::int64_t enumeration_budget, RandomSource src) {
  return polydisc_sup_norm(sign.rows_as_vectors(), N, refine, enumeration_budget, src);
}

RademacherReport search_good_signs(int n, int d, std::int64_t trials, RandomSource src, int N) {
  if (n < 1 || d < 1) throw std::invalid_argument("search_good_signs: n and d must be >= 1");
  if (trials < 1) throw std::invalid_argument("search_good_signs: trials must be >= 1");
  if (N < 0) N = 24 * n;

  RademacherReport report;
  report.n = n;
  report.d = d;
  report.threshold_2R =
      2.0 * std::exp(0.5 * (d * std::log(24.0 * n) + n * std::log(static_cast<double>(d))));

  const bool exhaustive = n * d <= 20 && (std::int64_t{1} << (n * d)) <= trials;
  const std::int64_t used = exhaustive ? (std::int64_t{1} << (n * d)) : trials;
  report.trials_used = used;

  struct Best {
    double key = kInf;
    std::int64_t index = -1;
    SignMatrix sign;
    NormEstimate est;
  };
  Best best = chunked_reduce(
      used, Best{},
      [&](std::int64_t i) {
        SignMatrix m;
        if (exhaustive) {
          m = SignMatrix::from_bits(n, d, static_cast<std::uint64_t>(i));
        } else {
          Rng rng(src.derive(static_cast<std::uint64_t>(i)));
          m = SignMatrix::random(n, d, rng);
        }
        Best b;
        b.index = i;
        b.est = sup_norm_polydisc(m, N, true, RademacherDefaults::enumeration_budget,
                                  src.derive(0x9000 + static_cast<std::uint64_t>(i)));
        b.key = b.est.upper_certificate.value_or(b.est.value);
        b.sign = std::move(m);
        return b;
      },
      [](Best acc, Best cand) {
        if (cand.index < 0) return acc;
        if (acc.index < 0 || cand.key < acc.key ||
            (cand.key == acc.key && cand.index < acc.index)) {
          return cand;
        }
        return acc;
      });

  report.sign = std::move(best.sign);
  report.sup_norm = std::move(best.est);
  report.satisfied = report.sup_norm.upper_certificate.has_value() &&
                     *report.sup_norm.upper_certificate <= report.threshold_2R;
  return report;
}

double log_cn_infty_lower_bound(int n, int d) {
  if (n < 1 || d < 1) throw std::invalid_argument("cn_infty_lower_bound: n and d must be >= 1");
  return std::log(0.5) +
         0.5 * (n * std::log(static_cast<double>(d)) - d * std::log(24.0 * static_cast<double>(n)));
}

double cn_infty_lower_bound(int n, int d) { return std::exp(log_cn_infty_lower_bound(n, d)); }

double cn_infty_per_factor_root(int n, int d) {
  return std::exp(log_cn_infty_lower_bound(n, d) / static_cast<double>(n));
}

}  // namespace polar
