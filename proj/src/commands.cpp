#include "polar/commands.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "polar/bounds_engine.hpp"
#include "polar/hilbert_exact.hpp"
#include "polar/oracle.hpp"
#include "polar/product_poly.hpp"
#include "polar/rademacher_torus.hpp"
#include "polar/sphere_integrals.hpp"
#include "polar/version.hpp"

namespace polar::cli {

namespace {

std::string sign_to_string(const SignMatrix& m) {
  std::string out;
  for (int j = 0; j < m.n; ++j) {
    if (j) out += ";";
    for (int k = 0; k < m.d; ++k) out += m.sign(j, k) > 0 ? '+' : '-';
  }
  return out;
}

void add_common(Record& rec, const ExperimentConfig& cfg, const std::string& row) {
  rec.add_string("schema_version", kSchemaVersion);
  rec.add_string("version", kVersion);
  rec.add_string("command", cfg.command);
  rec.add_string("row", row);
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  [[nodiscard]] double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void maybe_add_timing(Record& rec, const ExperimentConfig& cfg, const Timer& timer) {
  if (cfg.timing) rec.add_double("elapsed_ms", timer.ms());
}

CommandOutput finish(const ExperimentConfig& cfg, std::vector<Record> records, bool converged) {
  CommandOutput out;
  out.text = render(records, cfg.format);
  out.exit_code = converged ? 0 : 4;
  return out;
}

CommandOutput cmd_hilbert(const ExperimentConfig& cfg) {
  std::vector<Record> records;
  for (int d : dimension_sweep(cfg)) {
    Timer timer;
    const HilbertConstants hc = hilbert_constants(d, cfg.field);
    const double quad = oracle::quadrature_L(d, cfg.field);
    Record rec;
    add_common(rec, cfg, "hilbert");
    rec.add_string("field", field_name(cfg.field));
    rec.add_int("d", d);
    rec.add_double("L", hc.L);
    const bool odd_real = cfg.field == Field::Real && d % 2 == 1;
    rec.add_double("L_alt", odd_real ? l_constant_alt_odd(d) : hc.L);
    rec.add_double("c", hc.c);
    rec.add_double("gamma_bound", hc.gamma_bound);
    rec.add_double("quad_residual", hc.L - quad);
    maybe_add_timing(rec, cfg, timer);
    records.push_back(std::move(rec));
  }
  return finish(cfg, std::move(records), true);
}

CommandOutput cmd_bounds(const ExperimentConfig& cfg) {
  std::vector<Record> records;
  std::vector<std::pair<double, double>> upper_points;
  bool converged = true;
  for (int d : dimension_sweep(cfg)) {
    Timer timer;
    const PSpace space(cfg.p, d, cfg.field);
    SandwichConfig scfg;
    scfg.samples = cfg.samples;
    scfg.upper.saa_samples = std::min<std::int64_t>(scfg.upper.saa_samples, cfg.samples);
    const BoundReport report =
        sandwich_report(space, scfg, RandomSource{cfg.seed, static_cast<std::uint64_t>(d)});
    converged = converged && report.converged;
    upper_points.emplace_back(static_cast<double>(d), report.upper);

    Record rec;
    add_common(rec, cfg, "bound");
    rec.add_string("p", fmt_extended(cfg.p));
    rec.add_string("field", field_name(cfg.field));
    rec.add_int("d", d);
    rec.add_int("samples", cfg.samples);
    rec.add_int("seed", static_cast<std::int64_t>(cfg.seed));
    rec.add_double("lower", report.lower);
    rec.add_double("lower_se", report.lower_se());
    rec.add_double("upper", report.upper);
    rec.add_double("upper_se", report.upper_se());
    if (report.step2_lower) rec.add_double("step2_lower", *report.step2_lower);
    if (report.rademacher_lower) rec.add_double("rademacher_lower", *report.rademacher_lower);
    rec.add_string("x0", fmt_vector(report.lower_witness_x0));
    rec.add_string("psi0", fmt_vector(report.upper_witness_psi0));
    rec.add_bool("converged", report.converged);
    maybe_add_timing(rec, cfg, timer);
    records.push_back(std::move(rec));
  }
  if (upper_points.size() >= 3) {
    const SlopeFit fit = fit_asymptotic_slope(upper_points);
    Record rec;
    add_common(rec, cfg, "slope");
    rec.add_string("p", fmt_extended(cfg.p));
    rec.add_string("field", field_name(cfg.field));
    rec.add_double("slope", fit.slope);
    rec.add_double("intercept", fit.intercept);
    rec.add_double("r_squared", fit.r_squared);
    records.push_back(std::move(rec));
  }
  return finish(cfg, std::move(records), converged);
}

CommandOutput cmd_integrals(const ExperimentConfig& cfg) {
  std::vector<Record> records;
  std::vector<std::pair<double, double>> sweep_points;
  for (int d : dimension_sweep(cfg)) {
    Timer timer;
    const RandomSource src{cfg.seed, static_cast<std::uint64_t>(d)};
    LogIntegralEstimate est;
    double sweep_value = 0.0;
    if (cfg.kind == "log-pairing") {
      Vec x0(static_cast<std::size_t>(d), cplx{0.0, 0.0});
      x0[0] = cplx{1.0, 0.0};
      est = mc_log_pairing_integral(x0, Measure::q_pushforward(dual_exponent(cfg.p)), d,
                                    cfg.field, cfg.samples, cfg.trunc_m, src);
      sweep_value = std::exp(-est.mean);
    } else if (cfg.kind == "pnorm-moment") {
      est = mc_pnorm_moment(cfg.p, d, cfg.field, cfg.samples, src);
      sweep_value = est.mean;
    } else if (cfg.kind == "infnorm-moment") {
      est = mc_infnorm_moment(d, cfg.field, cfg.samples, src);
      sweep_value = est.mean;
    } else {
      est = mc_log_inverse_pnorm(cfg.p, d, cfg.field, cfg.samples, src);
      sweep_value = std::exp(est.mean);
    }
    sweep_points.emplace_back(static_cast<double>(d), sweep_value);

    Record rec;
    add_common(rec, cfg, "integral");
    rec.add_string("kind", cfg.kind);
    rec.add_string("p", fmt_extended(cfg.p));
    rec.add_string("field", field_name(cfg.field));
    rec.add_int("d", d);
    rec.add_int("samples", cfg.samples);
    rec.add_int("seed", static_cast<std::int64_t>(cfg.seed));
    rec.add_string("trunc_m", fmt_extended(cfg.trunc_m));
    rec.add_double("mean", est.mean);
    rec.add_double("std_error", est.std_error);
    rec.add_int("zero_redraws", est.zero_redraws);
    rec.add_double("sweep_value", sweep_value);
    maybe_add_timing(rec, cfg, timer);
    records.push_back(std::move(rec));
  }
  if (sweep_points.size() >= 3) {
    const SlopeFit fit = fit_asymptotic_slope(sweep_points);
    Record rec;
    add_common(rec, cfg, "slope");
    rec.add_string("kind", cfg.kind);
    rec.add_string("p", fmt_extended(cfg.p));
    rec.add_string("field", field_name(cfg.field));
    rec.add_double("slope", fit.slope);
    rec.add_double("intercept", fit.intercept);
    rec.add_double("r_squared", fit.r_squared);
    records.push_back(std::move(rec));
  }
  return finish(cfg, std::move(records), true);
}

CommandOutput cmd_rademacher(const ExperimentConfig& cfg) {
  Timer timer;
  const int n = cfg.n;
  const int d = cfg.d_lo;
  const int N = cfg.net_n > 0 ? cfg.net_n : 24 * n;
  const RademacherReport report =
      search_good_signs(n, d, cfg.trials, RandomSource{cfg.seed, 1}, N);

  Record rec;
  add_common(rec, cfg, "rademacher");
  rec.add_int("n", n);
  rec.add_int("d", d);
  rec.add_int("trials", cfg.trials);
  rec.add_int("net_N", N);
  rec.add_int("seed", static_cast<std::int64_t>(cfg.seed));
  rec.add_double("sup_value", report.sup_norm.value);
  if (report.sup_norm.upper_certificate) {
    rec.add_double("sup_certificate", *report.sup_norm.upper_certificate);
  }
  rec.add_bool("certificate_heuristic", report.sup_norm.certificate_heuristic);
  rec.add_double("threshold_2R", report.threshold_2R);
  rec.add_bool("satisfied", report.satisfied);
  rec.add_int("trials_used", report.trials_used);
  rec.add_string("sign", sign_to_string(report.sign));
  rec.add_string("witness", fmt_vector(report.sup_norm.witness));
  rec.add_double("cn_lower_bound", cn_infty_lower_bound(n, d));
  rec.add_double("cn_per_factor_root", cn_infty_per_factor_root(n, d));

  // second-moment and tail diagnostics at the all-ones torus point
  const Vec z(static_cast<std::size_t>(d), cplx{1.0, 0.0});
  const double expected = std::pow(static_cast<double>(d), n);
  const double R = 2.0 * std::sqrt(expected);
  if (n * d <= 20) {
    rec.add_string("second_moment_mode", "exhaustive");
    rec.add_double("second_moment", second_moment_exhaustive(n, d, z));
    const TailCheck tail = chebyshev_tail_check_exhaustive(n, d, z, R);
    rec.add_double("chebyshev_R", R);
    rec.add_double("chebyshev_empirical", tail.empirical);
    rec.add_double("chebyshev_bound", tail.bound);
  } else {
    rec.add_string("second_moment_mode", "mc");
    rec.add_double("second_moment",
                   second_moment_mc(n, d, z, 100'000, RandomSource{cfg.seed, 2}).mean);
    const TailCheck tail = chebyshev_tail_check_mc(n, d, z, R, 100'000, RandomSource{cfg.seed, 3});
    rec.add_double("chebyshev_R", R);
    rec.add_double("chebyshev_empirical", tail.empirical);
    rec.add_double("chebyshev_bound", tail.bound);
  }
  rec.add_double("second_moment_expected", expected);
  maybe_add_timing(rec, cfg, timer);

  std::vector<Record> records;
  records.push_back(std::move(rec));
  return finish(cfg, std::move(records), true);
}

CommandOutput cmd_oracle(const ExperimentConfig& cfg) {
  std::vector<Record> records;
  if (cfg.kind == "quadrature-L") {
    for (int d : dimension_sweep(cfg)) {
      Timer timer;
      Record rec;
      add_common(rec, cfg, "quadrature-L");
      rec.add_string("field", field_name(cfg.field));
      rec.add_int("d", d);
      rec.add_double("value", oracle::quadrature_L(d, cfg.field));
      maybe_add_timing(rec, cfg, timer);
      records.push_back(std::move(rec));
    }
  } else if (cfg.kind == "grid-norm") {
    Timer timer;
    const int d = static_cast<int>(cfg.rows.front().size());
    const PSpace space(cfg.p, d, cfg.field);
    const FunctionalSystem sys(cfg.rows, space);
    const double value = oracle::grid_norm(sys, oracle::GridSpec{cfg.resolution, space});
    Record rec;
    add_common(rec, cfg, "grid-norm");
    rec.add_string("p", fmt_extended(cfg.p));
    rec.add_string("field", field_name(cfg.field));
    rec.add_int("d", d);
    rec.add_int("resolution", cfg.resolution);
    std::string rows_text;
    for (std::size_t i = 0; i < cfg.rows.size(); ++i) {
      if (i) rows_text += "|";
      rows_text += fmt_vector(cfg.rows[i]);
    }
    rec.add_string("rows", rows_text);
    rec.add_double("value", value);
    maybe_add_timing(rec, cfg, timer);
    records.push_back(std::move(rec));
  } else {  // sign-min
    Timer timer;
    const int n = cfg.n;
    const int d = cfg.d_lo;
    const int N = cfg.net_n > 0 ? cfg.net_n : 24 * n;
    const oracle::SignMinResult result = oracle::exhaustive_sign_min(n, d, N);
    Record rec;
    add_common(rec, cfg, "sign-min");
    rec.add_int("n", n);
    rec.add_int("d", d);
    rec.add_int("net_N", N);
    rec.add_double("value", result.value);
    rec.add_string("sign", sign_to_string(result.sign));
    maybe_add_timing(rec, cfg, timer);
    records.push_back(std::move(rec));
  }
  return finish(cfg, std::move(records), true);
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["command"] = cfg.command;
  j["kind"] = cfg.kind;
  j["p"] = fmt_extended(cfg.p);
  j["field"] = field_name(cfg.field);
  j["d_lo"] = cfg.d_lo;
  j["d_hi"] = cfg.d_hi;
  j["d_step"] = cfg.d_step;
  j["d_geometric"] = cfg.d_geometric;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["trunc_m"] = fmt_extended(cfg.trunc_m);
  j["trials"] = cfg.trials;
  j["n"] = cfg.n;
  j["net_n"] = cfg.net_n;
  j["resolution"] = cfg.resolution;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const Vec& row : cfg.rows) rows.push_back(fmt_vector(row));
  j["rows"] = rows;
  j["format"] = format_name(cfg.format);
  j["timing"] = cfg.timing;
  return j.dump();
}

ExperimentConfig config_from_json(const std::string& text) {
  const auto j = nlohmann::ordered_json::parse(text);
  ExperimentConfig cfg;
  cfg.command = j.at("command").get<std::string>();
  cfg.kind = j.at("kind").get<std::string>();
  cfg.p = parse_extended_real(j.at("p").get<std::string>());
  cfg.field = parse_field(j.at("field").get<std::string>());
  cfg.d_lo = j.at("d_lo").get<int>();
  cfg.d_hi = j.at("d_hi").get<int>();
  cfg.d_step = j.at("d_step").get<int>();
  cfg.d_geometric = j.at("d_geometric").get<bool>();
  cfg.samples = j.at("samples").get<std::int64_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.trunc_m = parse_extended_real(j.at("trunc_m").get<std::string>());
  cfg.trials = j.at("trials").get<std::int64_t>();
  cfg.n = j.at("n").get<int>();
  cfg.net_n = j.at("net_n").get<int>();
  cfg.resolution = j.at("resolution").get<std::int64_t>();
  for (const auto& row : j.at("rows")) cfg.rows.push_back(parse_vector(row.get<std::string>()));
  cfg.format = parse_format(j.at("format").get<std::string>());
  cfg.timing = j.at("timing").get<bool>();
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.command != "hilbert" && cfg.command != "bounds" && cfg.command != "integrals" &&
      cfg.command != "rademacher" && cfg.command != "oracle") {
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
  }
  if (std::isnan(cfg.p) || cfg.p < 1.0) throw std::invalid_argument("p must lie in [1, inf]");
  if (cfg.d_lo < 1) throw std::invalid_argument("d must be >= 1");
  if (cfg.d_hi < cfg.d_lo) throw std::invalid_argument("empty dimension range");
  if (cfg.d_step < 1) throw std::invalid_argument("d-step must be >= 1");
  if (cfg.samples < 2) throw std::invalid_argument("samples must be >= 2");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.n < 1) throw std::invalid_argument("n must be >= 1");
  if (cfg.resolution < 8) throw std::invalid_argument("resolution must be >= 8");
  if (std::isnan(cfg.trunc_m)) throw std::invalid_argument("trunc-m must be a number or inf");
  if (cfg.command == "hilbert" || cfg.command == "bounds") {
    if (cfg.d_lo < 2) throw std::invalid_argument("this command needs d >= 2");
  }
  if (cfg.command == "integrals") {
    if (cfg.kind != "log-pairing" && cfg.kind != "pnorm-moment" && cfg.kind != "infnorm-moment" &&
        cfg.kind != "log-inv-pnorm") {
      throw std::invalid_argument("unknown integrals kind '" + cfg.kind + "'");
    }
    if (cfg.kind == "pnorm-moment" && std::isinf(cfg.p)) {
      throw std::invalid_argument("pnorm-moment needs p < inf (use infnorm-moment)");
    }
  }
  if (cfg.command == "oracle") {
    if (cfg.kind != "quadrature-L" && cfg.kind != "grid-norm" && cfg.kind != "sign-min") {
      throw std::invalid_argument("unknown oracle kind '" + cfg.kind + "'");
    }
    if (cfg.kind == "quadrature-L" && cfg.d_lo < 2) {
      throw std::invalid_argument("quadrature-L needs d >= 2");
    }
    if (cfg.kind == "grid-norm") {
      if (cfg.rows.empty()) throw std::invalid_argument("grid-norm needs at least one --row");
      const std::size_t d = cfg.rows.front().size();
      if (d == 0) throw std::invalid_argument("grid-norm rows must be non-empty");
      for (const Vec& row : cfg.rows) {
        if (row.size() != d) throw std::invalid_argument("grid-norm rows must share a dimension");
      }
    }
  }
  if (cfg.command == "bounds" && cfg.samples < 10'000) {
    throw std::invalid_argument("bounds needs samples >= 10^4 for the upper bound");
  }
}

std::vector<int> dimension_sweep(const ExperimentConfig& cfg) {
  std::vector<int> ds;
  if (cfg.d_geometric) {
    for (long long d = cfg.d_lo; d <= cfg.d_hi; d *= 2) ds.push_back(static_cast<int>(d));
  } else {
    for (long long d = cfg.d_lo; d <= cfg.d_hi; d += cfg.d_step) ds.push_back(static_cast<int>(d));
  }
  return ds;
}

CommandOutput run_command(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.command == "hilbert") return cmd_hilbert(cfg);
  if (cfg.command == "bounds") return cmd_bounds(cfg);
  if (cfg.command == "integrals") return cmd_integrals(cfg);
  if (cfg.command == "rademacher") return cmd_rademacher(cfg);
  return cmd_oracle(cfg);
}

}  // namespace polar::cli
