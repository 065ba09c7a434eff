#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "polar/commands.hpp"
#include "polar/hilbert_exact.hpp"

using namespace polar;
using namespace polar::cli;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

// minimal CSV split; fields produced by the renderer never nest newlines
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double csv_value(const std::string& text, int row, const std::string& column) {
  const std::vector<std::string> lines = split_lines(text);
  const std::vector<std::string> header = split_csv(lines.at(0));
  const std::vector<std::string> cells = split_csv(lines.at(static_cast<std::size_t>(row) + 1));
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == column) return std::stod(cells.at(i));
  }
  FAIL("column not found: ", column);
  return 0.0;
}

}  // namespace

TEST_CASE("config round-trips through JSON") {
  ExperimentConfig cfg;
  cfg.command = "integrals";
  cfg.kind = "log-inv-pnorm";
  cfg.p = 1.5;
  cfg.field = Field::Real;
  cfg.d_lo = 8;
  cfg.d_hi = 64;
  cfg.d_geometric = true;
  cfg.samples = 12'345;
  cfg.seed = 987654321;
  cfg.trunc_m = kInf;
  cfg.rows = {{cplx{1.0, -2.5}, cplx{0.0, 1.0}}, {cplx{0.125, 0.0}, cplx{3.0, 0.0}}};
  cfg.format = Format::JsonLines;
  const ExperimentConfig back = config_from_json(config_to_json(cfg));
  CHECK(back == cfg);
}

TEST_CASE("complex literal round trip") {
  for (const cplx c : {cplx{1, 0}, cplx{0, 1}, cplx{-2.5, 3.75}, cplx{1e-3, -1e3}}) {
    CHECK(parse_complex(fmt_complex(c)) == c);
  }
  CHECK(parse_complex("2i") == cplx{0, 2});
  CHECK(parse_complex("-i") == cplx{0, -1});
  CHECK(parse_complex("1.5") == cplx{1.5, 0});
  CHECK_THROWS_AS(parse_complex("garbage"), std::invalid_argument);
}

TEST_CASE("hilbert command: complex harmonic ladder") {
  ExperimentConfig cfg;
  cfg.command = "hilbert";
  cfg.d_lo = 2;
  cfg.d_hi = 4;
  const CommandOutput out = run_command(cfg);
  CHECK(out.exit_code == 0);
  CHECK(split_lines(out.text).size() == 4);  // header + 3 rows
  CHECK(csv_value(out.text, 0, "c") == doctest::Approx(std::exp(0.5)).epsilon(1e-15));
  CHECK(csv_value(out.text, 1, "c") == doctest::Approx(std::exp(0.75)).epsilon(1e-15));
  CHECK(csv_value(out.text, 2, "c") == doctest::Approx(std::exp(11.0 / 12.0)).epsilon(1e-15));
  for (int row = 0; row < 3; ++row) {
    CHECK(std::abs(csv_value(out.text, row, "quad_residual")) < 1e-8);
  }
}

TEST_CASE("hilbert command: d=2 real gives c=2") {
  ExperimentConfig cfg;
  cfg.command = "hilbert";
  cfg.field = Field::Real;
  const CommandOutput out = run_command(cfg);
  CHECK(csv_value(out.text, 0, "c") == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("usage errors") {
  ExperimentConfig cfg;
  cfg.command = "hilbert";
  cfg.d_lo = 5;
  cfg.d_hi = 2;  // empty range
  CHECK_THROWS_AS(run_command(cfg), std::invalid_argument);

  cfg.d_hi = 5;
  cfg.command = "nonsense";
  CHECK_THROWS_AS(run_command(cfg), std::invalid_argument);

  ExperimentConfig bad_kind;
  bad_kind.command = "integrals";
  bad_kind.kind = "unknown";
  CHECK_THROWS_AS(run_command(bad_kind), std::invalid_argument);
}

TEST_CASE("integrals command emits a slope footer over sweeps") {
  ExperimentConfig cfg;
  cfg.command = "integrals";
  cfg.kind = "pnorm-moment";
  cfg.p = 2.0;
  cfg.field = Field::Real;
  cfg.d_lo = 4;
  cfg.d_hi = 16;
  cfg.d_geometric = true;
  cfg.samples = 5'000;
  const CommandOutput out = run_command(cfg);
  const auto lines = split_lines(out.text);
  CHECK(lines.size() == 5);  // header + 3 data + slope
  // p=2 moment is identically 1, so the fitted slope vanishes
  CHECK(std::abs(csv_value(out.text, 3, "slope")) < 1e-10);
}

TEST_CASE("CSV and JSON lines carry identical values") {
  ExperimentConfig cfg;
  cfg.command = "bounds";
  cfg.p = 1.5;
  cfg.field = Field::Real;
  cfg.d_lo = 2;
  cfg.d_hi = 3;
  cfg.samples = 15'000;
  cfg.seed = 7;
  const CommandOutput csv = run_command(cfg);
  cfg.format = Format::JsonLines;
  const CommandOutput jsonl = run_command(cfg);

  const auto jlines = split_lines(jsonl.text);
  for (int row = 0; row < 2; ++row) {
    const std::string& jline = jlines.at(static_cast<std::size_t>(row));
    for (const char* column : {"lower", "lower_se", "upper", "upper_se", "step2_lower"}) {
      const std::string key = std::string("\"") + column + "\":";
      const std::size_t pos = jline.find(key);
      REQUIRE(pos != std::string::npos);
      const double json_value = std::stod(jline.substr(pos + key.size()));
      CHECK(csv_value(csv.text, row, column) == json_value);
    }
  }
}

TEST_CASE("rademacher command") {
  ExperimentConfig cfg;
  cfg.command = "rademacher";
  cfg.n = 2;
  cfg.d_lo = cfg.d_hi = 2;
  cfg.trials = 16;
  const CommandOutput out = run_command(cfg);
  CHECK(out.exit_code == 0);
  CHECK(csv_value(out.text, 0, "sup_value") == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(csv_value(out.text, 0, "second_moment") == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(csv_value(out.text, 0, "second_moment_expected") == 4.0);
  CHECK(csv_value(out.text, 0, "threshold_2R") == doctest::Approx(192.0).epsilon(1e-12));

  // n=1, d=8: exhaustive second moment equals 8
  ExperimentConfig one;
  one.command = "rademacher";
  one.n = 1;
  one.d_lo = one.d_hi = 8;
  one.trials = 4;
  const CommandOutput out1 = run_command(one);
  CHECK(csv_value(out1.text, 0, "second_moment") == 8.0);

  // n=3, d=3, N=72: rigorous certificate within the factor-2 envelope
  ExperimentConfig three;
  three.command = "rademacher";
  three.n = 3;
  three.d_lo = three.d_hi = 3;
  three.trials = 8;
  three.net_n = 72;
  const CommandOutput out3 = run_command(three);
  const double value = csv_value(out3.text, 0, "sup_value");
  const double cert = csv_value(out3.text, 0, "sup_certificate");
  CHECK(cert / value <= 2.0);
}

TEST_CASE("oracle commands") {
  ExperimentConfig quad;
  quad.command = "oracle";
  quad.kind = "quadrature-L";
  quad.field = Field::Real;
  quad.d_lo = quad.d_hi = 3;
  CHECK(csv_value(run_command(quad).text, 0, "value") == doctest::Approx(-1.0).epsilon(1e-10));

  ExperimentConfig grid;
  grid.command = "oracle";
  grid.kind = "grid-norm";
  grid.field = Field::Real;
  grid.p = 2.0;
  grid.rows = {{cplx{1, 0}, cplx{2, 0}}};
  grid.resolution = 100'000;
  CHECK(csv_value(run_command(grid).text, 0, "value") ==
        doctest::Approx(std::sqrt(5.0)).epsilon(1e-6));

  ExperimentConfig sm;
  sm.command = "oracle";
  sm.kind = "sign-min";
  sm.n = 2;
  sm.d_lo = sm.d_hi = 2;
  CHECK(csv_value(run_command(sm).text, 0, "value") == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("output is byte-identical across thread caps") {
  auto run_with_threads = [](const ExperimentConfig& cfg, const char* threads) {
    setenv("POLARLAB_THREADS", threads, 1);
    const CommandOutput out = run_command(cfg);
    unsetenv("POLARLAB_THREADS");
    return out.text;
  };

  std::vector<ExperimentConfig> configs;
  {
    ExperimentConfig cfg;
    cfg.command = "hilbert";
    cfg.d_lo = 2;
    cfg.d_hi = 6;
    cfg.field = Field::Real;
    configs.push_back(cfg);
  }
  {
    ExperimentConfig cfg;
    cfg.command = "integrals";
    cfg.kind = "log-pairing";
    cfg.p = 2.0;
    cfg.d_lo = 2;
    cfg.d_hi = 8;
    cfg.d_geometric = true;
    cfg.samples = 30'000;
    cfg.seed = 41;
    configs.push_back(cfg);
  }
  {
    ExperimentConfig cfg;
    cfg.command = "bounds";
    cfg.p = 2.0;
    cfg.d_lo = 2;
    cfg.d_hi = 3;
    cfg.samples = 20'000;
    cfg.seed = 42;
    cfg.field = Field::Real;
    configs.push_back(cfg);
  }
  {
    ExperimentConfig cfg;
    cfg.command = "rademacher";
    cfg.n = 2;
    cfg.d_lo = cfg.d_hi = 2;
    cfg.trials = 16;
    cfg.seed = 43;
    configs.push_back(cfg);
  }
  {
    ExperimentConfig cfg;
    cfg.command = "oracle";
    cfg.kind = "sign-min";
    cfg.n = 2;
    cfg.d_lo = cfg.d_hi = 2;
    configs.push_back(cfg);
  }

  for (const ExperimentConfig& cfg : configs) {
    const std::string a = run_with_threads(cfg, "1");
    const std::string b = run_with_threads(cfg, "4");
    CHECK(a == b);
  }
}

TEST_CASE("jsonl records expose the expected schema keys") {
  ExperimentConfig cfg;
  cfg.command = "hilbert";
  cfg.format = Format::JsonLines;
  const CommandOutput out = run_command(cfg);
  const std::string line = split_lines(out.text).at(0);
  for (const char* key : {"\"schema_version\"", "\"version\"", "\"command\"", "\"row\"",
                          "\"field\"", "\"d\"", "\"L\"", "\"L_alt\"", "\"c\"", "\"gamma_bound\"",
                          "\"quad_residual\""}) {
    CHECK(line.find(key) != std::string::npos);
  }
}
