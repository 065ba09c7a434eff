#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polar/commands.hpp"
#include "polar/errors.hpp"
#include "polar/version.hpp"

namespace {

using polar::cli::ExperimentConfig;

struct RangeFlags {
  int d_single = 0;
  std::string d_range;
  int d_step = 1;
  bool d_geometric = false;
};

void parse_range_into(const RangeFlags& rf, ExperimentConfig& cfg) {
  if (!rf.d_range.empty()) {
    const std::size_t sep = rf.d_range.find("..");
    if (sep == std::string::npos) {
      throw std::invalid_argument("--d-range must look like A..B");
    }
    cfg.d_lo = std::stoi(rf.d_range.substr(0, sep));
    cfg.d_hi = std::stoi(rf.d_range.substr(sep + 2));
  } else if (rf.d_single > 0) {
    cfg.d_lo = cfg.d_hi = rf.d_single;
  }
  cfg.d_step = rf.d_step;
  cfg.d_geometric = rf.d_geometric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polarlab - polarization constants of finite-dimensional l_p spaces"};
  app.set_version_flag("--version", std::string("polarlab ") + polar::kVersion);
  app.require_subcommand(1);

  ExperimentConfig cfg;
  RangeFlags range;
  std::string p_text = "2";
  std::string m_text = "inf";
  std::string field_text = "complex";
  std::string format_text = "csv";
  std::string out_path;
  std::vector<std::string> row_texts;

  auto add_output_flags = [&](CLI::App* sub) {
    sub->add_option("--format", format_text, "csv|json-lines")->capture_default_str();
    sub->add_option("--out", out_path, "write results to PATH instead of stdout");
    sub->add_flag("--timing", cfg.timing, "include elapsed_ms in every record");
  };
  auto add_range_flags = [&](CLI::App* sub) {
    sub->add_option("--d", range.d_single, "single dimension");
    sub->add_option("--d-range", range.d_range, "inclusive dimension range A..B");
    sub->add_option("--d-step", range.d_step, "additive sweep step")->capture_default_str();
    sub->add_flag("--d-geometric", range.d_geometric, "sweep dimensions by doubling");
  };
  auto add_field_flag = [&](CLI::App* sub) {
    sub->add_option("--field", field_text, "real|complex")->capture_default_str();
  };

  CLI::App* hilbert = app.add_subcommand("hilbert", "closed-form Hilbert constants per dimension");
  add_range_flags(hilbert);
  add_field_flag(hilbert);
  add_output_flags(hilbert);

  CLI::App* bounds = app.add_subcommand("bounds", "lower/upper polarization bounds per dimension");
  bounds->add_option("--p", p_text, "exponent in [1, inf]")->capture_default_str();
  add_range_flags(bounds);
  add_field_flag(bounds);
  bounds->add_option("--samples", cfg.samples, "Monte Carlo samples per estimate");
  bounds->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  add_output_flags(bounds);

  CLI::App* integrals = app.add_subcommand("integrals", "Monte Carlo sphere integrals");
  integrals
      ->add_option("--kind", cfg.kind,
                   "log-pairing|pnorm-moment|infnorm-moment|log-inv-pnorm")
      ->required();
  integrals->add_option("--p", p_text, "exponent in [1, inf]")->capture_default_str();
  add_range_flags(integrals);
  add_field_flag(integrals);
  integrals->add_option("--samples", cfg.samples, "Monte Carlo samples per estimate");
  integrals->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  integrals->add_option("--trunc-m", m_text, "log-kernel floor; 'inf' for untruncated");
  add_output_flags(integrals);

  CLI::App* rademacher =
      app.add_subcommand("rademacher", "random sign-matrix search with certified sup-norms");
  rademacher->add_option("--n", cfg.n, "number of functionals")->required();
  rademacher->add_option("--d", range.d_single, "dimension")->required();
  rademacher->add_option("--trials", cfg.trials, "sign matrices to try")->capture_default_str();
  rademacher->add_option("--net-N", cfg.net_n, "torus net size per coordinate (default 24n)");
  rademacher->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  add_output_flags(rademacher);

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force ground-truth computations");
  oracle->require_subcommand(1);
  CLI::App* quad = oracle->add_subcommand("quadrature-L", "L(d, K) by direct quadrature");
  add_range_flags(quad);
  add_field_flag(quad);
  add_output_flags(quad);
  CLI::App* grid = oracle->add_subcommand("grid-norm", "dense-grid sup-norm of a product");
  grid->add_option("--row", row_texts, "coefficient row, e.g. \"1,0\" or \"1+2i,3\"")
      ->required()
      ->take_all();
  grid->add_option("--p", p_text, "exponent in [1, inf]")->capture_default_str();
  add_field_flag(grid);
  grid->add_option("--resolution", cfg.resolution, "grid points per angular dimension")
      ->capture_default_str();
  add_output_flags(grid);
  CLI::App* signmin = oracle->add_subcommand("sign-min", "exhaustive minimal sign-matrix norm");
  signmin->add_option("--n", cfg.n, "number of functionals")->required();
  signmin->add_option("--d", range.d_single, "dimension")->required();
  signmin->add_option("--net-N", cfg.net_n, "torus net size per coordinate (default 24n)");
  add_output_flags(signmin);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.p = polar::cli::parse_extended_real(p_text);
    cfg.trunc_m = polar::cli::parse_extended_real(m_text);
    cfg.field = polar::parse_field(field_text);
    cfg.format = polar::cli::parse_format(format_text);
    parse_range_into(range, cfg);

    if (hilbert->parsed()) cfg.command = "hilbert";
    if (bounds->parsed()) cfg.command = "bounds";
    if (integrals->parsed()) cfg.command = "integrals";
    if (rademacher->parsed()) cfg.command = "rademacher";
    if (oracle->parsed()) {
      cfg.command = "oracle";
      if (quad->parsed()) cfg.kind = "quadrature-L";
      if (grid->parsed()) {
        cfg.kind = "grid-norm";
        for (const std::string& text : row_texts) {
          polar::Vec row;
          std::size_t start = 0;
          while (start <= text.size()) {
            const std::size_t comma = text.find(',', start);
            const std::string piece = text.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!piece.empty()) row.push_back(polar::cli::parse_complex(piece));
            if (comma == std::string::npos) break;
            start = comma + 1;
          }
          cfg.rows.push_back(std::move(row));
        }
      }
      if (signmin->parsed()) cfg.kind = "sign-min";
    }

    const polar::cli::CommandOutput result = polar::cli::run_command(cfg);
    if (out_path.empty()) {
      std::cout << result.text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot open output file " + out_path);
      out << result.text;
    }
    return result.exit_code;
  } catch (const polar::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const polar::ConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
