#pragma once

#include <string>
#include <vector>

#include "polar/records.hpp"
#include "polar/spaces.hpp"

namespace polar::cli {

// Flat description of one CLI invocation. Round-trips through JSON; a
// re-run of the echoed config reproduces every scalar result byte for byte.
struct ExperimentConfig {
  std::string command;  // hilbert | bounds | integrals | rademacher | oracle
  std::string kind;     // integrals: log-pairing|pnorm-moment|infnorm-moment|log-inv-pnorm
                        // oracle:    quadrature-L|grid-norm|sign-min
  double p = 2.0;
  Field field = Field::Complex;
  int d_lo = 2;
  int d_hi = 2;
  int d_step = 1;
  bool d_geometric = false;  // sweep by doubling instead of stepping
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  double trunc_m = kInf;
  std::int64_t trials = 64;
  int n = 2;
  int net_n = -1;  // -1: default 24n
  std::int64_t resolution = 4096;
  std::vector<Vec> rows;  // oracle grid-norm input
  Format format = Format::Csv;
  bool timing = false;

  bool operator==(const ExperimentConfig&) const = default;
};

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

// Throws std::invalid_argument on any bad parameter (usage errors).
void validate(const ExperimentConfig& cfg);

std::vector<int> dimension_sweep(const ExperimentConfig& cfg);

struct CommandOutput {
  std::string text;
  int exit_code = 0;  // 0 ok, 4 when some numeric routine failed to converge
};

// Runs one command and renders its records. All randomness is keyed off
// cfg.seed; POLARLAB_THREADS never changes the text.
CommandOutput run_command(const ExperimentConfig& cfg);

}  // namespace polar::cli
