#pragma once

#include <string>

#include "jobmarket/config.hpp"

namespace jobmarket::cli {

inline constexpr int kValidationFailure = 1;
inline constexpr int kUsageError = 2;

struct Invocation {
  std::string command;
  RunOptions options;
  std::string run_id;
};

struct SweepArgs {
  std::string grid;  // comma-separated rho values; empty means the default grid
  bool compare = false;
};

struct CoverageArgs {
  int trials = 500;
  int pool = 30;
  int k = 5;
  int instances = 1000;
};

struct TheoremArgs {
  int probe_simulations = 4000;
  int informativeness_simulations = 2000;
};

struct GenDataArgs {
  bool history = false;
};

int run_simulate(const Invocation& inv);
int run_sweep(const Invocation& inv, const SweepArgs& args);
int run_validate_coverage(const Invocation& inv, const CoverageArgs& args);
int run_validate_theorems(const Invocation& inv, const TheoremArgs& args);
int run_gen_data(const Invocation& inv, const GenDataArgs& args);

}  // namespace jobmarket::cli
