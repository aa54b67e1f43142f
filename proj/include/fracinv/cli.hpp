#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "fracinv/types.hpp"

namespace fracinv {

/// One CLI invocation. Flags override values from the config file.
struct RunConfig {
  std::string subcommand;  // eig | ml | direct | synth | invert | verify
  std::filesystem::path config;
  std::filesystem::path out_dir = ".";

  std::optional<Index> M;
  std::optional<Index> K;
  std::optional<Index> N;
  std::optional<double> tol;  // inverse.picard_tol
  std::optional<double> eps;
  std::optional<std::uint64_t> seed;
  bool warn_only = false;

  bool eig_modes = false;  // also write eigenfunctions.csv

  // ml
  std::optional<double> ml_alpha;
  double ml_beta = 1.0;
  std::optional<double> z;
  std::optional<double> z_min;
  std::optional<double> z_max;
  Index points = 101;
};

/// Runs one subcommand, writing CSV files and manifest.json to out_dir.
/// Returns 0 on success or the error category code (2 config, 3 numerical,
/// 4 hypothesis); the error is reported on `err` as "error[category]: message".
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and calls run. Usage problems print the usage text and return 2.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracinv
