#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "fracinv/problem.hpp"

namespace fracinv {

/// Reads a JSON problem file.
///
///   alpha, l, T                          numbers (required)
///   p, q, phi, h                         functions of x (required)
///   f | g                                functions of t (exactly one)
///   g_derivative, g_second_derivative    functions of t (optional)
///   grid      {M, K, N}                N may be "auto" or null
///   noise     {eps, seed, generator}   generator must be "mt19937_64"
///   inverse   {caputo, prefilter_window, compat_tol, picard_max_iter, picard_tol}
///   hypotheses "error" | "warn"
///
/// A function is an expression string, a number, or {"table": "file.csv"}
/// with the path relative to the config file; optional functions may be null.
/// Structure is validated; hypotheses are not.
ProblemSpec load_config(const std::filesystem::path& path);

/// As load_config, from JSON text; table paths resolve against `base_dir`.
ProblemSpec parse_config(std::string_view text, const std::filesystem::path& base_dir = ".");

/// Every field of a spec, defaults included, in the config layout; parses
/// back with parse_config.
nlohmann::json spec_to_json(const ProblemSpec& spec);

}  // namespace fracinv
