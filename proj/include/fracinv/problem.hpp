#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fracinv/expr.hpp"
#include "fracinv/grid.hpp"
#include "fracinv/sturm_liouville.hpp"
#include "fracinv/types.hpp"

namespace fracinv {

enum class CaputoMethod { kProductIntegral, kL1, kByParts };

std::string_view to_string(CaputoMethod method);
CaputoMethod caputo_method_from_string(std::string_view name);

/// What to do when a well-posedness hypothesis fails.
enum class HypothesisPolicy { kError, kWarn };

struct GridParams {
  Index M = 200;
  Index K = 1000;
  std::optional<Index> N;  // automatic when unset
};

struct NoiseParams {
  double eps = 0.0;
  std::uint64_t seed = 0;
};

struct InverseParams {
  CaputoMethod caputo = CaputoMethod::kProductIntegral;
  Index prefilter_window = 1;
  double compat_tol = 1e-6;
  int picard_max_iter = 500;
  double picard_tol = 1e-12;
};

/// One problem instance: coefficients and data on [0, l] x [0, T].
struct ProblemSpec {
  double alpha = 0.5;
  double l = 1.0;
  double T = 1.0;
  ScalarFunction p;
  ScalarFunction q;
  ScalarFunction phi;
  ScalarFunction h;
  ScalarFunction f;  // direct mode
  ScalarFunction g;  // inverse mode
  ScalarFunction g_derivative;
  ScalarFunction g_second_derivative;
  GridParams grid;
  NoiseParams noise;
  InverseParams inverse;
  HypothesisPolicy hypotheses = HypothesisPolicy::kError;

  bool has_f() const { return !f.empty(); }
  bool has_g() const { return !g.empty(); }
};

enum class Mode { kDirect, kInverse, kAny };

/// Structural checks (ranges, grid sizes, presence of functions); throws ConfigError.
void validate_structure(const ProblemSpec& spec, Mode mode);

/// One well-posedness check with its measured value.
struct HypothesisCheck {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = true;
  std::string detail;
};

/// Coefficient condition (p > 0, q >= 0 on the grid) and vanishing of phi, h at both ends.
std::vector<HypothesisCheck> check_hypotheses(const ProblemSpec& spec);

/// Throws HypothesisError on the first failed check under kError; under kWarn
/// writes one line per failure to `warnings` (when non-null).
void enforce_hypotheses(const std::vector<HypothesisCheck>& checks, HypothesisPolicy policy,
                        std::ostream* warnings);

/// Grid samples of the coefficient and data functions.
struct Discretization {
  SpaceGrid<> space;
  TimeGrid<> time;
  Vector p_half;  // M+1 half-node samples
  Vector q;       // M+2 node samples
  Vector phi;
  Vector h;
};

Discretization discretize(const ProblemSpec& spec);

/// Operator, eigenbasis and projections for a spec; the mode count is the
/// configured N, or chosen from at most min(64, M) modes by the tail rule.
struct SpectralModel {
  Discretization disc;
  TridiagonalSystem system;
  SpectralBasis basis;
  ModeCoefficients coeffs;
  Index computed_modes = 0;
};

SpectralModel build_spectral_model(const ProblemSpec& spec);

inline constexpr Index kMaxAutoModes = 64;
inline constexpr double kModeTailThreshold = 1e-12;

}  // namespace fracinv
