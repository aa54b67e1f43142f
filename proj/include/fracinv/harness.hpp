#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracinv/frac_calc.hpp"
#include "fracinv/problem.hpp"
#include "fracinv/types.hpp"

namespace fracinv {

/// Noise multipliers xi_0..xi_{count-1}, i.i.d. uniform on [-1, 1].
/// Generator: std::mt19937_64 seeded with `seed`; each xi uses one 64-bit draw r
/// as 2 (r >> 11) 2^-53 - 1, consumed in node order k = 0..K.
Vector noise_sequence(Index count, std::uint64_t seed);

struct SynthDataset {
  ProblemSpec spec;
  TimeGrid<> time{1.0, 1};
  Vector g_exact;
  Vector g_noisy;  // g_exact (1 + eps xi)
  Vector f_true;
  double eps = 0.0;
  std::uint64_t seed = 0;
};

/// g = observe(solve_direct(spec)) with multiplicative noise.
SynthDataset synthesize(const ProblemSpec& spec, double eps, std::uint64_t seed);

/// Fully discrete reference solution: L1 in time, conservative second-order
/// differences in space, implicit elliptic part. Rows are time nodes, columns
/// space nodes. Shares no code with the spectral path.
Matrix oracle_l1_fd(const ProblemSpec& spec, Index M, Index K);

struct ErrorReport {
  double linf_abs = 0.0;
  double linf_rel = 0.0;  // linf_abs / max(||truth||_inf, 1e-12)
  double l2_rel = 0.0;    // ||e||_2 / max(||truth||_2, 1e-12)
  double max_pointwise_rel = 0.0;  // max |e_i| / max(|truth_i|, 1e-12)
  Vector errors;                   // estimate - truth
};

ErrorReport compare(const ConstVectorRef& truth, const ConstVectorRef& estimate);
ErrorReport compare(const TimeSeries& truth, const TimeSeries& estimate);

/// Discrete check of d^alpha [int_0^t eta(s)(t-s)^{alpha-1}E_{alpha,alpha}(-lambda(t-s)^alpha) ds]
/// = eta(t) - lambda (same convolution), with exact panel weights for the
/// convolution and the L1 scheme outside.
struct ConvolutionDefect {
  double from_t0 = 0.0;  // max over t >= 0.01 T
  double all = 0.0;      // max over every t_k > 0
};

ConvolutionDefect convolution_identity_defect(double alpha, double lambda, double T, Index K, const ScalarFunction& eta);

struct InvariantRow {
  std::string check;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = true;
};

/// Runs the invariant checklist on a spec; failures are rows, not exceptions.
std::vector<InvariantRow> verify_invariants(const ProblemSpec& spec);

}  // namespace fracinv
