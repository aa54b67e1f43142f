#pragma once

#include <cmath>

#include "fracinv/error.hpp"
#include "fracinv/grid.hpp"
#include "fracinv/types.hpp"

namespace fracinv {

/// Conservative discretisation of -(p X')' + q X on the interior nodes.
/// `diagonal` has M entries, `off_diagonal` M-1; the flux-form samples are kept
/// so quadratic forms can be evaluated without cancellation.
struct TridiagonalSystem {
  SpaceGrid<> grid;
  Vector p_half;  // p(x_{i+1/2}), i = 0..M
  Vector q;       // q(x_i), i = 0..M+1
  Vector diagonal;
  Vector off_diagonal;

  Matrix dense() const;
};

/// Throws HypothesisError naming the first node where p <= 0 or q < 0.
TridiagonalSystem assemble_operator(const ConstVectorRef& p_half, const ConstVectorRef& q,
                                    const SpaceGrid<>& grid);

struct SpectralBasis {
  SpaceGrid<> grid;
  Vector eigenvalues;  // increasing
  Matrix modes;        // (M+2) x N, zero first and last rows
  double orthonormality_defect = 0.0;  // max |<X_m, X_n> - delta_mn|

  Index size() const { return eigenvalues.size(); }
};

/// The N smallest eigenpairs by Sturm-count bisection, inverse iteration and a
/// flux-form Rayleigh quotient. Modes are orthonormal in the trapezoid inner
/// product and the first nonzero interior sample of each is positive.
SpectralBasis solve_eigs(const TridiagonalSystem& system, Index count);

/// Composite trapezoid weights on the grid nodes.
Vector trapezoid_weights(const SpaceGrid<>& grid);

/// Trapezoid inner products <f, X_n>, n = 1..N.
template <typename Derived>
Vector project(const Eigen::MatrixBase<Derived>& samples, const SpectralBasis& basis) {
  if (samples.size() != basis.grid.size()) {
    throw ConfigError("project: expected " + std::to_string(basis.grid.size()) + " samples, got " +
                      std::to_string(samples.size()));
  }
  const Vector weighted = trapezoid_weights(basis.grid).cwiseProduct(samples.derived());
  return basis.modes.transpose() * weighted;
}

/// int_0^l p Y'^2 + q Y^2 dx with Y' differenced at half-nodes. Samples must
/// vanish at both ends to 1e-12 (HypothesisError otherwise).
double energy_form(const ConstVectorRef& samples, const ConstVectorRef& p_half, const ConstVectorRef& q,
                   const SpaceGrid<>& grid);

inline double energy_form(const ConstVectorRef& samples, const TridiagonalSystem& system) {
  return energy_form(samples, system.p_half, system.q, system.grid);
}

/// Solves (A + shift I) y = rhs on the interior nodes; rhs and result hold all
/// M+2 nodes with zero boundary values.
Vector solve_operator(const TridiagonalSystem& system, const ConstVectorRef& rhs, double shift = 0.0);

/// Projections of the data on the basis with the derived sums.
struct ModeCoefficients {
  Vector phi;      // phi_n
  Vector h;        // h_n
  double H = 0.0;  // sum h_n^2
  double W = 0.0;  // sum lambda_n h_n^2

  Index size() const { return h.size(); }
};

ModeCoefficients mode_coefficients(const SpectralBasis& basis, const ConstVectorRef& phi_samples,
                                   const ConstVectorRef& h_samples);

/// Smallest N such that lambda_n (phi_n^2 + h_n^2) <= threshold for every n >= N
/// among the computed modes; the computed count when no such N exists.
Index select_mode_count(const SpectralBasis& basis, const ModeCoefficients& coeffs, double threshold = 1e-12);

/// Leading `count` modes of a basis / coefficient set.
SpectralBasis truncate(const SpectralBasis& basis, Index count);
ModeCoefficients truncate(const ModeCoefficients& coeffs, const SpectralBasis& basis, Index count);

}  // namespace fracinv
