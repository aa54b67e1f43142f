#include "fracinv/sturm_liouville.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <vector>

namespace fracinv {
namespace {

std::string describe(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

// Solves the tridiagonal system with sub/super diagonal `off` and diagonal `diag`
// by Gaussian elimination with partial pivoting. Exactly zero pivots are
// replaced by `tiny`, which is what inverse iteration needs.
Vector pivoted_tridiagonal_solve(Vector d, const Vector& off, Vector b, double tiny) {
  const Index n = d.size();
  if (n == 1) return b / (d(0) == 0.0 ? tiny : d(0));
  Vector dl = off;
  Vector du = off;
  Vector du2 = Vector::Zero(n);
  for (Index i = 0; i + 1 < n; ++i) {
    if (std::abs(d(i)) >= std::abs(dl(i))) {
      if (d(i) == 0.0) d(i) = tiny;
      const double fact = dl(i) / d(i);
      d(i + 1) -= fact * du(i);
      b(i + 1) -= fact * b(i);
    } else {
      const double fact = d(i) / dl(i);
      d(i) = dl(i);
      const double temp = d(i + 1);
      d(i + 1) = du(i) - fact * temp;
      if (i + 2 < n) {
        du2(i) = du(i + 1);
        du(i + 1) = -fact * du2(i);
      }
      du(i) = temp;
      const double bt = b(i);
      b(i) = b(i + 1);
      b(i + 1) = bt - fact * b(i + 1);
    }
  }
  if (d(n - 1) == 0.0) d(n - 1) = tiny;
  b(n - 1) /= d(n - 1);
  b(n - 2) = (b(n - 2) - du(n - 2) * b(n - 1)) / d(n - 2);
  for (Index i = n - 3; i >= 0; --i) b(i) = (b(i) - du(i) * b(i + 1) - du2(i) * b(i + 2)) / d(i);
  return b;
}

// Number of eigenvalues strictly below sigma.
Index sturm_count(const Vector& diag, const Vector& off, double sigma, double tiny) {
  Index count = 0;
  double d = diag(0) - sigma;
  for (Index i = 0;; ++i) {
    if (d == 0.0) d = -tiny;
    if (d < 0.0) ++count;
    if (i + 1 == diag.size()) break;
    d = diag(i + 1) - sigma - off(i) * off(i) / d;
  }
  return count;
}

// v holds all M+2 node values.
double flux_rayleigh(const TridiagonalSystem& s, const Vector& v) {
  const double dx = s.grid.spacing();
  double num = 0.0;
  double den = 0.0;
  for (Index i = 0; i + 1 < v.size(); ++i) {
    const double jump = v(i + 1) - v(i);
    num += s.p_half(i) * jump * jump;
  }
  num /= dx * dx;
  for (Index i = 1; i + 1 < v.size(); ++i) {
    num += s.q(i) * v(i) * v(i);
    den += v(i) * v(i);
  }
  return num / den;
}

}  // namespace

Matrix TridiagonalSystem::dense() const {
  const Index m = diagonal.size();
  Matrix a = Matrix::Zero(m, m);
  a.diagonal() = diagonal;
  a.diagonal(1) = off_diagonal;
  a.diagonal(-1) = off_diagonal;
  return a;
}

TridiagonalSystem assemble_operator(const ConstVectorRef& p_half, const ConstVectorRef& q,
                                    const SpaceGrid<>& grid) {
  const Index m = grid.interior();
  if (p_half.size() != m + 1) {
    throw ConfigError("assemble_operator: p needs " + std::to_string(m + 1) + " half-node samples");
  }
  if (q.size() != m + 2) throw ConfigError("assemble_operator: q needs " + std::to_string(m + 2) + " samples");
  for (Index i = 0; i <= m; ++i) {
    if (!(p_half(i) > 0.0)) {
      throw HypothesisError("coefficient condition violated: p(" + describe(grid.half_node(i)) + ") = " +
                            describe(p_half(i)) + " is not positive (half-node " + std::to_string(i) + ")");
    }
  }
  for (Index i = 0; i < m + 2; ++i) {
    if (!(q(i) >= 0.0)) {
      throw HypothesisError("coefficient condition violated: q(" + describe(grid.node(i)) + ") = " + describe(q(i)) +
                            " is negative (node " + std::to_string(i) + ")");
    }
  }
  const double inv_dx2 = 1.0 / (grid.spacing() * grid.spacing());
  TridiagonalSystem s{grid, p_half, q, Vector(m), Vector(m - 1)};
  for (Index i = 1; i <= m; ++i) s.diagonal(i - 1) = (p_half(i - 1) + p_half(i)) * inv_dx2 + q(i);
  for (Index i = 1; i < m; ++i) s.off_diagonal(i - 1) = -p_half(i) * inv_dx2;
  return s;
}

SpectralBasis solve_eigs(const TridiagonalSystem& system, Index count) {
  const Index m = system.diagonal.size();
  if (count < 1 || count > m) {
    throw ConfigError("solve_eigs: mode count " + std::to_string(count) + " must lie in [1, M=" +
                      std::to_string(m) + "]");
  }
  const Vector& a = system.diagonal;
  const Vector& b = system.off_diagonal;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Index i = 0; i < m; ++i) {
    const double radius = (i > 0 ? std::abs(b(i - 1)) : 0.0) + (i + 1 < m ? std::abs(b(i)) : 0.0);
    lo = std::min(lo, a(i) - radius);
    hi = std::max(hi, a(i) + radius);
  }
  const double norm = std::max(std::abs(lo), std::abs(hi));
  const double tiny = std::numeric_limits<double>::epsilon() * norm;

  SpectralBasis basis{system.grid, Vector(count), Matrix::Zero(m + 2, count), 0.0};
  const double dx = system.grid.spacing();

  for (Index k = 0; k < count; ++k) {
    // Bisection for the (k+1)-th smallest eigenvalue.
    double left = lo;
    double right = hi;
    for (int it = 0; it < 200 && right - left > 2.0 * tiny; ++it) {
      const double mid = 0.5 * (left + right);
      if (sturm_count(a, b, mid, tiny) > k) {
        right = mid;
      } else {
        left = mid;
      }
    }
    const double sigma = 0.5 * (left + right);

    // Inverse iteration from a deterministic pseudo-random start.
    Vector x(m);
    std::uint64_t state = 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(k);
    for (Index i = 0; i < m; ++i) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      x(i) = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
    }
    x.normalize();
    bool converged = false;
    for (int it = 0; it < 30 && !converged; ++it) {
      Vector y = pivoted_tridiagonal_solve(a.array() - sigma, b, x, tiny);
      for (int pass = 0; pass < 2; ++pass) {
        for (Index j = 0; j < k; ++j) {
          const auto prev = basis.modes.col(j).segment(1, m);
          y -= (prev.dot(y) / prev.squaredNorm()) * prev;
        }
      }
      y.normalize();
      Vector ay = a.cwiseProduct(y);
      ay.head(m - 1) += b.cwiseProduct(y.tail(m - 1));
      ay.tail(m - 1) += b.cwiseProduct(y.head(m - 1));
      const double rq = y.dot(ay);
      const double residual = (ay - rq * y).norm();
      converged = it > 0 && residual <= 64.0 * std::sqrt(double(m)) * tiny;
      x = y;
    }
    if (!converged) {
      throw NumericalError("solve_eigs: inverse iteration did not converge for mode " + std::to_string(k + 1));
    }

    Index first = 0;
    const double vmax = x.cwiseAbs().maxCoeff();
    while (first < m && std::abs(x(first)) <= 1e-12 * vmax) ++first;
    if (x(first) < 0.0) x = -x;
    Vector full = Vector::Zero(m + 2);
    full.segment(1, m) = x / std::sqrt(dx * x.squaredNorm());
    basis.eigenvalues(k) = flux_rayleigh(system, full);
    basis.modes.col(k) = full;
    if (k > 0 && !(basis.eigenvalues(k) > basis.eigenvalues(k - 1))) {
      throw NumericalError("solve_eigs: eigenvalues " + std::to_string(k) + " and " + std::to_string(k + 1) +
                           " are not strictly increasing");
    }
  }
  const Vector w = trapezoid_weights(system.grid);
  const Matrix gram = basis.modes.transpose() * w.asDiagonal() * basis.modes;
  basis.orthonormality_defect = (gram - Matrix::Identity(count, count)).cwiseAbs().maxCoeff();
  return basis;
}

Vector trapezoid_weights(const SpaceGrid<>& grid) {
  Vector w = Vector::Constant(grid.size(), grid.spacing());
  w(0) *= 0.5;
  w(grid.size() - 1) *= 0.5;
  return w;
}

double energy_form(const ConstVectorRef& samples, const ConstVectorRef& p_half, const ConstVectorRef& q,
                   const SpaceGrid<>& grid) {
  const Index n = grid.size();
  if (samples.size() != n || q.size() != n || p_half.size() != n - 1) {
    throw ConfigError("energy_form: samples do not match the grid");
  }
  if (std::abs(samples(0)) > 1e-12 || std::abs(samples(n - 1)) > 1e-12) {
    throw HypothesisError("energy_form: samples must vanish at both ends, got " + describe(samples(0)) +
                          " and " + describe(samples(n - 1)));
  }
  const double dx = grid.spacing();
  double flux = 0.0;
  for (Index i = 0; i + 1 < n; ++i) {
    const double slope = (samples(i + 1) - samples(i)) / dx;
    flux += p_half(i) * slope * slope;
  }
  const Vector w = trapezoid_weights(grid);
  return flux * dx + (w.array() * q.array() * samples.array().square()).sum();
}

Vector solve_operator(const TridiagonalSystem& system, const ConstVectorRef& rhs, double shift) {
  const Index m = system.diagonal.size();
  if (rhs.size() != m + 2) throw ConfigError("solve_operator: right-hand side does not match the grid");
  Vector out = Vector::Zero(m + 2);
  out.segment(1, m) = pivoted_tridiagonal_solve(system.diagonal.array() + shift, system.off_diagonal,
                                                rhs.segment(1, m), 0.0);
  if (!out.allFinite()) throw NumericalError("solve_operator: singular system");
  return out;
}

ModeCoefficients mode_coefficients(const SpectralBasis& basis, const ConstVectorRef& phi_samples,
                                   const ConstVectorRef& h_samples) {
  ModeCoefficients c;
  c.phi = project(phi_samples, basis);
  c.h = project(h_samples, basis);
  c.H = c.h.squaredNorm();
  c.W = basis.eigenvalues.dot(c.h.cwiseAbs2());
  return c;
}

Index select_mode_count(const SpectralBasis& basis, const ModeCoefficients& coeffs, double threshold) {
  // n counts modes; mode n is the last one whose indicator exceeds the threshold.
  Index n = basis.size();
  while (n > 0) {
    const Index i = n - 1;
    const double tail = basis.eigenvalues(i) * (coeffs.phi(i) * coeffs.phi(i) + coeffs.h(i) * coeffs.h(i));
    if (tail > threshold) break;
    --n;
  }
  return std::clamp<Index>(n + 1, 1, basis.size());
}

SpectralBasis truncate(const SpectralBasis& basis, Index count) {
  if (count < 1 || count > basis.size()) throw ConfigError("truncate: invalid mode count");
  SpectralBasis out{basis.grid, basis.eigenvalues.head(count), basis.modes.leftCols(count), 0.0};
  const Vector w = trapezoid_weights(basis.grid);
  const Matrix gram = out.modes.transpose() * w.asDiagonal() * out.modes;
  out.orthonormality_defect = (gram - Matrix::Identity(count, count)).cwiseAbs().maxCoeff();
  return out;
}

ModeCoefficients truncate(const ModeCoefficients& coeffs, const SpectralBasis& basis, Index count) {
  if (count < 1 || count > coeffs.size()) throw ConfigError("truncate: invalid mode count");
  ModeCoefficients out;
  out.phi = coeffs.phi.head(count);
  out.h = coeffs.h.head(count);
  out.H = out.h.squaredNorm();
  out.W = basis.eigenvalues.head(count).dot(out.h.cwiseAbs2());
  return out;
}

}  // namespace fracinv
