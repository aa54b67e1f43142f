#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracinv/direct_solver.hpp"
#include "fracinv/error.hpp"
#include "fracinv/mittag_leffler.hpp"
#include "oracles.hpp"

using namespace fracinv;
using std::numbers::pi;

namespace {

ProblemSpec base_spec() {
  ProblemSpec s;
  s.alpha = 0.5;
  s.l = 1.0;
  s.T = 1.0;
  s.p = parse_expr("1 + x/2", "x");
  s.q = parse_expr("x", "x");
  s.phi = parse_expr("sin(pi*x)*x*(1-x)", "x");
  s.h = parse_expr("x*(1-x)", "x");
  s.f = parse_expr("1 + t^2", "t");
  s.grid.M = 200;
  s.grid.K = 400;
  return s;
}

}  // namespace

TEST_CASE("weights telescope to the relaxation integral") {
  const TimeGrid<> grid(2.0, 300);
  for (double alpha : {0.3, 0.7}) {
    for (double lambda : {0.5, 10.0, 400.0}) {
      const ConvolutionWeights w = convolution_weights(lambda, alpha, grid);
      CHECK(w.weights.minCoeff() >= 0.0);
      double running = 0.0;
      for (Index k = 1; k < grid.size(); ++k) {
        running += w.weights(k);
        const double expected = (1.0 - mittag_leffler(alpha, 1.0, -lambda * std::pow(grid.node(k), alpha))) / lambda;
        CHECK(running == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("weights match quadrature of the kernel") {
  const TimeGrid<> grid(1.0, 50);
  const double alpha = 0.4;
  const double lambda = 7.0;
  const ConvolutionWeights w = convolution_weights(lambda, alpha, grid);
  const auto kernel = [&](double u) {
    return std::pow(u, alpha - 1.0) * mittag_leffler(alpha, alpha, -lambda * std::pow(u, alpha));
  };
  for (Index m : {1, 2, 17, 50}) {
    // Lag m covers u in [(m-1) tau, m tau]; shift so a singular end sits at 0.
    const double a = (m - 1) * grid.step();
    const double quad = oracle::tanh_sinh([&](double v) { return kernel(a + v); }, 0.0, grid.step());
    CHECK(w.weights(m) == doctest::Approx(quad).epsilon(1e-10));
  }
}

TEST_CASE("limits of the weights") {
  const TimeGrid<> grid(1.0, 20);
  const double tau = grid.step();
  const ConvolutionWeights zero = convolution_weights(0.0, 0.6, grid);
  CHECK(zero.weights(1) == doctest::Approx(std::pow(tau, 0.6) / (0.6 * std::tgamma(0.6))).epsilon(1e-14));
  const double lambda = 3.0;
  const ConvolutionWeights one = convolution_weights(lambda, 1.0, grid);
  for (Index m = 1; m <= 20; ++m) {
    const double expected = (std::exp(-lambda * (m - 1) * tau) - std::exp(-lambda * m * tau)) / lambda;
    CHECK(one.weights(m) == doctest::Approx(expected).epsilon(1e-13));
  }
  const ConvolutionWeights near = convolution_weights(lambda, 0.999, grid);
  CHECK(near.weights(5) == doctest::Approx(one.weights(5)).epsilon(1e-2));
  CHECK_THROWS_AS(convolution_weights(-1.0, 0.5, grid), ConfigError);
}

TEST_CASE("mode evolution closed forms") {
  const TimeGrid<> grid(1.0, 500);
  const double alpha = 0.6;
  const ConvolutionWeights w = convolution_weights(1.0, alpha, grid);
  const Vector free = mode_evolution(1.0, 0.0, w, TimeSeries(grid, Vector::Zero(501)));
  for (Index k = 0; k < grid.size(); ++k) {
    CHECK(free(k) == mittag_leffler(alpha, 1.0, -std::pow(grid.node(k), alpha)));
  }
  const double h = 0.7;
  const Vector forced = mode_evolution(0.0, h, w, TimeSeries(grid, Vector::Ones(501)));
  for (Index k = 0; k < grid.size(); ++k) {
    const double expected = h * (1.0 - mittag_leffler(alpha, 1.0, -std::pow(grid.node(k), alpha)));
    CHECK(std::abs(forced(k) - expected) <= 1e-10);
  }
  const Vector both = mode_evolution(0.3, h, w, TimeSeries(grid, Vector::Ones(501)));
  CHECK(both(0) == 0.3);
}

TEST_CASE("separable solution for an eigenfunction initial state") {
  ProblemSpec s = base_spec();
  s.p = parse_expr("1", "x");
  s.q = parse_expr("0", "x");
  s.phi = parse_expr("sin(pi*x)", "x");
  s.f = parse_expr("0", "t");
  s.grid.N = 8;
  const DirectSolution sol = solve_direct(s);
  const Matrix u = sol.field();
  const double lambda1 = sol.basis.eigenvalues(0);
  CHECK(lambda1 == doctest::Approx(pi * pi).epsilon(1e-4));
  double worst = 0.0;
  for (Index k = 0; k < sol.time.size(); k += 50) {
    const double e = mittag_leffler(0.5, 1.0, -lambda1 * std::sqrt(sol.time.node(k)));
    for (Index i = 0; i < sol.basis.grid.size(); ++i) {
      worst = std::max(worst, std::abs(u(k, i) - e * std::sin(pi * sol.basis.grid.node(i))));
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("boundary and initial conditions") {
  const DirectSolution sol = solve_direct(base_spec());
  const Matrix u = sol.field();
  CHECK(u.col(0).isZero(0.0));
  CHECK(u.col(u.cols() - 1).isZero(0.0));
  CHECK((sol.amplitudes.col(0) - sol.coeffs.phi).cwiseAbs().maxCoeff() <= 1e-10);
  const SpaceGrid<> grid = sol.basis.grid;
  Vector phi(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    phi(i) = std::sin(pi * x) * x * (1 - x);
  }
  const Vector w = trapezoid_weights(grid);
  const double norm2 = w.dot(phi.cwiseAbs2());
  const Vector diff = u.row(0).transpose() - phi;
  const double rel = std::sqrt(w.dot(diff.cwiseAbs2()) / norm2);
  const double tail = std::sqrt(std::max(0.0, norm2 - sol.coeffs.phi.squaredNorm()) / norm2);
  MESSAGE("initial-condition relative L2 error " << rel << ", truncation tail " << tail << ", N = "
                                                 << sol.basis.size());
  CHECK(rel <= tail * (1.0 + 1e-6) + 1e-12);
}

TEST_CASE("observation functional") {
  ProblemSpec s = base_spec();
  s.phi = parse_expr("0", "x");
  s.f = parse_expr("1", "t");
  const DirectSolution sol = solve_direct(s);
  const Vector g = observe(sol.amplitudes, sol.coeffs.h);
  CHECK(g(0) == 0.0);
  for (Index k = 1; k < g.size(); ++k) {
    double expected = 0.0;
    for (Index n = 0; n < sol.basis.size(); ++n) {
      const double lam = sol.basis.eigenvalues(n);
      expected += sol.coeffs.h(n) * sol.coeffs.h(n) * (1.0 - sol.relaxation(n, k)) / lam;
    }
    CHECK(std::abs(g(k) - expected) <= 1e-12);
    CHECK(g(k) >= g(k - 1));
  }
  const DirectSolution with_phi = solve_direct(base_spec());
  const Vector g2 = observe(with_phi.amplitudes, with_phi.coeffs.h);
  CHECK(g2(0) == doctest::Approx(with_phi.coeffs.h.dot(with_phi.coeffs.phi)).epsilon(1e-14));
  Vector single = Vector::Zero(with_phi.basis.size());
  single(0) = 1.0;
  CHECK((observe(with_phi.amplitudes, single) - with_phi.amplitudes.row(0).transpose()).isZero(0.0));
}

TEST_CASE("mode residual of the fractional ODE") {
  ProblemSpec s = base_spec();
  s.grid.K = 2000;
  s.grid.M = 100;
  const DirectSolution sol = solve_direct(s);
  const Vector f = TimeSeries::sample(sol.time, s.f).values;
  double worst = 0.0;
  double worst_full = 0.0;
  for (Index n = 0; n < sol.basis.size(); ++n) {
    const Vector u = sol.amplitudes.row(n).transpose();
    const Vector r = caputo_l1(u, sol.time.step(), s.alpha) + sol.basis.eigenvalues(n) * u - sol.coeffs.h(n) * f;
    worst = std::max(worst, r.tail(r.size() - 20).cwiseAbs().maxCoeff());
    worst_full = std::max(worst_full, r.tail(r.size() - 1).cwiseAbs().maxCoeff());
  }
  MESSAGE("mode residual on [0.01T, T]: " << worst << ", over all t > 0: " << worst_full);
  CHECK(worst <= 5e-2);
}

TEST_CASE("steady state of a constant source") {
  ProblemSpec s = base_spec();
  s.phi = parse_expr("0", "x");
  s.f = parse_expr("1", "t");
  s.T = 50.0;
  s.grid.K = 200;
  const DirectSolution sol = solve_direct(s);
  const SpectralModel model = build_spectral_model(s);
  const Vector steady = solve_operator(model.system, model.disc.h);
  const Vector u_final = sol.field().bottomRows(1).transpose();
  const double rel = (u_final - steady).norm() / steady.norm();
  MESSAGE("steady-state relative L2 deviation " << rel);
  CHECK(rel <= 1e-2);
}

TEST_CASE("nonnegative data give a nonnegative field") {
  ProblemSpec s = base_spec();
  s.phi = parse_expr("x*(1-x)", "x");
  const DirectSolution sol = solve_direct(s);
  CHECK(sol.field().minCoeff() >= -1e-8);
}

TEST_CASE("validation") {
  ProblemSpec s = base_spec();
  s.q = parse_expr("x - 0.5", "x");
  CHECK_THROWS_AS(solve_direct(s), HypothesisError);
  s = base_spec();
  s.phi = parse_expr("1 + x", "x");
  CHECK_THROWS_AS(solve_direct(s), HypothesisError);
  s = base_spec();
  s.f = {};
  CHECK_THROWS_AS(solve_direct(s), ConfigError);
  s = base_spec();
  s.alpha = 1.0;
  CHECK_THROWS_AS(solve_direct(s), ConfigError);
}
