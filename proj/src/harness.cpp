#include "fracinv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "fracinv/direct_solver.hpp"
#include "fracinv/error.hpp"
#include "fracinv/mittag_leffler.hpp"

namespace fracinv {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Thomas algorithm for a diagonally dominant tridiagonal system.
void thomas(const std::vector<double>& sub, std::vector<double> diag, const std::vector<double>& sup,
            std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

}  // namespace

Vector noise_sequence(Index count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector xi(count);
  for (Index k = 0; k < count; ++k) xi(k) = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  return xi;
}

SynthDataset synthesize(const ProblemSpec& spec, double eps, std::uint64_t seed) {
  if (!(eps >= 0.0)) throw ConfigError("synthesize: eps must be nonnegative");
  const DirectSolution sol = solve_direct(spec);
  SynthDataset d;
  d.spec = spec;
  d.time = sol.time;
  d.g_exact = observe(sol.amplitudes, sol.coeffs.h);
  d.g_noisy = d.g_exact;
  if (eps > 0.0) d.g_noisy.array() *= 1.0 + eps * noise_sequence(d.g_exact.size(), seed).array();
  d.f_true = TimeSeries::sample(sol.time, spec.f).values;
  d.eps = eps;
  d.seed = seed;
  return d;
}

Matrix oracle_l1_fd(const ProblemSpec& spec, Index M, Index K) {
  if (!spec.has_f()) throw ConfigError("oracle_l1_fd: spec needs a source f");
  if (M < 3 || K < 1) throw ConfigError("oracle_l1_fd: need M >= 3 and K >= 1");
  const double alpha = spec.alpha;
  const double dx = spec.l / static_cast<double>(M + 1);
  const double tau = spec.T / static_cast<double>(K);
  const auto x = [&](Index i) { return i == M + 1 ? spec.l : static_cast<double>(i) * dx; };

  std::vector<double> pm(M + 1), q(M + 2), src(M + 2);
  for (Index i = 0; i <= M; ++i) pm[i] = spec.p((static_cast<double>(i) + 0.5) * dx);
  for (Index i = 0; i < M + 2; ++i) {
    q[i] = spec.q(x(i));
    src[i] = spec.h(x(i));
  }
  const double a0 = std::pow(tau, -alpha) / std::tgamma(2.0 - alpha);
  std::vector<double> b(K + 1);
  for (Index j = 0; j <= K; ++j) b[j] = std::pow(j + 1.0, 1.0 - alpha) - std::pow(static_cast<double>(j), 1.0 - alpha);

  // Interior system (a0 I + A) with A the conservative stencil.
  std::vector<double> sub(M), diag(M), sup(M);
  for (Index i = 1; i <= M; ++i) {
    diag[i - 1] = a0 + (pm[i - 1] + pm[i]) / (dx * dx) + q[i];
    sub[i - 1] = i > 1 ? -pm[i - 1] / (dx * dx) : 0.0;
    sup[i - 1] = i < M ? -pm[i] / (dx * dx) : 0.0;
  }

  Matrix u = Matrix::Zero(K + 1, M + 2);
  Matrix jumps = Matrix::Zero(K + 1, M + 2);  // u^m - u^{m-1}
  for (Index i = 1; i <= M; ++i) u(0, i) = spec.phi(x(i));
  std::vector<double> rhs(M);
  for (Index k = 1; k <= K; ++k) {
    const double fk = spec.f(static_cast<double>(k) * tau);
    for (Index i = 1; i <= M; ++i) {
      double history = 0.0;
      for (Index j = 1; j < k; ++j) history += b[j] * jumps(k - j, i);
      rhs[i - 1] = src[i] * fk + a0 * u(k - 1, i) - a0 * history;
    }
    thomas(sub, diag, sup, rhs);
    for (Index i = 1; i <= M; ++i) {
      u(k, i) = rhs[i - 1];
      jumps(k, i) = u(k, i) - u(k - 1, i);
    }
  }
  return u;
}

ErrorReport compare(const ConstVectorRef& truth, const ConstVectorRef& estimate) {
  if (truth.size() != estimate.size()) throw ConfigError("compare: series lengths differ");
  ErrorReport r;
  r.errors = estimate - truth;
  r.linf_abs = r.errors.cwiseAbs().maxCoeff();
  r.linf_rel = r.linf_abs / std::max(truth.cwiseAbs().maxCoeff(), 1e-12);
  r.l2_rel = r.errors.norm() / std::max(truth.norm(), 1e-12);
  r.max_pointwise_rel = (r.errors.cwiseAbs().array() / truth.cwiseAbs().array().max(1e-12)).maxCoeff();
  return r;
}

ErrorReport compare(const TimeSeries& truth, const TimeSeries& estimate) {
  if (!(truth.grid == estimate.grid)) throw ConfigError("compare: time grids differ");
  return compare(truth.values, estimate.values);
}

ConvolutionDefect convolution_identity_defect(double alpha, double lambda, double T, Index K, const ScalarFunction& eta) {
  const TimeGrid<> grid(T, K);
  const ConvolutionWeights w = convolution_weights(lambda, alpha, grid);
  const TimeSeries e = TimeSeries::sample(grid, eta);
  const Vector conv = w.convolve(panel_means(e.values));
  const Vector defect = (caputo_l1(conv, grid.step(), alpha) - (e.values - lambda * conv)).cwiseAbs();
  const Index first = std::max<Index>(1, static_cast<Index>(std::ceil(0.01 * static_cast<double>(K))));
  return {defect.tail(K + 1 - first).maxCoeff(), defect.tail(K).maxCoeff()};
}

std::vector<InvariantRow> verify_invariants(const ProblemSpec& spec) {
  std::vector<InvariantRow> rows;
  const auto item = [&](const std::string& name, double bound, const std::function<std::pair<double, bool>()>& body) {
    try {
      const auto [measured, pass] = body();
      rows.push_back({name, measured, bound, pass});
    } catch (const std::exception&) {
      rows.push_back({name, kNaN, bound, false});
    }
  };

  validate_structure(spec, Mode::kAny);
  for (const HypothesisCheck& c : check_hypotheses(spec)) rows.push_back({c.name, c.measured, c.bound, c.pass});

  std::optional<SpectralModel> model;
  try {
    model = build_spectral_model(spec);
  } catch (const std::exception&) {
  }
  const auto needs_model = [&]() -> const SpectralModel& {
    if (!model) throw NumericalError("no spectral model");
    return *model;
  };

  item("orthonormality defect", 1e-10, [&] {
    const double d = needs_model().basis.orthonormality_defect;
    return std::pair{d, d <= 1e-10};
  });
  item("eigenvalues positive and increasing", 0.0, [&] {
    const Vector& lam = needs_model().basis.eigenvalues;
    double worst = lam(0);
    for (Index n = 1; n < lam.size(); ++n) worst = std::min(worst, lam(n) - lam(n - 1));
    return std::pair{worst, worst > 0.0};
  });
  item("Rayleigh identity max |J(X_n) - lambda_n|/lambda_n", 1e-3, [&] {
    const SpectralModel& m = needs_model();
    double worst = 0.0;
    for (Index n = 0; n < m.basis.size(); ++n) {
      const double j = energy_form(m.basis.modes.col(n), m.system);
      worst = std::max(worst, std::abs(j - m.basis.eigenvalues(n)) / m.basis.eigenvalues(n));
    }
    return std::pair{worst, worst <= 1e-3};
  });

  const Discretization disc = discretize(spec);
  const double p_min = disc.p_half.minCoeff();
  const double p_max = disc.p_half.maxCoeff();
  const double q_max = disc.q.maxCoeff();
  const double pi2 = std::numbers::pi * std::numbers::pi / (spec.l * spec.l);
  item("growth: min lambda_n/n^2", 0.5 * pi2 * p_min, [&] {
    const Vector& lam = needs_model().basis.eigenvalues;
    double lo = std::numeric_limits<double>::infinity();
    for (Index n = 0; n < lam.size(); ++n) lo = std::min(lo, lam(n) / double((n + 1) * (n + 1)));
    return std::pair{lo, lo >= 0.5 * pi2 * p_min};
  });
  item("growth: max lambda_n/n^2", pi2 * p_max + q_max, [&] {
    const Vector& lam = needs_model().basis.eigenvalues;
    double hi = 0.0;
    for (Index n = 0; n < lam.size(); ++n) hi = std::max(hi, lam(n) / double((n + 1) * (n + 1)));
    return std::pair{hi, hi <= pi2 * p_max + q_max};
  });

  const auto bessel = [&](const char* name, bool use_phi) {
    item(std::string("Bessel: sum lambda_n ") + name + "_n^2 / J(" + name + ")", 1.0, [&] {
      const SpectralModel& m = needs_model();
      const Vector& c = use_phi ? m.coeffs.phi : m.coeffs.h;
      const double energy = energy_form(use_phi ? m.disc.phi : m.disc.h, m.system);
      double partial = 0.0;
      bool monotone = true;
      for (Index n = 0; n < c.size(); ++n) {
        const double next = partial + m.basis.eigenvalues(n) * c(n) * c(n);
        monotone = monotone && next >= partial;
        partial = next;
      }
      const double ratio = energy > 0.0 ? partial / energy : (partial == 0.0 ? 0.0 : kNaN);
      return std::pair{ratio, monotone && ratio <= 1.0 + 1e-12};
    });
  };
  bessel("phi", true);
  bessel("h", false);

  item("Parseval: sum h_n^2 > 0", 1e-14, [&] {
    const double H = needs_model().coeffs.H;
    return std::pair{H, H >= 1e-14};
  });
  item("Parseval: ||h||^2 - sum h_n^2 >= 0", 0.0, [&] {
    const SpectralModel& m = needs_model();
    const double tail = trapezoid_weights(m.disc.space).dot(m.disc.h.cwiseAbs2()) - m.coeffs.H;
    return std::pair{tail, tail >= -1e-12};
  });

  const double alpha = spec.alpha;
  item("ML: 0 < E_{a,1}(-t) < 1, nonincreasing", 0.0, [&] {
    double previous = 1.0;
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 120; ++i) {
      const double t = 1e-3 * std::pow(1e5, i / 119.0);
      const double e = mittag_leffler(alpha, 1.0, -t);
      ok = ok && e > 0.0 && e < 1.0;
      worst = std::max(worst, e - previous);
      previous = e;
    }
    return std::pair{worst, ok && worst <= 0.0};
  });
  item("ML: 0 <= E_{a,a}(-t) <= 1/Gamma(a), nonincreasing", 0.0, [&] {
    const double cap = 1.0 / std::tgamma(alpha);
    double previous = cap;
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 120; ++i) {
      const double t = 1e-3 * std::pow(1e5, i / 119.0);
      const double e = mittag_leffler(alpha, alpha, -t);
      ok = ok && e >= 0.0 && e <= cap * (1.0 + 1e-14);
      worst = std::max(worst, e - previous * (1.0 + 1e-14));
      previous = e;
    }
    return std::pair{worst, ok && worst <= 0.0};
  });

  const ScalarFunction eta = parse_expr("1 + t", "t");
  for (double lambda : {0.0, 1.0, 10.0}) {
    item("convolution identity, lambda = " + std::to_string(static_cast<int>(lambda)), 1e-2, [&] {
      const double d = convolution_identity_defect(alpha, lambda, 1.0, 2000, eta).from_t0;
      return std::pair{d, d <= 1e-2};
    });
  }

  item("compatibility |sum h_n phi_n - int phi h|", spec.inverse.compat_tol, [&] {
    const SpectralModel& m = needs_model();
    const double integral = trapezoid_weights(m.disc.space).dot(m.disc.phi.cwiseProduct(m.disc.h));
    double defect = std::abs(m.coeffs.h.dot(m.coeffs.phi) - integral);
    if (spec.has_g()) defect = std::max(defect, std::abs(spec.g(0.0) - integral));
    return std::pair{defect, defect <= spec.inverse.compat_tol};
  });
  return rows;
}

}  // namespace fracinv
