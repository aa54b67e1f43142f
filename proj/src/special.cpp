#include "fracinv/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracinv/error.hpp"

namespace fracinv {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos{
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

// Lanczos sum for Gamma(x + 1), x >= -1/2.
double lanczos_sum(double x) {
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (x + static_cast<double>(i));
  return sum;
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

constexpr double kLogSqrtTwoPi = 0.91893853320467274178;

}  // namespace

double sin_pi(double x) {
  if (x == std::floor(x)) return 0.0;
  double r = std::fmod(x, 2.0);
  if (r < 0.0) r += 2.0;
  double sign = 1.0;
  if (r > 1.0) {
    r -= 1.0;
    sign = -1.0;
  }
  if (r > 0.5) r = 1.0 - r;
  return sign * std::sin(std::numbers::pi * r);
}

double gamma_fn(double x) {
  if (std::isnan(x)) throw DomainError("gamma: NaN argument");
  if (is_nonpositive_integer(x)) throw DomainError("gamma: pole at " + std::to_string(x));
  if (x < 0.5) return std::numbers::pi / (sin_pi(x) * gamma_fn(1.0 - x));
  if (x == std::floor(x) && x <= 23.0) {
    double factorial = 1.0;
    for (double k = 2.0; k < x; k += 1.0) factorial *= k;
    return factorial;
  }
  if (x > 171.7) return std::numeric_limits<double>::infinity();
  const double y = x - 1.0;
  const double t = y + kLanczosG + 0.5;
  // t^(y+1/2) split in two factors so large x does not overflow early.
  const double half_power = std::pow(t, 0.5 * (y + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half_power * (half_power * std::exp(-t)) * lanczos_sum(y);
}

double log_abs_gamma(double x) {
  if (is_nonpositive_integer(x)) return std::numeric_limits<double>::infinity();
  if (x < 0.5) {
    return std::log(std::numbers::pi) - std::log(std::abs(sin_pi(x))) - log_abs_gamma(1.0 - x);
  }
  const double y = x - 1.0;
  const double t = y + kLanczosG + 0.5;
  return kLogSqrtTwoPi + (y + 0.5) * std::log(t) - t + std::log(lanczos_sum(y));
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x >= 0.5) {
    if (x > 171.0) return std::exp(-log_abs_gamma(x));
    return 1.0 / gamma_fn(x);
  }
  const double reflected = 1.0 - x;
  const double g = reflected > 171.0 ? std::exp(log_abs_gamma(reflected)) : gamma_fn(reflected);
  return sin_pi(x) * g / std::numbers::pi;
}

}  // namespace fracinv
