#pragma once

namespace fracinv {

/// sin(pi x) with exact zeros at the integers.
double sin_pi(double x);

/// Gamma function by the Lanczos approximation (g = 7, nine terms), reflected
/// for x < 1/2. Throws DomainError at the poles.
double gamma_fn(double x);

/// log|Gamma(x)|; +inf at the poles.
double log_abs_gamma(double x);

/// 1/Gamma(x), an entire function: zero at x = 0, -1, -2, ...
double rgamma(double x);

}  // namespace fracinv
