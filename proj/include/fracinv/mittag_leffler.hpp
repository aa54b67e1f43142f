#pragma once

#include "fracinv/types.hpp"

namespace fracinv {

/// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) on the closed
/// negative real axis, 0 < alpha <= 1, z <= 0.
///
/// Evaluation uses the power series for |z|^{1/alpha} <= 2, the asymptotic
/// expansion -sum_k z^{-k}/Gamma(beta - alpha k) for |z|^{1/alpha} >= 60, and
/// in between the real-axis integral representation obtained by collapsing the
/// Hankel contour onto the cut, integrated by adaptive Gauss-Kronrod. Parameters
/// beta >= 1 + alpha are reduced with E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a))/z.
/// alpha = 1 is accepted for integer beta >= 1 only.
///
/// Throws ConfigError for unsupported parameters.
double mittag_leffler(double alpha, double beta, double z);

/// Table of E_{alpha,beta}(-lambda_n t_k^alpha): one row per lambda, one column per t.
Matrix mittag_leffler_table(double alpha, double beta, const ConstVectorRef& lambda,
                            const ConstVectorRef& t);

}  // namespace fracinv
