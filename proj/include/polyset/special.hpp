#pragma once

// Scalar special functions needed by the distribution families:
// log-gamma, the regularized lower incomplete gamma and its inverse
// (quantile), and the standard normal CDF. All pure, all double precision.

namespace polyset {

// Natural log of the gamma function. Domain x > 0.
// Absolute error <= 1e-10 on [0.05, 200].
double ln_gamma(double x);

// Regularized lower incomplete gamma P(k, x) = gamma(k, x) / Gamma(k).
// Domain k > 0, x >= 0. Series expansion for x < k + 1, Lentz continued
// fraction for the complement otherwise.
double gammainc_p(double k, double x);

// Inverse of gammainc_p in x: smallest x with P(k, x) = p.
// Domain k > 0, p in (0, 1). Bisection on ln x; relative accuracy ~1e-13.
double gamma_quantile(double k, double p);

// Standard normal CDF.
double norm_cdf(double x);

}  // namespace polyset
