#pragma once

// Special functions used throughout the library. All functions are pure and
// reentrant; invalid arguments throw bifprob::DomainError.

namespace bifprob::specfun {

/// ln Gamma(x) for x > 0 (Lanczos, g = 7, 9 terms; reflection below 1/2).
double log_gamma(double x);

/// Gamma(x) for x > 0.
double gamma(double x);

double erf(double x);
double erfc(double x);

/// Standard normal CDF.
double normal_cdf(double z);

/// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x);

/// Lower regularized incomplete gamma P(a, x).
double reg_inc_gamma(double a, double x);

/// Modified Bessel function of the second kind K_nu(z), z > 0, computed from
/// K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt.
double bessel_k(double nu, double z);

/// Binomial coefficient as a double.
double binomial(int n, int k);

/// (k-1)!! for even k >= 0, i.e. E[Z^k] of a standard normal.
double normal_even_moment(int k);

}  // namespace bifprob::specfun
