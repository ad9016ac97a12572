#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace bifprob::quad {

struct Tolerance {
    double abs = 1e-12;
    double rel = 1e-10;
    int max_intervals = 2000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (7/15) on [a, b] with global bisection of the worst
/// interval. Infinite limits are mapped to a finite interval.
Result integrate(const Integrand& f, double a, double b, Tolerance tol = {});

/// Same as integrate() but splits at the given interior breakpoints first.
Result integrate(const Integrand& f, double a, double b,
                 const std::vector<double>& breakpoints, Tolerance tol = {});

/// Throws ConvergenceError when the tolerance is not met.
double integrate_or_throw(const Integrand& f, double a, double b, Tolerance tol = {});

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1] with weights summing to 2.
Rule gauss_legendre(int n);

/// Gauss rule from the recurrence coefficients of monic orthogonal
/// polynomials (Golub-Welsch). `alpha` and `beta` have length n; beta[0] is the
/// total mass of the measure.
Rule gauss_from_recurrence(const std::vector<double>& alpha, const std::vector<double>& beta);

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace bifprob::quad
