#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "bifprob/distributions.hpp"
#include "bifprob/pce.hpp"

namespace bifprob::mellin {

/// scale * base^exponent for one independent random parameter.
struct MellinFactor {
    std::variant<Distribution, pce::PowerPolynomial> base;
    int exponent = 1;
    double scale = 1.0;
    std::string label;

    bool is_pce() const { return std::holds_alternative<pce::PowerPolynomial>(base); }
};

struct ProductExpression {
    std::vector<MellinFactor> factors;
    int global_sign = 1;

    bool has_pce() const;
};

/// E[(scale * base^k)^(s-1)].
double factor_mellin(const MellinFactor& f, int s);

/// Mellin transform of the product expression at integer s >= 1.
double mellin_eval(const ProductExpression& e, int s);

/// Tabulated density on a strictly increasing grid.
struct PiecewisePdf {
    std::vector<double> grid;
    std::vector<double> values;
    double lo = 0.0, hi = 0.0;

    /// Trapezoid integral of the values.
    double mass() const;
    /// Cumulative trapezoid sums, renormalized to end at 1.
    std::vector<double> cdf() const;
    /// Linear interpolation, 0 outside the grid.
    double eval(double x) const;

    void write_csv(std::ostream& os) const;
    void write_cdf_csv(std::ostream& os) const;
};

std::vector<double> linspace(double a, double b, std::size_t n);

/// Density of f * g at z by Mellin convolution, g a.s. positive.
double product_density(const Distribution& f, const Distribution& g, double z);

struct ConvolutionResult {
    PiecewisePdf pdf;
    /// Masses of the positive part h1 and negative part h2 of the product density.
    double mass_h1 = 0.0, mass_h2 = 0.0;
};

ConvolutionResult product_pdf_convolution(const Distribution& f, const Distribution& g,
                                          const std::vector<double>& grid);

/// Default grid for f * g: 2048 points between the extreme quantiles of a
/// pilot sample of the product.
std::vector<double> default_product_grid(const Distribution& f, const Distribution& g,
                                         std::uint64_t seed, std::size_t n = 2048);

/// U(-1, 3) x Gamma(3, 1).
struct UniformGammaProduct {
    static double pdf(double x);
    static double cdf(double x);
};

/// Density of Gamma(alpha,1) * Gamma(beta + eps, 1).
double gamma_gamma_pdf(double alpha, double beta, double eps, double x);

/// (rho_eps=h(x) - rho_eps=0(x)) / h.
double perturbation_sensitivity(double alpha, double beta, double x, double eps_step);

}  // namespace bifprob::mellin
