#pragma once

#include <functional>
#include <vector>

#include "json.hpp"

#include "bifprob/distributions.hpp"

namespace bifprob::pce {

/// Orthonormal polynomial family of a germ. Supported germs are Uniform(a, b)
/// (Legendre, shifted Legendre on (0, 1)), Beta and GenBeta (Jacobi).
struct OrthoBasis {
    Distribution germ;
    int degree = 0;
    /// power[n] holds the ascending power-basis coefficients of Pol_n.
    std::vector<std::vector<double>> power;
    /// Norms <Pol_n, Pol_n>; all 1 for the orthonormal families built here.
    std::vector<double> h;
    /// Monic three-term recurrence coefficients of the germ measure.
    std::vector<double> rec_alpha, rec_beta;

    double eval(int n, double x) const;
};

OrthoBasis make_basis(const Distribution& germ, int degree);

/// Polynomial in the germ, ascending power coefficients.
struct PowerPolynomial {
    std::vector<double> coeffs;
    Distribution germ;

    double eval(double x) const;
    int degree() const;
};

struct PceResult {
    std::vector<double> coeffs;
    OrthoBasis basis;
};

/// Projection of g(F_input^{-1}(F_germ(xi))) onto the basis of the germ.
/// quad_nodes = 0 selects N + 1 Gauss nodes.
PceResult project(const std::function<double(double)>& g, const Distribution& input,
                  const Distribution& germ, int N, int quad_nodes = 0);

PowerPolynomial collect_powers(const std::vector<double>& coeffs, const OrthoBasis& basis);

/// Power-basis coefficients of p(x)^(s-1).
std::vector<double> chat_coefficients(const PowerPolynomial& p, int s);

/// E[p(xi)^(s-1)] = sum_i chat_i(s) E[xi^i].
double mellin_of_pce(const PowerPolynomial& p, int s);

constexpr int kMaxS = 12;
constexpr int kMaxPowerDegree = 48;
constexpr double kChatGuard = 1e15;

void to_json(nlohmann::json& j, const PowerPolynomial& p);
PowerPolynomial power_polynomial_from_json(const nlohmann::json& j);

}  // namespace bifprob::pce
