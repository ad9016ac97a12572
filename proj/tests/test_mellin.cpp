#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"

#include "bifprob/errors.hpp"
#include "bifprob/mellin.hpp"
#include "bifprob/quadrature.hpp"
#include "bifprob/specfun.hpp"

using namespace bifprob;
using namespace bifprob::mellin;

namespace {

MellinFactor factor(Distribution d, int k = 1, double scale = 1.0) { return {d, k, scale, ""}; }

}  // namespace

TEST_CASE("mellin_eval property rules") {
    const auto g8 = Distribution::gamma(8, 1);
    CHECK(mellin_eval({{factor(g8, -1)}}, 2) == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
    CHECK(mellin_eval({{factor(Distribution::uniform(0, 1), 1, 2.0)}}, 3) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(mellin_eval({{factor(Distribution::gamma(3, 1)), factor(Distribution::gamma(4, 1))}}, 2) ==
          doctest::Approx(12.0).epsilon(1e-14));
    CHECK(mellin_eval({{factor(g8)}}, 1) == 1.0);
}

TEST_CASE("round trips of scale, power, inverse and product rules") {
    const Distribution laws[] = {Distribution::gamma(8, 1), Distribution::gamma(3.5, 2), Distribution::beta(2, 5),
                                 Distribution::uniform(0.5, 2)};
    for (const auto& d : laws) {
        for (int s = 1; s <= 6; ++s) {
            // scale: M(a xi)(s) = a^(s-1) M(xi)(s)
            CHECK(oracle::rel_err(mellin_eval({{factor(d, 1, 3.0)}}, s), std::pow(3.0, s - 1) * d.mellin(s)) <= 1e-10);
            // power: M(xi^a)(s) = M(xi)(a s - a + 1)
            for (int a = 2; a <= 3; ++a)
                CHECK(oracle::rel_err(mellin_eval({{factor(d, a)}}, s), d.mellin(a * s - a + 1)) <= 1e-10);
            // product with global sign
            const ProductExpression e{{factor(d), factor(Distribution::gamma(2, 1), 1, 0.5)}, -1};
            const double prod = d.mellin(s) * std::pow(0.5, s - 1) * Distribution::gamma(2, 1).mellin(s);
            CHECK(oracle::rel_err(mellin_eval(e, s), (s % 2 ? 1.0 : -1.0) * prod) <= 1e-10);
        }
    }
    // inverse: M(1/xi)(s) = M(xi)(2 - s) for Gamma with alpha > s - 1
    const double alpha = 8.0;
    for (int s = 1; s < 8; ++s) {
        const double via_gamma = std::exp(specfun::log_gamma(alpha + 1 - s) - specfun::log_gamma(alpha));
        CHECK(oracle::rel_err(mellin_eval({{factor(Distribution::gamma(alpha, 1), -1)}}, s), via_gamma) <= 1e-10);
    }
}

TEST_CASE("existence and support errors") {
    CHECK_THROWS_AS(mellin_eval({{factor(Distribution::gamma(3, 1), -1)}}, 4), ExistenceError);
    CHECK_THROWS_AS(mellin_eval({{factor(Distribution::uniform(-1, 1), 2)}}, 2), UnsupportedError);
    // sign-indefinite base with exponent 1 is a plain raw moment
    CHECK(mellin_eval({{factor(Distribution::uniform(-1, 3))}}, 3) == doctest::Approx(Distribution::uniform(-1, 3).raw_moment(2)));
}

TEST_CASE("uniform-gamma product closed form") {
    CHECK(std::abs(UniformGammaProduct::cdf(0.0) - 0.25) <= 1e-12);
    CHECK(UniformGammaProduct::cdf(1e4) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(UniformGammaProduct::cdf(-1e4) == doctest::Approx(0.0));
    CHECK(UniformGammaProduct::pdf(-1e-12) == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(UniformGammaProduct::pdf(1e-12) == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(UniformGammaProduct::pdf(1.0) == doctest::Approx((1.0 + 1.0 / 3.0) * std::exp(-1.0 / 3.0) / 8.0).epsilon(1e-12));
    CHECK(UniformGammaProduct::pdf(1.0) == doctest::Approx(0.11946).epsilon(1e-4));
    // the closed-form pdf is the derivative of the closed-form cdf
    for (double x = -2.9; x < 15.0; x += 0.7) {
        const double h = 1e-5;
        const double fd = (UniformGammaProduct::cdf(x + h) - UniformGammaProduct::cdf(x - h)) / (2 * h);
        CHECK(fd == doctest::Approx(UniformGammaProduct::pdf(x)).epsilon(1e-6));
    }
}

TEST_CASE("sign-decomposed convolution matches the closed form") {
    const auto f = Distribution::uniform(-1, 3);
    const auto g = Distribution::gamma(3, 1);
    const auto conv = product_pdf_convolution(f, g, linspace(-5, 20, 1001));
    double linf = 0.0;
    for (std::size_t i = 0; i < conv.pdf.grid.size(); ++i)
        linf = std::max(linf, std::abs(conv.pdf.values[i] - UniformGammaProduct::pdf(conv.pdf.grid[i])));
    CHECK(linf <= 1e-6);
    CHECK(conv.mass_h1 + conv.mass_h2 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(conv.mass_h2 - f.cdf(0.0)) <= 1e-6);
    CHECK(product_density(f, g, 1.0) == doctest::Approx(UniformGammaProduct::pdf(1.0)).epsilon(1e-8));
}

TEST_CASE("convolution of positive factors integrates its Mellin moments") {
    const auto f = Distribution::gamma(3, 1);
    const auto g = Distribution::gamma(4, 2);
    quad::Tolerance tol;
    tol.rel = 1e-9;
    for (int s = 2; s <= 4; ++s) {
        const double m = quad::integrate([&](double z) { return std::pow(z, s - 1) * product_density(f, g, z); }, 0.0,
                                         quad::kInf, tol)
                             .value;
        CHECK(oracle::rel_err(m, mellin_eval({{factor(f), factor(g)}}, s)) <= 1e-5);
    }
}

TEST_CASE("narrow multiplier preserves total mass") {
    const auto f = Distribution::uniform(0, 1);
    const auto g = Distribution::gamma(400, 400);
    const auto conv = product_pdf_convolution(f, g, linspace(0.0, 1.5, 3001));
    CHECK(conv.pdf.mass() == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(conv.mass_h2 == 0.0);
}

TEST_CASE("Gamma-Gamma product density") {
    for (double x : {0.05, 0.5, 1.0, 3.0, 10.0})
        CHECK(gamma_gamma_pdf(1, 1, 0, x) == doctest::Approx(2.0 * specfun::bessel_k(0.0, 2.0 * std::sqrt(x))).epsilon(1e-12));
    const auto grid = linspace(0.01, 25, 100);
    const auto conv = product_pdf_convolution(Distribution::gamma(2, 1), Distribution::gamma(3, 1), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(conv.pdf.values[i] - gamma_gamma_pdf(2, 3, 0, grid[i])) <= 1e-6);
    const auto exp_conv = product_pdf_convolution(Distribution::gamma(1, 1), Distribution::gamma(1, 1), {0.3, 1.0, 2.0});
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(exp_conv.pdf.values[i] == doctest::Approx(gamma_gamma_pdf(1, 1, 0, exp_conv.pdf.grid[i])).epsilon(1e-7));
    const double mass = quad::integrate([](double x) { return gamma_gamma_pdf(2, 3, 0.1, x); }, 0.0, quad::kInf).value;
    CHECK(std::abs(mass - 1.0) <= 1e-6);
    CHECK(gamma_gamma_pdf(2, 3, 0.0, 1.0) == doctest::Approx(gamma_gamma_pdf(2, 3, 1e-9, 1.0)).epsilon(1e-6));
    CHECK_THROWS_AS(gamma_gamma_pdf(-1, 3, 0, 1), DomainError);
}

TEST_CASE("perturbation sensitivity") {
    const double a = perturbation_sensitivity(2, 3, 1.0, 1e-3);
    const double b = perturbation_sensitivity(2, 3, 1.0, 1e-4);
    CHECK(std::abs(a - b) <= 0.01 * std::abs(b));
    const double total = quad::integrate([](double x) { return perturbation_sensitivity(2, 2, x, 1e-3); }, 0.0, quad::kInf).value;
    CHECK(std::abs(total) <= 1e-3);
    for (double x = 0.1; x < 10; x += 0.5) CHECK(std::isfinite(perturbation_sensitivity(2, 2, x, 1e-3)));
    CHECK_THROWS_AS(perturbation_sensitivity(2, 3, 1.0, 0.5), DomainError);
}

TEST_CASE("piecewise pdf cdf and csv") {
    const auto conv = product_pdf_convolution(Distribution::uniform(-1, 3), Distribution::gamma(3, 1), linspace(-60, 60, 12001));
    const auto cdf = conv.pdf.cdf();
    CHECK(cdf.back() == doctest::Approx(1.0));
    for (std::size_t i = 1; i < cdf.size(); ++i) CHECK(cdf[i] >= cdf[i - 1]);
    for (double v : conv.pdf.values) CHECK(v >= 0.0);
    CHECK(conv.pdf.mass() == doctest::Approx(1.0).epsilon(1e-5));
    std::ostringstream os, oc;
    conv.pdf.write_csv(os);
    conv.pdf.write_cdf_csv(oc);
    CHECK(os.str().rfind("x,density\n", 0) == 0);
    CHECK(oc.str().rfind("x,cumulative\n", 0) == 0);
    CHECK(conv.pdf.eval(100.0) == 0.0);
}

TEST_CASE("default product grid covers the pilot sample") {
    const auto grid = default_product_grid(Distribution::uniform(-1, 3), Distribution::gamma(3, 1), 1, 256);
    CHECK(grid.size() == 256);
    CHECK(grid.front() < 0.0);
    CHECK(grid.back() > 10.0);
    CHECK(default_product_grid(Distribution::uniform(-1, 3), Distribution::gamma(3, 1), 1, 256) == grid);
}
