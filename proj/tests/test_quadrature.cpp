#include <cmath>

#include "doctest.h"

#include "bifprob/errors.hpp"
#include "bifprob/quadrature.hpp"

using namespace bifprob;

TEST_CASE("adaptive integration of smooth and improper integrands") {
    auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(quad::integrate([](double x) { return std::exp(-x); }, 0.0, quad::kInf).value ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(quad::integrate([](double x) { return std::exp(-x * x); }, -quad::kInf, quad::kInf).value ==
          doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));
}

TEST_CASE("breakpoints handle kinks") {
    auto f = [](double x) { return std::abs(x - 0.3); };
    auto r = quad::integrate(f, 0.0, 1.0, std::vector<double>{0.3});
    CHECK(r.value == doctest::Approx(0.045 + 0.245).epsilon(1e-13));
}

TEST_CASE("integrate_or_throw reports nonconvergence") {
    quad::Tolerance tol;
    tol.max_intervals = 2;
    tol.abs = 1e-15;
    tol.rel = 1e-15;
    CHECK_THROWS_AS(quad::integrate_or_throw([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, tol),
                    ConvergenceError);
}

TEST_CASE("Gauss-Legendre rules are exact to degree 2n-1") {
    for (int n : {1, 2, 5, 16, 64}) {
        const auto rule = quad::gauss_legendre(n);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
        double w = 0.0;
        for (double v : rule.weights) w += v;
        CHECK(w == doctest::Approx(2.0).epsilon(1e-13));
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            CHECK(std::abs(s - exact) <= 1e-12);
        }
    }
}

TEST_CASE("Golub-Welsch from a monic recurrence") {
    // monic Legendre: alpha = 0, beta_0 = 2, beta_k = k^2 / (4k^2 - 1)
    const int n = 8;
    std::vector<double> a(n, 0.0), b(n);
    b[0] = 2.0;
    for (int k = 1; k < n; ++k) b[k] = double(k) * k / (4.0 * k * k - 1.0);
    const auto r = quad::gauss_from_recurrence(a, b);
    const auto gl = quad::gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
        CHECK(r.nodes[i] == doctest::Approx(gl.nodes[i]).epsilon(1e-13));
        CHECK(r.weights[i] == doctest::Approx(gl.weights[i]).epsilon(1e-12));
    }
}
