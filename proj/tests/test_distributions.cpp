#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "bifprob/distributions.hpp"
#include "bifprob/errors.hpp"
#include "bifprob/quadrature.hpp"

using namespace bifprob;

namespace {

std::vector<Distribution> zoo() {
    return {Distribution::uniform(-1, 3),       Distribution::uniform(0, 1),     Distribution::gamma(3, 1),
            Distribution::gamma(8, 1),          Distribution::gamma(0.5, 2.0),   Distribution::beta(2, 2),
            Distribution::beta(2, 5),           Distribution::beta(0.7, 1.4),    Distribution::genbeta(2, 5, -0.5, 0.5),
            Distribution::gaussian(0.3, 1.7)};
}

double integrate_pdf(const Distribution& d) {
    const auto s = d.support();
    return quad::integrate([&](double x) { return d.pdf(x); }, s.lo, s.hi).value;
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(Distribution::uniform(1, 1), DomainError);
    CHECK_THROWS_AS(Distribution::gamma(0, 1), DomainError);
    CHECK_THROWS_AS(Distribution::gamma(1, -1), DomainError);
    CHECK_THROWS_AS(Distribution::beta(-1, 1), DomainError);
    CHECK_THROWS_AS(Distribution::genbeta(2, 2, 1, 0), DomainError);
    CHECK_THROWS_AS(Distribution::gaussian(0, 0), DomainError);
}

TEST_CASE("pdf reference values") {
    CHECK(Distribution::uniform(-1, 3).pdf(0) == doctest::Approx(0.25));
    CHECK(Distribution::uniform(-1, 3).pdf(3.5) == 0.0);
    CHECK(Distribution::gamma(3, 1).pdf(1) == doctest::Approx(0.1839397205857212).epsilon(1e-14));
    CHECK(Distribution::beta(2, 2).pdf(0.5) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(Distribution::gamma(3, 1).pdf(-1) == 0.0);
}

TEST_CASE("cdf and quantile") {
    CHECK(Distribution::uniform(0, 1).cdf(0.3) == doctest::Approx(0.3));
    CHECK(Distribution::gamma(3, 1).cdf(3) == doctest::Approx(0.5768099188731565).epsilon(1e-10));
    CHECK(Distribution::beta(2, 2).quantile(0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(Distribution::beta(2, 2).quantile(0.0), DomainError);
    CHECK_THROWS_AS(Distribution::beta(2, 2).quantile(1.0), DomainError);
    for (const auto& d : zoo()) {
        for (double p = 0.01; p < 1.0; p += 0.0325) {
            const double x = d.quantile(p);
            CHECK(d.cdf(x) == doctest::Approx(p).epsilon(1e-9));
            CHECK(std::abs(d.quantile(d.cdf(x)) - x) <= 1e-8 * std::max(1.0, std::abs(x)));
        }
    }
}

TEST_CASE("pdf integrates to one") {
    for (const auto& d : zoo()) CHECK(std::abs(integrate_pdf(d) - 1.0) <= 1e-8);
}

TEST_CASE("raw moments") {
    for (int n = 1; n <= 8; ++n) CHECK(Distribution::uniform(0, 1).raw_moment(n) == doctest::Approx(1.0 / (n + 1)));
    CHECK(Distribution::gamma(8, 1).raw_moment(1) == doctest::Approx(8.0));
    CHECK(Distribution::beta(2, 5).raw_moment(2) == doctest::Approx(3.0 / 28.0).epsilon(1e-14));
    for (const auto& d : zoo()) {
        const auto s = d.support();
        for (int n = 1; n <= 6; ++n) {
            const double q = quad::integrate([&](double x) { return std::pow(x, n) * d.pdf(x); }, s.lo, s.hi).value;
            CHECK(d.raw_moment(n) == doctest::Approx(q).epsilon(1e-8).scale(1e-12));
        }
    }
}

TEST_CASE("negative power moments") {
    const auto g = Distribution::gamma(8, 1);
    CHECK(g.power_moment(-1) == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
    CHECK(g.power_moment(-3) == doctest::Approx(1.0 / (7.0 * 6.0 * 5.0)).epsilon(1e-13));
    CHECK_THROWS_AS(g.power_moment(-8), ExistenceError);
    CHECK_THROWS_AS(Distribution::beta(2, 2).power_moment(-2), ExistenceError);
    CHECK_THROWS_AS(Distribution::uniform(-1, 1).power_moment(-1), UnsupportedError);
}

TEST_CASE("mellin transform at integer arguments") {
    CHECK(Distribution::uniform(0, 1).mellin(3) == doctest::Approx(1.0 / 3.0));
    CHECK(Distribution::gamma(3, 1).mellin(2) == doctest::Approx(3.0));
    CHECK(Distribution::beta(2, 2).mellin(2) == doctest::Approx(0.5));
    CHECK_THROWS_AS(Distribution::uniform(-1, 3).mellin(2), UnsupportedError);
    CHECK_THROWS_AS(Distribution::gaussian(0, 1).mellin(2), UnsupportedError);
    for (const auto& d : zoo()) {
        if (!d.nonnegative()) continue;
        CHECK(d.mellin(1) == 1.0);
        for (int s = 2; s <= 10; ++s) CHECK(oracle::rel_err(d.mellin(s), d.raw_moment(s - 1)) <= 1e-10);
    }
    // beta germ specialization Gamma(a+b)Gamma(a-1+s) / (Gamma(a)Gamma(a+b-1+s))
    const double a = 2.0, b = 5.0;
    for (int s = 1; s <= 8; ++s) {
        const double closed = std::exp(std::lgamma(a + b) + std::lgamma(a - 1 + s) - std::lgamma(a) - std::lgamma(a + b - 1 + s));
        CHECK(Distribution::beta(a, b).mellin(s) == doctest::Approx(closed).epsilon(1e-13));
    }
}

TEST_CASE("generalized beta is the affine push-forward of beta") {
    const auto base = Distribution::beta(2, 5);
    const auto gb = Distribution::genbeta(2, 5, -0.5, 0.5);
    for (double u = 0.005; u < 1.0; u += 0.01) {
        const double x = -0.5 + u;
        CHECK(std::abs(gb.pdf(x) - base.pdf(u)) <= 1e-12);
        CHECK(std::abs(gb.cdf(x) - base.cdf(u)) <= 1e-12);
    }
    CHECK(gb.mean() == doctest::Approx(-0.5 + 2.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("sample means lie in the CLT band") {
    const std::size_t n = 1000000;
    struct Case {
        Distribution d;
        double mean, sd;
    };
    const Case cases[] = {{Distribution::uniform(0, 1), 0.5, 1.0 / std::sqrt(12.0)},
                          {Distribution::gamma(8, 1), 8.0, std::sqrt(8.0)},
                          {Distribution::beta(2, 5), 2.0 / 7.0, std::sqrt(10.0 / (49.0 * 8.0))}};
    std::uint64_t stream = 0;
    for (const auto& c : cases) {
        CounterRng rng(42, stream++);
        const auto x = c.d.sample(rng, n);
        double m = 0.0;
        for (double v : x) m += v;
        m /= n;
        CHECK(std::abs(m - c.mean) <= 4.0 * c.sd / std::sqrt(double(n)));
    }
}

TEST_CASE("samples pass a 99% Kolmogorov-Smirnov test") {
    const std::size_t n = 100000;
    std::uint64_t stream = 0;
    for (const auto& d : zoo()) {
        CounterRng rng(7, stream++);
        const auto x = d.sample(rng, n);
        const double ks = oracle::ks_statistic(x, [&](double t) { return d.cdf(t); });
        CHECK_MESSAGE(ks <= oracle::ks_critical_99(n), d.kind());
    }
}

TEST_CASE("sampling is deterministic per seed and stream") {
    const auto d = Distribution::gamma(0.5, 2.0);
    CounterRng a(9, 3), b(9, 3), c(9, 4);
    const auto xa = d.sample(a, 1000), xb = d.sample(b, 1000), xc = d.sample(c, 1000);
    CHECK(xa == xb);
    CHECK(xa != xc);
}

TEST_CASE("json literals") {
    using nlohmann::json;
    CHECK(distribution_from_json(json::parse(R"({"kind":"gamma","shape":8,"rate":1})")) == Distribution::gamma(8, 1));
    CHECK(distribution_from_json(json::parse(R"({"kind":"genbeta","alpha":2,"beta":5,"a":-0.5,"b":0.5})")) ==
          Distribution::genbeta(2, 5, -0.5, 0.5));
    for (const auto& d : zoo()) {
        json j = d;
        CHECK(distribution_from_json(j) == d);
    }
    CHECK_THROWS_AS(distribution_from_json(json::parse(R"({"kind":"cauchy"})")), ConfigError);
    CHECK_THROWS_AS(distribution_from_json(json::parse(R"({"kind":"beta","alpha":2})")), ConfigError);
}
