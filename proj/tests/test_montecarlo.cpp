#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"

#include "bifprob/errors.hpp"
#include "bifprob/kernels.hpp"
#include "bifprob/mellin.hpp"
#include "bifprob/models.hpp"
#include "bifprob/montecarlo.hpp"

using namespace bifprob;
using namespace bifprob::montecarlo;

namespace {

const std::vector<Distribution> kUniformGamma{Distribution::uniform(-1, 3), Distribution::gamma(3, 1)};

McResult run(const char* model, const std::vector<Distribution>& in, std::size_t n, std::uint64_t seed,
             unsigned workers = 0) {
    McOptions opt;
    opt.n_samples = n;
    opt.seed = seed;
    opt.workers = workers;
    return mc_run(models::model_by_name(model), in, opt);
}

std::string dump(const McResult& r) {
    std::ostringstream os;
    os.precision(17);
    os << r.n_samples << ' ' << r.seed << ' ' << r.subcritical_count << ' ' << r.sign_probability << '\n';
    for (double v : r.moments.mu) os << v << ' ';
    for (double v : r.moment_stderr) os << v << ' ';
    r.write_histogram_csv(os);
    r.write_ecdf_csv(os);
    return os.str();
}

}  // namespace

TEST_CASE("uniform-gamma product sign probability") {
    const auto r = run("pitchfork_product", kUniformGamma, 1000000, 1);
    const double se = std::sqrt(0.25 * 0.75 / 1e6);
    CHECK(std::abs(r.sign_probability - 0.24936) <= 3 * se);
    CHECK(std::abs(r.sign_probability - 0.25) <= 3 * se);
    CHECK(r.sign_probability == double(r.subcritical_count) / 1e6);
}

TEST_CASE("Watt governor sign probability") {
    const auto r = run("watt_governor", {Distribution::uniform(0, 1), Distribution::uniform(0, 1)}, 100000, 1);
    const double se = std::sqrt(0.1834 * (1 - 0.1834) / 1e5);
    CHECK(std::abs(r.sign_probability - 0.1834) <= 3 * se);
}

TEST_CASE("result invariants") {
    const auto r = run("lorenz", {Distribution::genbeta(2, 5, -0.5, 0.5), Distribution::gamma(8, 1)}, 50000, 3);
    CHECK(std::accumulate(r.histogram.counts.begin(), r.histogram.counts.end(), std::uint64_t{0}) == r.n_samples);
    CHECK(r.histogram.counts.size() == 100);
    CHECK(r.histogram.edges.size() == 101);
    CHECK(r.sign_probability >= 0.0);
    CHECK(r.sign_probability <= 1.0);
    CHECK(r.sorted.size() == r.n_samples);
    CHECK(std::is_sorted(r.sorted.begin(), r.sorted.end()));
    CHECK(r.ecdf(r.sorted.front() - 1) == 0.0);
    CHECK(r.ecdf(r.sorted.back()) == 1.0);
    CHECK(r.moments.provenance == Provenance::MonteCarlo);
}

TEST_CASE("point-mass inputs give a degenerate sign probability") {
    CHECK(run("pitchfork_product", {Distribution::point(-1), Distribution::point(2)}, 1000, 1).sign_probability == 1.0);
    CHECK(run("pitchfork_product", {Distribution::point(1), Distribution::point(2)}, 1000, 1).sign_probability == 0.0);
    const auto z = run("watt_governor", {Distribution::point(1), Distribution::point(1)}, 1000, 1);
    CHECK(z.subcritical_count == 0);
}

TEST_CASE("reruns are byte-identical and independent of the worker count") {
    const std::vector<Distribution> in{Distribution::uniform(4, 6), Distribution::gamma(8, 1)};
    const auto a = dump(run("lorenz", in, 200000, 5, 1));
    CHECK(dump(run("lorenz", in, 200000, 5, 1)) == a);
    CHECK(dump(run("lorenz", in, 200000, 5, 3)) == a);
    CHECK(dump(run("lorenz", in, 200000, 5, 8)) == a);
    CHECK(dump(run("lorenz", in, 200000, 6, 1)) != a);
}

TEST_CASE("scalar and vector kernels give the same run") {
    const std::vector<Distribution> in{Distribution::uniform(0, 1), Distribution::uniform(0.6, 1)};
    kernels::force_isa(kernels::Isa::Scalar);
    const auto s = run("watt_governor", in, 100000, 2);
    kernels::reset_isa();
    const auto v = run("watt_governor", in, 100000, 2);
    CHECK(s.subcritical_count == v.subcritical_count);
    CHECK(s.sorted == v.sorted);
    for (std::size_t j = 0; j < s.moments.mu.size(); ++j)
        CHECK(v.moments.mu[j] == doctest::Approx(s.moments.mu[j]).epsilon(1e-12));
}

TEST_CASE("empirical CDF lies in the 99% KS band of the closed-form uniform-gamma CDF") {
    const auto r = run("pitchfork_product", kUniformGamma, 100000, 11);
    const double ks = oracle::ks_statistic(r.sorted, mellin::UniformGammaProduct::cdf);
    CHECK(ks <= oracle::ks_critical_99(r.n_samples));
    for (double y : {-2.0, 0.0, 1.0, 5.0}) CHECK(std::abs(r.ecdf(y) - mellin::UniformGammaProduct::cdf(y)) <= ks + 1e-12);
}

TEST_CASE("pilot support covers the central mass") {
    const auto s = pilot_support(models::model_by_name("pitchfork_product"), kUniformGamma, 1);
    CHECK(s.lo < -1.0);
    CHECK(s.hi > 10.0);
    const auto again = pilot_support(models::model_by_name("pitchfork_product"), kUniformGamma, 1);
    CHECK(s.lo == again.lo);
    CHECK(s.hi == again.hi);
}

TEST_CASE("csv outputs") {
    const auto r = run("pitchfork_product", kUniformGamma, 5000, 1);
    std::ostringstream h, e;
    r.write_histogram_csv(h);
    r.write_ecdf_csv(e, 10);
    CHECK(h.str().rfind("x,density\n", 0) == 0);
    CHECK(e.str().rfind("x,cumulative\n", 0) == 0);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(run("pitchfork_product", kUniformGamma, 0, 1), DomainError);
    CHECK_THROWS_AS(run("pitchfork_product", {Distribution::uniform(0, 1)}, 100, 1), ConfigError);
}
