#include <cmath>
#include <vector>

#include "doctest.h"

#include "bifprob/kernels.hpp"
#include "bifprob/models.hpp"
#include "bifprob/rng.hpp"

using namespace bifprob;
using namespace bifprob::kernels;

namespace {

std::vector<double> draws(std::size_t n, double lo, double hi, std::uint64_t stream) {
    CounterRng rng(123, stream);
    std::vector<double> x(n);
    for (double& v : x) v = lo + (hi - lo) * rng.uniform();
    return x;
}

std::vector<Isa> vector_isas() {
    std::vector<Isa> out;
    for (Isa i : {Isa::Avx2, Isa::Neon})
        if (isa_available(i)) out.push_back(i);
    return out;
}

}  // namespace

TEST_CASE("dispatch") {
    CHECK(isa_available(Isa::Scalar));
    MESSAGE("active isa: " << isa_name(active_isa()));
    force_isa(Isa::Scalar);
    CHECK(active_isa() == Isa::Scalar);
    CHECK(&active() == &scalar_table());
    reset_isa();
    for (Isa i : {Isa::Avx2, Isa::Neon})
        if (!isa_available(i)) CHECK_THROWS_AS(force_isa(i), std::invalid_argument);
}

TEST_CASE("scalar kernels against direct loops") {
    const auto& t = scalar_table();
    const auto x = draws(1001, -2.0, 2.0, 0);
    std::vector<double> ps(6, 0.0);
    t.power_sums(x.data(), x.size(), 6, ps.data());
    for (int k = 1; k <= 6; ++k) {
        double s = 0.0;
        for (double v : x) s += std::pow(v, k);
        CHECK(ps[k - 1] == doctest::Approx(s).epsilon(1e-12));
    }
    std::size_t below = 0;
    for (double v : x) below += v < 0.5;
    CHECK(t.count_strict(x.data(), x.size(), 0.5, true) == below);
    CHECK(t.count_strict(x.data(), x.size(), 0.5, false) == std::count_if(x.begin(), x.end(), [](double v) { return v > 0.5; }));
    const double c[] = {0.1163, 0.521, -0.1739};
    std::vector<double> y(x.size());
    t.polyval(c, 2, x.data(), x.size(), y.data());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == doctest::Approx(c[0] + x[i] * (c[1] + x[i] * c[2])));
}

TEST_CASE("scalar model kernels match the model functions exactly") {
    const auto a = draws(777, 0.0, 1.0, 1), b = draws(777, 0.5, 3.0, 2);
    std::vector<double> out(a.size());
    scalar_table().model_eval(ModelKernel::Lorenz, a.data(), b.data(), a.size(), out.data());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(out[i] == doctest::Approx(models::lorenz_reduced(a[i], b[i])).epsilon(1e-15));
    scalar_table().model_eval(ModelKernel::Pitchfork, a.data(), b.data(), a.size(), out.data());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(out[i] == models::pitchfork_product(a[i], b[i]));
    scalar_table().model_eval(ModelKernel::WattSign, a.data(), b.data(), a.size(), out.data());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(out[i] == models::watt_governor_sign(a[i], b[i]));
}

TEST_CASE("vector kernels are equivalent to the scalar reference") {
    const auto& ref = scalar_table();
    for (Isa isa : vector_isas()) {
        const auto& t = table_for(isa);
        for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 17u, 1000u, 16384u}) {
            const auto x = draws(n, -1.5, 1.5, n);
            const auto z = draws(n, 0.1, 4.0, n + 100);
            for (int K : {1, 2, 5, 10, kMaxPowerSums}) {
                std::vector<double> r1(K, 0.0), r2(K, 0.0);
                ref.power_sums(x.data(), n, K, r1.data());
                t.power_sums(x.data(), n, K, r2.data());
                for (int k = 0; k < K; ++k) {
                    double scale = 0.0;
                    for (double v : x) scale += std::pow(std::abs(v), k + 1);
                    CHECK(std::abs(r1[k] - r2[k]) <= 1e-13 * std::max(scale, 1.0));
                }
            }
            for (double thr : {-0.3, 0.0, 0.7})
                for (bool below : {true, false}) CHECK(ref.count_strict(x.data(), n, thr, below) == t.count_strict(x.data(), n, thr, below));
            const double c[] = {0.3, -1.2, 0.5, 2.0, -0.25};
            std::vector<double> y1(n), y2(n);
            ref.polyval(c, 4, x.data(), n, y1.data());
            t.polyval(c, 4, x.data(), n, y2.data());
            for (std::size_t i = 0; i < n; ++i) {
                double mag = 0.0;
                for (int k = 4; k >= 0; --k) mag = mag * std::abs(x[i]) + std::abs(c[k]);
                CHECK(std::abs(y1[i] - y2[i]) <= 1e-15 * mag * 8);
            }
            for (ModelKernel m : {ModelKernel::Lorenz, ModelKernel::Pitchfork, ModelKernel::WattSign}) {
                ref.model_eval(m, x.data(), z.data(), n, y1.data());
                t.model_eval(m, x.data(), z.data(), n, y2.data());
                CHECK(y1 == y2);
            }
        }
    }
}

TEST_CASE("power sums accumulate into the output") {
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
        if (!isa_available(isa)) continue;
        const double x[] = {1.0, 2.0, 3.0};
        double out[2] = {10.0, 100.0};
        table_for(isa).power_sums(x, 3, 2, out);
        CHECK(out[0] == 16.0);
        CHECK(out[1] == 114.0);
    }
}
