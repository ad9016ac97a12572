#include "bifprob/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bifprob/errors.hpp"

namespace bifprob::opt {

NelderMeadResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                             const NelderMeadOptions& opt) {
    const std::size_t n = x0.size();
    if (n == 0) throw DomainError("nelder_mead: empty parameter vector");
    constexpr double rho = 1.0, chi = 2.0, psi = 0.5, sigma = 0.5;

    std::vector<std::vector<double>> sim(n + 1, x0);
    for (std::size_t k = 0; k < n; ++k) sim[k + 1][k] = x0[k] != 0.0 ? 1.05 * x0[k] : 0.00025;

    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };
    std::vector<double> fs(n + 1);
    for (std::size_t k = 0; k <= n; ++k) fs[k] = eval(sim[k]);

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fs[a] < fs[b]; });
        std::vector<std::vector<double>> s2(n + 1);
        std::vector<double> f2(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            s2[k] = sim[order[k]];
            f2[k] = fs[order[k]];
        }
        sim.swap(s2);
        fs.swap(f2);
    };
    sort_simplex();

    bool converged = false;
    std::vector<double> xbar(n), xr(n), xe(n), xc(n);
    while (evals < opt.max_evals) {
        double xspread = 0.0, fspread = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            fspread = std::max(fspread, std::abs(fs[k] - fs[0]));
            for (std::size_t i = 0; i < n; ++i) xspread = std::max(xspread, std::abs(sim[k][i] - sim[0][i]));
        }
        if (xspread <= opt.xtol && fspread <= opt.ftol) {
            converged = true;
            break;
        }

        std::fill(xbar.begin(), xbar.end(), 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) xbar[i] += sim[k][i];
        for (double& v : xbar) v /= static_cast<double>(n);

        for (std::size_t i = 0; i < n; ++i) xr[i] = (1 + rho) * xbar[i] - rho * sim[n][i];
        const double fr = eval(xr);
        bool shrink = false;
        if (fr < fs[0]) {
            for (std::size_t i = 0; i < n; ++i) xe[i] = (1 + rho * chi) * xbar[i] - rho * chi * sim[n][i];
            const double fe = eval(xe);
            if (fe < fr) {
                sim[n] = xe;
                fs[n] = fe;
            } else {
                sim[n] = xr;
                fs[n] = fr;
            }
        } else if (fr < fs[n - 1]) {
            sim[n] = xr;
            fs[n] = fr;
        } else if (fr < fs[n]) {
            for (std::size_t i = 0; i < n; ++i) xc[i] = (1 + psi * rho) * xbar[i] - psi * rho * sim[n][i];
            const double fc = eval(xc);
            if (fc <= fr) {
                sim[n] = xc;
                fs[n] = fc;
            } else {
                shrink = true;
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) xc[i] = (1 - psi) * xbar[i] + psi * sim[n][i];
            const double fc = eval(xc);
            if (fc < fs[n]) {
                sim[n] = xc;
                fs[n] = fc;
            } else {
                shrink = true;
            }
        }
        if (shrink) {
            for (std::size_t k = 1; k <= n; ++k) {
                for (std::size_t i = 0; i < n; ++i) sim[k][i] = sim[0][i] + sigma * (sim[k][i] - sim[0][i]);
                fs[k] = eval(sim[k]);
            }
        }
        sort_simplex();
    }
    return {sim[0], fs[0], evals, converged};
}

}  // namespace bifprob::opt
