#include "bifprob/reconstruct.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <thread>

#include "bifprob/errors.hpp"
#include "bifprob/nelder_mead.hpp"
#include "bifprob/rng.hpp"
#include "bifprob/specfun.hpp"

namespace bifprob::reconstruct {

double GaussianMixture::pdf(double y) const {
    double v = 0.0;
    for (int i = 0; i < k(); ++i) {
        const double z = (y - mu[i]) / sigma[i];
        v += pi[i] * std::exp(-0.5 * z * z) / (sigma[i] * std::sqrt(2.0 * M_PI));
    }
    return v;
}

void GaussianMixture::validate() const {
    if (pi.empty() || pi.size() != mu.size() || pi.size() != sigma.size())
        throw DomainError("mixture: pi, mu, sigma must have equal nonzero length");
    double s = 0.0;
    for (int i = 0; i < k(); ++i) {
        if (!(pi[i] >= 0.0 && pi[i] <= 1.0)) throw DomainError("mixture: pi must lie in [0, 1]");
        if (!(sigma[i] > 0.0)) throw DomainError("mixture: sigma must be positive");
        s += pi[i];
    }
    if (std::abs(s - 1.0) > 1e-9) throw DomainError("mixture: pi must sum to 1");
}

double gmm_moment(const GaussianMixture& gm, int n) {
    if (n < 0 || n > 20) throw DomainError("gmm_moment: n must lie in [0, 20]");
    double total = 0.0;
    for (int i = 0; i < gm.k(); ++i) {
        double m = 0.0;
        for (int k = 0; k <= n; k += 2) {
            m += specfun::binomial(n, k) * std::pow(gm.mu[i], n - k) * std::pow(gm.sigma[i], k) *
                 specfun::normal_even_moment(k);
        }
        total += gm.pi[i] * m;
    }
    return total;
}

double gmm_cdf(const GaussianMixture& gm, double y) {
    double v = 0.0;
    for (int i = 0; i < gm.k(); ++i) v += gm.pi[i] * specfun::normal_cdf((y - gm.mu[i]) / gm.sigma[i]);
    return std::clamp(v, 0.0, 1.0);
}

WeightMatrix default_weight_matrix(const MomentSequence& m) {
    WeightMatrix W;
    for (double v : m.mu) W.diag.push_back(std::abs(v) > 1e-12 ? 1.0 / std::abs(v) : 1.0);
    return W;
}

double gmm_objective(const MomentSequence& m, const GaussianMixture& gm, const WeightMatrix& W) {
    double q = 0.0;
    for (int j = 1; j <= m.n_moms(); ++j) {
        const double r = m.mu[j - 1] - gmm_moment(gm, j);
        q += W.diag[j - 1] * r * r;
    }
    return q;
}

std::vector<double> gmm_default_init(int k, double lo, double hi) {
    if (k < 1) throw DomainError("gmm: k must be >= 1");
    if (!(hi > lo)) throw DomainError("gmm: support must satisfy lo < hi");
    const double w = hi - lo;
    std::vector<double> eta(k - 1, 1.0 / k);
    for (int i = 0; i < k; ++i) eta.push_back(k == 1 ? lo + 0.5 * w : lo + w * (0.1 + 0.8 * i / (k - 1)));
    for (int i = 0; i < k; ++i) eta.push_back(w / 4.0);
    return eta;
}

GaussianMixture mixture_from_eta(const std::vector<double>& eta, int k) {
    if (static_cast<int>(eta.size()) != 3 * k - 1) throw DomainError("gmm: eta must have 3k - 1 entries");
    GaussianMixture gm;
    double s = 0.0;
    for (int i = 0; i < k - 1; ++i) {
        gm.pi.push_back(eta[i]);
        s += eta[i];
    }
    gm.pi.push_back(1.0 - s);
    gm.mu.assign(eta.begin() + (k - 1), eta.begin() + (2 * k - 1));
    gm.sigma.assign(eta.begin() + (2 * k - 1), eta.end());
    gm.validate();
    return gm;
}

namespace {

// x = (logits of components 2..k relative to component 1, means, log sigma)
GaussianMixture unpack(const std::vector<double>& x, int k) {
    GaussianMixture gm;
    std::vector<double> z(k, 0.0);
    for (int i = 1; i < k; ++i) z[i] = x[i - 1];
    const double zmax = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double& v : z) {
        v = std::exp(v - zmax);
        s += v;
    }
    for (double v : z) gm.pi.push_back(v / s);
    gm.mu.assign(x.begin() + (k - 1), x.begin() + (2 * k - 1));
    for (int i = 0; i < k; ++i) gm.sigma.push_back(std::exp(x[2 * k - 1 + i]));
    return gm;
}

std::vector<double> pack(const GaussianMixture& gm) {
    const int k = gm.k();
    std::vector<double> x;
    for (int i = 1; i < k; ++i) x.push_back(std::log(gm.pi[i] / gm.pi[0]));
    x.insert(x.end(), gm.mu.begin(), gm.mu.end());
    for (double s : gm.sigma) x.push_back(std::log(s));
    return x;
}

}  // namespace

GmmFit fit_gmm(const MomentSequence& m, int k, const WeightMatrix& W, const std::vector<double>& init,
               const GmmOptions& opt) {
    if (k < 1) throw DomainError("fit_gmm: k must be >= 1");
    if (m.n_moms() < 3 * k - 1)
        throw DomainError("fit_gmm: need at least 3k - 1 moments for k components");
    if (static_cast<int>(W.diag.size()) != m.n_moms()) throw DomainError("fit_gmm: weight size mismatch");
    for (double w : W.diag)
        if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("fit_gmm: weights must be finite and positive");
    if (opt.restarts < 1) throw DomainError("fit_gmm: restarts must be >= 1");

    const GaussianMixture g0 = mixture_from_eta(init, k);
    for (double p : g0.pi)
        if (!(p > 0.0)) throw DomainError("fit_gmm: initial weights must be positive");
    const std::vector<double> x0 = pack(g0);

    std::vector<double> scale(x0.size(), 1.0);
    for (int i = 0; i < k; ++i) scale[k - 1 + i] = opt.width;

    auto objective = [&](const std::vector<double>& x) { return gmm_objective(m, unpack(x, k), W); };

    GmmFit fit;
    fit.restarts.resize(opt.restarts);
    auto run = [&](int r) {
        std::vector<double> x = x0;
        if (r > 0) {
            CounterRng rng(opt.seed, static_cast<std::uint64_t>(r));
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += 0.1 * rng.normal() * scale[i];
        }
        opt::NelderMeadOptions nm;
        nm.max_evals = opt.max_evals;
        const auto res = opt::nelder_mead(objective, x, nm);
        fit.restarts[r] = {unpack(res.x, k), res.f, res.evaluations, res.converged};
    };
    std::vector<std::thread> pool;
    for (int r = 0; r < opt.restarts; ++r) pool.emplace_back(run, r);
    for (auto& t : pool) t.join();

    for (std::size_t r = 0; r < fit.restarts.size(); ++r) {
        fit.evaluations += fit.restarts[r].evaluations;
        if (fit.restarts[r].objective < fit.restarts[fit.best_restart].objective) fit.best_restart = r;
    }
    const auto& best = fit.restarts[fit.best_restart];
    fit.mixture = best.mixture;
    fit.objective = best.objective;
    fit.converged = best.converged;
    return fit;
}

void to_json(nlohmann::json& j, const GaussianMixture& gm) {
    j = {{"pi", gm.pi}, {"mu", gm.mu}, {"sigma", gm.sigma}};
}

GaussianMixture mixture_from_json(const nlohmann::json& j) {
    try {
        GaussianMixture gm{j.at("pi").get<std::vector<double>>(), j.at("mu").get<std::vector<double>>(),
                           j.at("sigma").get<std::vector<double>>()};
        gm.validate();
        return gm;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("mixture literal: ") + e.what());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("mixture literal: ") + e.what());
    }
}

namespace {

void require_moments(const MomentSequence& m, int n, const char* who) {
    if (m.n_moms() < n)
        throw DomainError(std::string(who) + ": needs " + std::to_string(n) + " moments, got " +
                          std::to_string(m.n_moms()));
}

Approximant finish(std::vector<double> grid, std::vector<double> values, const ApproxOptions& opt) {
    Approximant a;
    a.pdf.grid = std::move(grid);
    a.pdf.values = std::move(values);
    a.pdf.lo = a.pdf.grid.front();
    a.pdf.hi = a.pdf.grid.back();
    a.min_value = *std::min_element(a.pdf.values.begin(), a.pdf.values.end());
    a.mass = a.pdf.mass();
    mellin::PiecewisePdf neg = a.pdf;
    for (double& v : neg.values) v = std::max(-v, 0.0);
    a.negative_mass = neg.mass();
    if (opt.clip) {
        for (double& v : a.pdf.values) v = std::max(v, 0.0);
        const double mass = a.pdf.mass();
        if (mass > 0.0)
            for (double& v : a.pdf.values) v /= mass;
        a.clipped = true;
    }
    return a;
}

// Coefficients a_k with rho(y) = sum_k a_k P_k(t(y)), t = (2y - (a+b)) / (b-a).
std::vector<double> legendre_coefficients(const MomentSequence& m, double a, double b, int n) {
    // extended precision: the power expansion cancels heavily off the origin
    using ld = long double;
    const ld c1 = 2.0L / (ld(b) - a), c0 = -(ld(a) + b) / (ld(b) - a);
    // power coefficients in y of P_k(c1 y + c0)
    std::vector<std::vector<ld>> P{{1.0L}, {c0, c1}};
    for (int k = 1; k < n; ++k) {
        std::vector<ld> next(k + 2, 0.0L);
        for (int i = 0; i <= k; ++i) {
            next[i] += (2.0L * k + 1.0L) * c0 * P[k][i];
            next[i + 1] += (2.0L * k + 1.0L) * c1 * P[k][i];
        }
        for (int i = 0; i < k; ++i) next[i] -= k * P[k - 1][i];
        for (ld& v : next) v /= (k + 1.0L);
        P.push_back(std::move(next));
    }
    std::vector<double> coef(n + 1);
    for (int k = 0; k <= n; ++k) {
        ld e = 0.0L;
        for (int j = 0; j <= k; ++j) e += P[k][j] * m.at(j);
        coef[k] = static_cast<double>((2.0L * k + 1.0L) / (ld(b) - a) * e);
    }
    return coef;
}

double legendre_series(const std::vector<double>& coef, double t) {
    double p0 = 1.0, p1 = t;
    double v = coef[0];
    if (coef.size() > 1) v += coef[1] * t;
    for (std::size_t k = 1; k + 1 < coef.size(); ++k) {
        const double p2 = ((2.0 * k + 1.0) * t * p1 - k * p0) / (k + 1.0);
        v += coef[k + 1] * p2;
        p0 = p1;
        p1 = p2;
    }
    return v;
}

}  // namespace

double legendre_density(const MomentSequence& m, double a, double b, int n, double y) {
    if (!(a < b)) throw DomainError("legendre approximant: requires a < b");
    if (n < 0) throw DomainError("legendre approximant: degree must be >= 0");
    require_moments(m, n, "legendre approximant");
    if (y < a || y > b) return 0.0;
    return legendre_series(legendre_coefficients(m, a, b, n), (2.0 * y - (a + b)) / (b - a));
}

Approximant legendre_pdf_approx(const MomentSequence& m, double a, double b, int n, const ApproxOptions& opt) {
    if (!(a < b)) throw DomainError("legendre approximant: requires a < b");
    if (n < 0) throw DomainError("legendre approximant: degree must be >= 0");
    require_moments(m, n, "legendre approximant");
    const auto coef = legendre_coefficients(m, a, b, n);
    auto grid = mellin::linspace(a, b, opt.grid_points);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = legendre_series(coef, (2.0 * grid[i] - (a + b)) / (b - a));
    return finish(std::move(grid), std::move(v), opt);
}

Approximant monic_pdf_approx(const MomentSequence& m, double a, double b, int n, const ApproxOptions& opt) {
    if (!(a < b)) throw DomainError("monic approximant: requires a < b");
    if (n < 0) throw DomainError("monic approximant: degree must be >= 0");
    if (n > 12) throw DomainError("monic approximant: Gram matrix is ill-conditioned for n > 12");
    require_moments(m, n, "monic approximant");

    // moments of the uniform weight on [a, b]
    std::vector<double> nu(2 * n + 1);
    for (int j = 0; j <= 2 * n; ++j) {
        double s = 0.0;
        for (int k = 0; k <= j; ++k) s += std::pow(a, k) * std::pow(b, j - k);
        nu[j] = s / (j + 1);
    }
    std::vector<std::vector<double>> pis;
    std::vector<double> lambda;
    for (int i = 1; i <= n; ++i) {
        Eigen::MatrixXd H(i, i);
        Eigen::VectorXd h(i);
        for (int r = 0; r < i; ++r) {
            for (int c = 0; c < i; ++c) H(r, c) = nu[r + c];
            h(r) = -nu[r + i];
        }
        const Eigen::VectorXd d = H.partialPivLu().solve(h);
        std::vector<double> p(d.data(), d.data() + i);
        p.push_back(1.0);
        double norm = 0.0, num = 0.0;
        for (int r = 0; r <= i; ++r) {
            num += p[r] * m.at(r);
            for (int c = 0; c <= i; ++c) norm += p[r] * p[c] * nu[r + c];
        }
        lambda.push_back(num / norm);
        pis.push_back(std::move(p));
    }
    const double w = 1.0 / (b - a);
    auto grid = mellin::linspace(a, b, opt.grid_points);
    std::vector<double> v(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double s = 1.0;
        for (int i = 0; i < n; ++i) {
            double pv = 0.0;
            for (std::size_t r = pis[i].size(); r-- > 0;) pv = pv * grid[g] + pis[i][r];
            s += lambda[i] * pv;
        }
        v[g] = w * s;
    }
    return finish(std::move(grid), std::move(v), opt);
}

double transformed_moments_density(const MomentSequence& m, double b, int N, double y) {
    if (!(b > 0.0)) throw DomainError("transformed moments: b must be positive");
    if (N < 0) throw DomainError("transformed moments: N must be >= 0");
    require_moments(m, N, "transformed moments");
    if (y < 0.0 || y > b) return 0.0;
    const int al = std::min(N, static_cast<int>(std::floor(N * y / b)));
    const double lg = specfun::log_gamma(N + 2.0) - specfun::log_gamma(al + 1.0);
    double s = 0.0;
    for (int k = 0; k <= N - al; ++k) {
        const double c = std::exp(lg - specfun::log_gamma(k + 1.0) - specfun::log_gamma(N - al - k + 1.0) -
                                  (k + al + 1) * std::log(b));
        s += ((k % 2) ? -c : c) * m.at(k + al);
    }
    return s;
}

Approximant transformed_moments_pdf_approx(const MomentSequence& m, double b, int N, const ApproxOptions& opt) {
    if (!(b > 0.0)) throw DomainError("transformed moments: b must be positive");
    require_moments(m, N, "transformed moments");
    auto grid = mellin::linspace(0.0, b, opt.grid_points);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = transformed_moments_density(m, b, N, grid[i]);
    return finish(std::move(grid), std::move(v), opt);
}

}  // namespace bifprob::reconstruct
