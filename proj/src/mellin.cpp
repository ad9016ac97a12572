#include "bifprob/mellin.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "bifprob/errors.hpp"
#include "bifprob/quadrature.hpp"
#include "bifprob/specfun.hpp"

namespace bifprob::mellin {

bool ProductExpression::has_pce() const {
    return std::any_of(factors.begin(), factors.end(), [](const auto& f) { return f.is_pce(); });
}

double factor_mellin(const MellinFactor& f, int s) {
    if (s < 1) throw DomainError("mellin: s must be an integer >= 1");
    if (f.exponent == 0) throw DomainError("mellin: factor exponent must be nonzero");
    if (!(f.scale > 0.0)) throw DomainError("mellin: factor scale must be positive");
    const int k = f.exponent * (s - 1);
    const double scale_part = std::pow(f.scale, s - 1);

    if (const auto* p = std::get_if<pce::PowerPolynomial>(&f.base)) {
        if (k < 0) {
            throw UnsupportedError("mellin: negative powers of a PCE factor '" + f.label +
                                   "' are not available");
        }
        return scale_part * pce::mellin_of_pce(*p, k + 1);
    }
    const auto& d = std::get<Distribution>(f.base);
    if (f.exponent != 1 && !d.nonnegative()) {
        throw UnsupportedError("mellin: factor '" + f.label +
                               "' with exponent != 1 needs an a.s. positive base");
    }
    return scale_part * d.power_moment(k);
}

double mellin_eval(const ProductExpression& e, int s) {
    if (s < 1) throw DomainError("mellin: s must be an integer >= 1");
    if (e.global_sign != 1 && e.global_sign != -1) throw DomainError("mellin: global_sign must be +-1");
    double v = (e.global_sign < 0 && (s - 1) % 2 == 1) ? -1.0 : 1.0;
    for (const auto& f : e.factors) v *= factor_mellin(f, s);
    return v;
}

double PiecewisePdf::mass() const {
    double m = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        m += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
    return m;
}

std::vector<double> PiecewisePdf::cdf() const {
    std::vector<double> c(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i)
        c[i] = c[i - 1] + 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
    if (!c.empty() && c.back() > 0.0)
        for (double& v : c) v /= c.back();
    return c;
}

double PiecewisePdf::eval(double x) const {
    if (grid.empty() || x < grid.front() || x > grid.back()) return 0.0;
    auto it = std::upper_bound(grid.begin(), grid.end(), x);
    if (it == grid.end()) return values.back();
    const std::size_t i = static_cast<std::size_t>(it - grid.begin());
    const double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
    return values[i - 1] + t * (values[i] - values[i - 1]);
}

void PiecewisePdf::write_csv(std::ostream& os) const {
    os << "x,density\n";
    os.precision(17);
    for (std::size_t i = 0; i < grid.size(); ++i) os << grid[i] << ',' << values[i] << '\n';
}

void PiecewisePdf::write_cdf_csv(std::ostream& os) const {
    const auto c = cdf();
    os << "x,cumulative\n";
    os.precision(17);
    for (std::size_t i = 0; i < grid.size(); ++i) os << grid[i] << ',' << c[i] << '\n';
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = a;
        return v;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / (n - 1);
    return v;
}

namespace {

struct TailBounds {
    double xlo, xhi;
};

TailBounds g_bounds(const Distribution& g) {
    Support s = g.support();
    double lo = s.lo, hi = s.hi;
    if (std::holds_alternative<GammaDist>(g.params())) {
        lo = g.quantile(1e-12);
        hi = g.quantile(1.0 - 1e-12);
    }
    return {std::max(lo, 1e-300), hi};
}

}  // namespace

double product_density(const Distribution& f, const Distribution& g, double z) {
    if (!g.nonnegative()) throw UnsupportedError("convolution: second factor must be a.s. positive");
    const TailBounds tb = g_bounds(g);
    const Support fs = f.support();

    // x ranges where z / x lies inside the support of f
    double xa = tb.xlo, xb = tb.xhi;
    if (z > 0.0) {
        if (fs.hi <= 0.0) return 0.0;
        if (std::isfinite(fs.hi)) xa = std::max(xa, z / fs.hi);
        if (fs.lo > 0.0) xb = std::min(xb, z / fs.lo);
    } else if (z < 0.0) {
        if (fs.lo >= 0.0) return 0.0;
        if (std::isfinite(fs.lo)) xa = std::max(xa, z / fs.lo);
        if (fs.hi < 0.0) xb = std::min(xb, z / fs.hi);
    } else {
        if (fs.lo > 0.0 || fs.hi < 0.0) return 0.0;
    }
    if (!(xa < xb)) return 0.0;

    // x = e^t: rho(z) = int rho_f(z e^-t) rho_g(e^t) dt
    auto integrand = [&](double t) {
        const double x = std::exp(t);
        return f.pdf(z / x) * g.pdf(x);
    };
    const double ta = std::log(xa), tb_ = std::log(xb);
    std::vector<double> bps;
    const double mode = std::log(std::max(g.mean(), 1e-300));
    if (mode > ta && mode < tb_) bps.push_back(mode);
    const quad::Tolerance tol{1e-12, 1e-10, 4000};
    const auto r = quad::integrate(integrand, ta, tb_, bps, tol);
    if (!r.converged && r.error > 1e-9)
        throw ConvergenceError("convolution: quadrature did not converge at z = " + std::to_string(z));
    return r.value;
}

ConvolutionResult product_pdf_convolution(const Distribution& f, const Distribution& g,
                                          const std::vector<double>& grid) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("convolution: grid must be strictly increasing");
    ConvolutionResult out;
    out.pdf.grid = grid;
    out.pdf.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out.pdf.values[i] = product_density(f, g, grid[i]);
    if (!grid.empty()) {
        out.pdf.lo = grid.front();
        out.pdf.hi = grid.back();
    }

    const quad::Tolerance tol{1e-10, 1e-8, 400};
    auto dens = [&](double z) { return product_density(f, g, z); };
    const Support fs = f.support();
    if (fs.hi > 0.0) {
        out.mass_h1 = quad::integrate(dens, 0.0, std::isfinite(fs.hi) && std::isfinite(g.support().hi)
                                                      ? fs.hi * g.support().hi
                                                      : quad::kInf,
                                      tol)
                          .value;
    }
    if (fs.lo < 0.0) {
        out.mass_h2 = quad::integrate(dens, std::isfinite(fs.lo) && std::isfinite(g.support().hi)
                                                ? fs.lo * g.support().hi
                                                : -quad::kInf,
                                      0.0, tol)
                          .value;
    }
    return out;
}

std::vector<double> default_product_grid(const Distribution& f, const Distribution& g,
                                         std::uint64_t seed, std::size_t n) {
    CounterRng rf(seed, 0), rg(seed, 1);
    const std::size_t pilot = 10000;
    std::vector<double> z(pilot);
    for (std::size_t i = 0; i < pilot; ++i) z[i] = f.sample(rf) * g.sample(rg);
    std::sort(z.begin(), z.end());
    const auto at = [&](double p) {
        return z[std::min(pilot - 1, static_cast<std::size_t>(p * static_cast<double>(pilot)))];
    };
    return linspace(at(1e-9), at(1.0 - 1e-9), n);
}

double UniformGammaProduct::pdf(double x) {
    const double c = 1.0 / (4.0 * specfun::gamma(3.0));
    if (x > 0.0) return c * (1.0 + x / 3.0) * std::exp(-x / 3.0);
    return c * (1.0 - x) * std::exp(x);
}

double UniformGammaProduct::cdf(double x) {
    const double c = 1.0 / (4.0 * specfun::gamma(3.0));
    if (x < 0.0) return c * (2.0 - x) * std::exp(x);
    return c * ((-6.0 - x) * std::exp(-x / 3.0) + 8.0);
}

double gamma_gamma_pdf(double alpha, double beta, double eps, double x) {
    if (!(alpha > 0.0 && beta > 0.0)) throw DomainError("gamma_gamma_pdf: alpha, beta must be > 0");
    if (!(eps >= 0.0)) throw DomainError("gamma_gamma_pdf: eps must be >= 0");
    if (!(x > 0.0)) throw DomainError("gamma_gamma_pdf: x must be > 0");
    const double b = beta + eps;
    const double k = specfun::bessel_k(b - alpha, 2.0 * std::sqrt(x));
    const double logp = std::log(2.0) + 0.5 * (alpha + b - 2.0) * std::log(x) -
                        specfun::log_gamma(alpha) - specfun::log_gamma(b);
    return std::exp(logp) * k;
}

double perturbation_sensitivity(double alpha, double beta, double x, double eps_step) {
    if (!(eps_step > 0.0 && eps_step <= 0.1))
        throw DomainError("perturbation_sensitivity: eps_step must lie in (0, 0.1]");
    return (gamma_gamma_pdf(alpha, beta, eps_step, x) - gamma_gamma_pdf(alpha, beta, 0.0, x)) /
           eps_step;
}

}  // namespace bifprob::mellin
