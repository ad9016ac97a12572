#include "bifprob/distributions.hpp"

#include <algorithm>
#include <cstring>
#include <cmath>
#include <limits>
#include <numbers>

#include "bifprob/errors.hpp"
#include "bifprob/quadrature.hpp"
#include "bifprob/specfun.hpp"

namespace bifprob {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double beta_pdf(double alpha, double beta, double y) {
    if (y < 0.0 || y > 1.0) return 0.0;
    if (y == 0.0) return alpha < 1.0 ? kInf : (alpha == 1.0 ? beta : 0.0);
    if (y == 1.0) return beta < 1.0 ? kInf : (beta == 1.0 ? alpha : 0.0);
    const double log_norm =
        specfun::log_gamma(alpha + beta) - specfun::log_gamma(alpha) - specfun::log_gamma(beta);
    return std::exp(log_norm + (alpha - 1.0) * std::log(y) + (beta - 1.0) * std::log1p(-y));
}

double beta_raw_moment(double alpha, double beta, int n) {
    double m = 1.0;
    for (int j = 0; j < n; ++j) m *= (alpha + j) / (alpha + beta + j);
    return m;
}

double sample_gamma_unit(double shape, CounterRng& rng) {
    if (shape < 1.0) {
        const double g = sample_gamma_unit(shape + 1.0, rng);
        return g * std::pow(rng.uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double z = rng.normal();
        double v = 1.0 + c * z;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = rng.uniform();
        const double z2 = z * z;
        if (u < 1.0 - 0.0331 * z2 * z2) return d * v;
        if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

}  // namespace

Distribution Distribution::uniform(double a, double b) {
    require(std::isfinite(a) && std::isfinite(b) && a < b, "Uniform: requires a < b");
    return Distribution(Uniform{a, b});
}

Distribution Distribution::gamma(double shape, double rate) {
    require(shape > 0.0 && rate > 0.0 && std::isfinite(shape) && std::isfinite(rate),
            "Gamma: requires shape > 0 and rate > 0");
    return Distribution(GammaDist{shape, rate});
}

Distribution Distribution::beta(double alpha, double beta) {
    require(alpha > 0.0 && beta > 0.0 && std::isfinite(alpha) && std::isfinite(beta),
            "Beta: requires alpha > 0 and beta > 0");
    return Distribution(BetaDist{alpha, beta});
}

Distribution Distribution::genbeta(double alpha, double beta, double a, double b) {
    require(alpha > 0.0 && beta > 0.0, "GenBeta: requires alpha > 0 and beta > 0");
    require(std::isfinite(a) && std::isfinite(b) && a < b, "GenBeta: requires a < b");
    return Distribution(GenBeta{alpha, beta, a, b});
}

Distribution Distribution::gaussian(double mu, double sigma) {
    require(std::isfinite(mu) && sigma > 0.0 && std::isfinite(sigma),
            "Gaussian: requires sigma > 0");
    return Distribution(Gaussian{mu, sigma});
}

Distribution Distribution::point(double value) {
    require(std::isfinite(value), "PointMass: value must be finite");
    return Distribution(PointMass{value});
}

std::string Distribution::kind() const {
    return std::visit(overloaded{[](const Uniform&) { return "uniform"; },
                                 [](const GammaDist&) { return "gamma"; },
                                 [](const BetaDist&) { return "beta"; },
                                 [](const GenBeta&) { return "genbeta"; },
                                 [](const Gaussian&) { return "gaussian"; },
                                 [](const PointMass&) { return "point"; }},
                      params_);
}

double Distribution::pdf(double x) const {
    return std::visit(
        overloaded{
            [x](const Uniform& u) { return (x >= u.a && x <= u.b) ? 1.0 / (u.b - u.a) : 0.0; },
            [x](const GammaDist& g) {
                if (x < 0.0) return 0.0;
                if (x == 0.0) return g.shape < 1.0 ? kInf : (g.shape == 1.0 ? g.rate : 0.0);
                return std::exp(g.shape * std::log(g.rate) + (g.shape - 1.0) * std::log(x) -
                                g.rate * x - specfun::log_gamma(g.shape));
            },
            [x](const BetaDist& b) { return beta_pdf(b.alpha, b.beta, x); },
            [x](const GenBeta& b) {
                const double w = b.b - b.a;
                return beta_pdf(b.alpha, b.beta, (x - b.a) / w) / w;
            },
            [x](const Gaussian& g) {
                const double z = (x - g.mu) / g.sigma;
                return std::exp(-0.5 * z * z) / (g.sigma * std::sqrt(2.0 * std::numbers::pi));
            },
            [](const PointMass&) { return 0.0; }},
        params_);
}

double Distribution::cdf(double x) const {
    return std::visit(
        overloaded{
            [x](const Uniform& u) { return std::clamp((x - u.a) / (u.b - u.a), 0.0, 1.0); },
            [x](const GammaDist& g) {
                return x <= 0.0 ? 0.0 : specfun::reg_inc_gamma(g.shape, g.rate * x);
            },
            [x](const BetaDist& b) {
                return specfun::reg_inc_beta(b.alpha, b.beta, std::clamp(x, 0.0, 1.0));
            },
            [x](const GenBeta& b) {
                const double y = std::clamp((x - b.a) / (b.b - b.a), 0.0, 1.0);
                return specfun::reg_inc_beta(b.alpha, b.beta, y);
            },
            [x](const Gaussian& g) { return specfun::normal_cdf((x - g.mu) / g.sigma); },
            [x](const PointMass& p) { return x >= p.value ? 1.0 : 0.0; }},
        params_);
}

double Distribution::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
    if (const auto* u = std::get_if<Uniform>(&params_)) return u->a + p * (u->b - u->a);
    if (const auto* pm = std::get_if<PointMass>(&params_)) return pm->value;

    Support s = support();
    double lo = s.lo, hi = s.hi;
    if (std::isinf(lo) || std::isinf(hi)) {
        const double m = mean();
        const double sd = std::sqrt(variance());
        if (std::isinf(lo)) {
            lo = m - sd;
            while (cdf(lo) > p) lo -= 2.0 * (m - lo);
        }
        if (std::isinf(hi)) {
            hi = m + sd;
            while (cdf(hi) < p) hi += 2.0 * (hi - m);
        }
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) break;
        if (cdf(mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double Distribution::raw_moment(int n) const {
    if (n < 0) throw DomainError("raw_moment: n must be non-negative");
    if (n == 0) return 1.0;
    return std::visit(
        overloaded{
            [n](const Uniform& u) {
                // (b^{n+1} - a^{n+1}) / ((n+1)(b-a)) without cancellation
                double s = 0.0;
                for (int k = 0; k <= n; ++k) s += std::pow(u.a, k) * std::pow(u.b, n - k);
                return s / (n + 1);
            },
            [n](const GammaDist& g) {
                double m = 1.0;
                for (int j = 0; j < n; ++j) m *= (g.shape + j) / g.rate;
                return m;
            },
            [n](const BetaDist& b) { return beta_raw_moment(b.alpha, b.beta, n); },
            [n](const GenBeta& b) {
                const double w = b.b - b.a;
                double s = 0.0;
                for (int k = 0; k <= n; ++k) {
                    s += specfun::binomial(n, k) * std::pow(b.a, n - k) * std::pow(w, k) *
                         beta_raw_moment(b.alpha, b.beta, k);
                }
                return s;
            },
            [n](const Gaussian& g) {
                double s = 0.0;
                for (int k = 0; k <= n; k += 2) {
                    s += specfun::binomial(n, k) * std::pow(g.mu, n - k) * std::pow(g.sigma, k) *
                         specfun::normal_even_moment(k);
                }
                return s;
            },
            [n](const PointMass& p) { return std::pow(p.value, n); }},
        params_);
}

double Distribution::power_moment(int k) const {
    if (k >= 0) return raw_moment(k);
    const int m = -k;
    auto diverges = [&](const char* why) -> double {
        throw ExistenceError(std::string("power_moment: E[X^") + std::to_string(k) + "] " + why);
    };
    return std::visit(
        overloaded{
            [&](const Uniform& u) -> double {
                if (u.a < 0.0) throw UnsupportedError("power_moment: negative powers need a > 0");
                if (u.a == 0.0) return diverges("diverges for Uniform(0, b)");
                if (m == 1) return std::log(u.b / u.a) / (u.b - u.a);
                return (std::pow(u.b, k + 1) - std::pow(u.a, k + 1)) / ((k + 1) * (u.b - u.a));
            },
            [&](const GammaDist& g) -> double {
                if (!(g.shape + k > 0.0)) return diverges("diverges (requires shape + k > 0)");
                double r = 1.0;
                for (int j = 1; j <= m; ++j) r *= g.rate / (g.shape - j);
                return r;
            },
            [&](const BetaDist& b) -> double {
                if (!(b.alpha + k > 0.0)) return diverges("diverges (requires alpha + k > 0)");
                double r = 1.0;
                for (int j = 1; j <= m; ++j) r *= (b.alpha + b.beta - j) / (b.alpha - j);
                return r;
            },
            [&](const GenBeta& b) -> double {
                if (b.a < 0.0) throw UnsupportedError("power_moment: negative powers need a >= 0");
                if (b.a == 0.0) {
                    if (!(b.alpha + k > 0.0)) return diverges("diverges (requires alpha + k > 0)");
                    double r = std::pow(b.b, k);
                    for (int j = 1; j <= m; ++j) r *= (b.alpha + b.beta - j) / (b.alpha - j);
                    return r;
                }
                const Distribution self = *this;
                return quad::integrate_or_throw(
                    [&](double x) { return std::pow(x, k) * self.pdf(x); }, b.a, b.b);
            },
            [&](const Gaussian&) -> double {
                throw UnsupportedError("power_moment: negative powers of a Gaussian are undefined");
            },
            [&](const PointMass& p) -> double {
                if (p.value == 0.0) return diverges("diverges at a point mass in 0");
                return std::pow(p.value, k);
            }},
        params_);
}

double Distribution::mellin(int s) const {
    if (s < 1) throw DomainError("mellin: s must be an integer >= 1");
    if (!nonnegative()) {
        throw UnsupportedError("mellin: " + kind() +
                               " takes negative values; sign-decompose before transforming");
    }
    return power_moment(s - 1);
}

double Distribution::variance() const {
    return std::visit(
        overloaded{[](const Uniform& u) { return (u.b - u.a) * (u.b - u.a) / 12.0; },
                   [](const GammaDist& g) { return g.shape / (g.rate * g.rate); },
                   [](const BetaDist& b) {
                       const double s = b.alpha + b.beta;
                       return b.alpha * b.beta / (s * s * (s + 1.0));
                   },
                   [](const GenBeta& b) {
                       const double s = b.alpha + b.beta;
                       const double w = b.b - b.a;
                       return w * w * b.alpha * b.beta / (s * s * (s + 1.0));
                   },
                   [](const Gaussian& g) { return g.sigma * g.sigma; },
                   [](const PointMass&) { return 0.0; }},
        params_);
}

Support Distribution::support() const {
    return std::visit(overloaded{[](const Uniform& u) { return Support{u.a, u.b}; },
                                 [](const GammaDist&) { return Support{0.0, kInf}; },
                                 [](const BetaDist&) { return Support{0.0, 1.0}; },
                                 [](const GenBeta& b) { return Support{b.a, b.b}; },
                                 [](const Gaussian&) { return Support{-kInf, kInf}; },
                                 [](const PointMass& p) { return Support{p.value, p.value}; }},
                      params_);
}

bool Distribution::positive_open() const {
    if (const auto* p = std::get_if<PointMass>(&params_)) return p->value > 0.0;
    return support().lo >= 0.0;
}

double Distribution::sample(CounterRng& rng) const {
    return std::visit(
        overloaded{[&](const Uniform& u) { return u.a + (u.b - u.a) * rng.uniform(); },
                   [&](const GammaDist& g) { return sample_gamma_unit(g.shape, rng) / g.rate; },
                   [&](const BetaDist& b) {
                       const double x = sample_gamma_unit(b.alpha, rng);
                       const double y = sample_gamma_unit(b.beta, rng);
                       return x / (x + y);
                   },
                   [&](const GenBeta& b) {
                       const double x = sample_gamma_unit(b.alpha, rng);
                       const double y = sample_gamma_unit(b.beta, rng);
                       return b.a + (b.b - b.a) * (x / (x + y));
                   },
                   [&](const Gaussian& g) { return g.mu + g.sigma * rng.normal(); },
                   [](const PointMass& p) { return p.value; }},
        params_);
}

std::vector<double> Distribution::sample(CounterRng& rng, std::size_t n) const {
    if (n < 1) throw DomainError("sample: n must be >= 1");
    std::vector<double> out(n);
    for (auto& v : out) v = sample(rng);
    return out;
}

bool Distribution::operator==(const Distribution& o) const {
    if (params_.index() != o.params_.index()) return false;
    return std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            const T& b = std::get<T>(o.params_);
            return std::memcmp(&a, &b, sizeof(T)) == 0;
        },
        params_);
}

void to_json(nlohmann::json& j, const Distribution& d) {
    std::visit(overloaded{[&](const Uniform& u) {
                              j = {{"kind", "uniform"}, {"a", u.a}, {"b", u.b}};
                          },
                          [&](const GammaDist& g) {
                              j = {{"kind", "gamma"}, {"shape", g.shape}, {"rate", g.rate}};
                          },
                          [&](const BetaDist& b) {
                              j = {{"kind", "beta"}, {"alpha", b.alpha}, {"beta", b.beta}};
                          },
                          [&](const GenBeta& b) {
                              j = {{"kind", "genbeta"}, {"alpha", b.alpha}, {"beta", b.beta},
                                   {"a", b.a},          {"b", b.b}};
                          },
                          [&](const Gaussian& g) {
                              j = {{"kind", "gaussian"}, {"mu", g.mu}, {"sigma", g.sigma}};
                          },
                          [&](const PointMass& p) {
                              j = {{"kind", "point"}, {"value", p.value}};
                          }},
               d.params());
}

Distribution distribution_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        throw ConfigError("distribution literal needs a string field \"kind\"");
    }
    const std::string kind = j["kind"].get<std::string>();
    auto num = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_number()) {
            throw ConfigError("distribution \"" + kind + "\" needs numeric field \"" + key + "\"");
        }
        return j[key].get<double>();
    };
    try {
        if (kind == "uniform") return Distribution::uniform(num("a"), num("b"));
        if (kind == "gamma")
            return Distribution::gamma(num("shape"), j.contains("rate") ? num("rate") : 1.0);
        if (kind == "beta") return Distribution::beta(num("alpha"), num("beta"));
        if (kind == "genbeta")
            return Distribution::genbeta(num("alpha"), num("beta"), num("a"), num("b"));
        if (kind == "gaussian") return Distribution::gaussian(num("mu"), num("sigma"));
        if (kind == "point") return Distribution::point(num("value"));
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid distribution parameters: ") + e.what());
    }
    throw ConfigError("unknown distribution kind \"" + kind + "\"");
}

void from_json(const nlohmann::json& j, Distribution& d) { d = distribution_from_json(j); }

}  // namespace bifprob
