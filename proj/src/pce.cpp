#include "bifprob/pce.hpp"

#include <cmath>
#include <string>

#include "bifprob/errors.hpp"
#include "bifprob/quadrature.hpp"

namespace bifprob::pce {
namespace {

struct AffineBeta {
    double alpha, beta, lo, width;
};

AffineBeta germ_shape(const Distribution& germ) {
    if (const auto* u = std::get_if<Uniform>(&germ.params())) return {1.0, 1.0, u->a, u->b - u->a};
    if (const auto* b = std::get_if<BetaDist>(&germ.params())) return {b->alpha, b->beta, 0.0, 1.0};
    if (const auto* g = std::get_if<GenBeta>(&germ.params()))
        return {g->alpha, g->beta, g->a, g->b - g->a};
    throw UnsupportedError("pce: germ must be uniform, beta or genbeta, got " + germ.kind());
}

// Monic recurrence of Beta(alpha, beta) on (0, 1), from the Jacobi
// recurrence on (-1, 1) with a = beta - 1, b = alpha - 1.
void jacobi_recurrence(double alpha, double beta, int n, std::vector<double>& ra,
                       std::vector<double>& rb) {
    const double a = beta - 1.0, b = alpha - 1.0;
    ra.assign(n, 0.0);
    rb.assign(n, 0.0);
    for (int k = 0; k < n; ++k) {
        const double t = 2.0 * k + a + b;
        double at;
        if (k == 0)
            at = (b - a) / (a + b + 2.0);
        else
            at = (b * b - a * a) / (t * (t + 2.0));
        ra[k] = 0.5 * (1.0 + at);
        if (k == 0) {
            rb[k] = 1.0;
        } else if (k == 1) {
            rb[k] = 0.25 * 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
        } else {
            const double kk = k;
            rb[k] = 0.25 * 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) /
                    (t * t * (t + 1.0) * (t - 1.0));
        }
    }
}

std::vector<double> poly_mul(const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

}  // namespace

double OrthoBasis::eval(int n, double x) const {
    if (n < 0 || n > degree) throw DomainError("OrthoBasis::eval: degree out of range");
    // three-term recurrence; the power form loses digits at high degree
    double pm = 0.0, p = 1.0;
    for (int k = 0; k < n; ++k) {
        const double next = ((x - rec_alpha[k]) * p - (k > 0 ? std::sqrt(rec_beta[k]) : 0.0) * pm) /
                            std::sqrt(rec_beta[k + 1]);
        pm = p;
        p = next;
    }
    return p;
}

OrthoBasis make_basis(const Distribution& germ, int degree) {
    if (degree < 0) throw DomainError("pce: degree must be >= 0");
    const AffineBeta sh = germ_shape(germ);
    OrthoBasis basis{germ, degree, {}, {}, {}, {}};
    const int m = std::max(degree + 1, 1) + 64;
    std::vector<double> ra, rb;
    jacobi_recurrence(sh.alpha, sh.beta, m, ra, rb);
    for (int k = 0; k < m; ++k) {
        ra[k] = sh.lo + sh.width * ra[k];
        if (k > 0) rb[k] *= sh.width * sh.width;
    }
    basis.rec_alpha = ra;
    basis.rec_beta = rb;

    // sqrt(b_{n+1}) p_{n+1} = (x - a_n) p_n - sqrt(b_n) p_{n-1}
    basis.power.push_back({1.0});
    std::vector<double> prev;
    for (int n = 0; n < degree; ++n) {
        const auto& cur = basis.power[n];
        std::vector<double> next(cur.size() + 1, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            next[i + 1] += cur[i];
            next[i] -= ra[n] * cur[i];
        }
        if (n > 0) {
            const double sb = std::sqrt(rb[n]);
            for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= sb * prev[i];
        }
        const double sb1 = std::sqrt(rb[n + 1]);
        for (double& v : next) v /= sb1;
        prev = cur;
        basis.power.push_back(std::move(next));
    }
    basis.h.assign(degree + 1, 1.0);
    return basis;
}

double PowerPolynomial::eval(double x) const {
    double v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i];
    return v;
}

int PowerPolynomial::degree() const {
    int d = static_cast<int>(coeffs.size()) - 1;
    while (d > 0 && coeffs[d] == 0.0) --d;
    return std::max(d, 0);
}

PceResult project(const std::function<double(double)>& g, const Distribution& input,
                  const Distribution& germ, int N, int quad_nodes) {
    if (N < 0 || N > 16) throw DomainError("pce: truncation N must lie in [0, 16]");
    OrthoBasis basis = make_basis(germ, N);
    const int nodes = quad_nodes > 0 ? quad_nodes : N + 1;
    std::vector<double> a(basis.rec_alpha.begin(), basis.rec_alpha.begin() + nodes);
    std::vector<double> b(basis.rec_beta.begin(), basis.rec_beta.begin() + nodes);
    if (nodes > static_cast<int>(basis.rec_alpha.size())) {
        basis = make_basis(germ, std::max(N, nodes));
        a.assign(basis.rec_alpha.begin(), basis.rec_alpha.begin() + nodes);
        b.assign(basis.rec_beta.begin(), basis.rec_beta.begin() + nodes);
        basis.power.resize(N + 1);
        basis.h.resize(N + 1);
        basis.degree = N;
    }
    const quad::Rule rule = quad::gauss_from_recurrence(a, b);

    std::vector<double> coeffs(N + 1, 0.0);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double xi = rule.nodes[j];
        const double p = germ.cdf(xi);
        double r;
        if (p <= 0.0)
            r = input.support().lo;
        else if (p >= 1.0)
            r = input.support().hi;
        else
            r = input.quantile(p);
        const double gv = g(r);
        if (!std::isfinite(gv)) throw DomainError("pce: integrand is not finite at a quadrature node");
        for (int n = 0; n <= N; ++n) coeffs[n] += rule.weights[j] * gv * basis.eval(n, xi);
    }
    for (int n = 0; n <= N; ++n) coeffs[n] /= basis.h[n];
    return {coeffs, basis};
}

PowerPolynomial collect_powers(const std::vector<double>& coeffs, const OrthoBasis& basis) {
    if (coeffs.size() > basis.power.size())
        throw DomainError("collect_powers: basis has lower degree than the expansion");
    std::vector<double> out(std::max<std::size_t>(coeffs.size(), 1), 0.0);
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        const auto& pn = basis.power[n];
        for (std::size_t i = 0; i < pn.size(); ++i) out[i] += coeffs[n] * pn[i];
    }
    return {out, basis.germ};
}

std::vector<double> chat_coefficients(const PowerPolynomial& p, int s) {
    if (s < 1) throw DomainError("chat_coefficients: s must be >= 1");
    if (s > kMaxS) {
        throw OverflowGuardError("chat_coefficients: s = " + std::to_string(s) +
                                 " exceeds the scaling guard s <= 12");
    }
    std::vector<double> base(p.coeffs.begin(), p.coeffs.begin() + p.degree() + 1);
    if (base.empty()) base = {0.0};
    if (p.degree() * (s - 1) > kMaxPowerDegree) {
        throw OverflowGuardError("chat_coefficients: degree N(s-1) = " +
                                 std::to_string(p.degree() * (s - 1)) + " exceeds 48");
    }
    std::vector<double> out{1.0};
    for (int k = 1; k < s; ++k) out = poly_mul(out, base);
    for (double c : out) {
        if (!(std::abs(c) <= kChatGuard))
            throw OverflowGuardError("chat_coefficients: |chat_i| exceeds 1e15");
    }
    return out;
}

double mellin_of_pce(const PowerPolynomial& p, int s) {
    const auto chat = chat_coefficients(p, s);
    double sum = 0.0;
    for (std::size_t i = 0; i < chat.size(); ++i) {
        if (chat[i] != 0.0) sum += chat[i] * p.germ.raw_moment(static_cast<int>(i));
    }
    return sum;
}

void to_json(nlohmann::json& j, const PowerPolynomial& p) {
    j = {{"coeffs", p.coeffs}, {"germ", p.germ}};
}

PowerPolynomial power_polynomial_from_json(const nlohmann::json& j) {
    if (!j.contains("coeffs") || !j["coeffs"].is_array() || !j.contains("germ"))
        throw ConfigError("power polynomial needs \"coeffs\" and \"germ\"");
    return {j["coeffs"].get<std::vector<double>>(), distribution_from_json(j["germ"])};
}

}  // namespace bifprob::pce
