#include "bifprob/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include "bifprob/errors.hpp"

namespace bifprob::quad {
namespace {

// QUADPACK 15-point Kronrod nodes (positive half) with embedded 7-point Gauss.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const Integrand& f, double a, double b, int& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    evals += 15;
    const double value = resk * h;
    double err = std::abs((resk - resg) * h);
    if (!std::isfinite(value)) err = std::numeric_limits<double>::infinity();
    return {a, b, value, err};
}

Result adaptive_finite(const Integrand& f, const std::vector<double>& cuts, const Tolerance& tol) {
    Result out;
    std::priority_queue<Segment> heap;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        Segment s = gk15(f, cuts[i], cuts[i + 1], out.evaluations);
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }
    int intervals = static_cast<int>(heap.size());
    while (!heap.empty()) {
        if (total_err <= std::max(tol.abs, tol.rel * std::abs(total))) {
            out.converged = true;
            break;
        }
        if (intervals >= tol.max_intervals) break;
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval at machine resolution: accept its contribution as is.
            heap.pop();
            total_err -= worst.error;
            worst.error = 0.0;
            heap.push(worst);
            if (heap.top().error == 0.0) {
                out.converged = total_err <= std::max(tol.abs, tol.rel * std::abs(total)) * 10.0;
                break;
            }
            continue;
        }
        heap.pop();
        Segment left = gk15(f, worst.a, mid, out.evaluations);
        Segment right = gk15(f, mid, worst.b, out.evaluations);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }
    if (heap.empty()) out.converged = true;
    // Re-sum to limit drift from incremental updates.
    double sum = 0.0, err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    out.value = sum;
    out.error = err;
    return out;
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, Tolerance tol) {
    return integrate(f, a, b, {}, tol);
}

Result integrate(const Integrand& f, double a, double b, const std::vector<double>& breakpoints,
                 Tolerance tol) {
    if (a == b) return {0.0, 0.0, 0, true};
    if (a > b) {
        Result r = integrate(f, b, a, breakpoints, tol);
        r.value = -r.value;
        return r;
    }
    const bool lo_inf = std::isinf(a);
    const bool hi_inf = std::isinf(b);
    if (!lo_inf && !hi_inf) {
        std::vector<double> cuts{a};
        for (double p : breakpoints)
            if (p > a && p < b) cuts.push_back(p);
        cuts.push_back(b);
        std::sort(cuts.begin(), cuts.end());
        return adaptive_finite(f, cuts, tol);
    }
    // Map infinite ranges to finite ones; breakpoints are mapped along.
    if (!lo_inf) {
        // x = a + t / (1 - t), t in [0, 1)
        Integrand g = [&](double t) {
            if (t >= 1.0) return 0.0;
            const double u = 1.0 - t;
            const double v = f(a + t / u) / (u * u);
            return std::isfinite(v) ? v : 0.0;
        };
        std::vector<double> cuts{0.0};
        for (double p : breakpoints)
            if (p > a) cuts.push_back((p - a) / (1.0 + p - a));
        cuts.push_back(1.0);
        std::sort(cuts.begin(), cuts.end());
        return adaptive_finite(g, cuts, tol);
    }
    if (!hi_inf) {
        // x = b - t / (1 - t)
        Integrand g = [&](double t) {
            if (t >= 1.0) return 0.0;
            const double u = 1.0 - t;
            const double v = f(b - t / u) / (u * u);
            return std::isfinite(v) ? v : 0.0;
        };
        std::vector<double> cuts{0.0};
        for (double p : breakpoints)
            if (p < b) cuts.push_back((b - p) / (1.0 + b - p));
        cuts.push_back(1.0);
        std::sort(cuts.begin(), cuts.end());
        return adaptive_finite(g, cuts, tol);
    }
    // Whole line: split at 0 (or the first breakpoint).
    const double mid = breakpoints.empty() ? 0.0 : breakpoints.front();
    std::vector<double> left, right;
    for (double p : breakpoints) (p < mid ? left : right).push_back(p);
    Result r1 = integrate(f, -kInf, mid, left, tol);
    Result r2 = integrate(f, mid, kInf, right, tol);
    return {r1.value + r2.value, r1.error + r2.error, r1.evaluations + r2.evaluations,
            r1.converged && r2.converged};
}

double integrate_or_throw(const Integrand& f, double a, double b, Tolerance tol) {
    Result r = integrate(f, a, b, tol);
    if (!r.converged || !std::isfinite(r.value)) {
        throw ConvergenceError("adaptive quadrature did not converge (estimate " +
                               std::to_string(r.value) + ", error " + std::to_string(r.error) + ")");
    }
    return r.value;
}

Rule gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // final derivative at converged x
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

Rule gauss_from_recurrence(const std::vector<double>& alpha, const std::vector<double>& beta) {
    const auto n = static_cast<Eigen::Index>(alpha.size());
    if (n < 1 || beta.size() != alpha.size()) throw DomainError("gauss_from_recurrence: bad sizes");
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
    for (Eigen::Index i = 0; i < n; ++i) diag[i] = alpha[i];
    for (Eigen::Index i = 1; i < n; ++i) sub[i - 1] = std::sqrt(beta[i]);
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = alpha[0];
        rule.weights[0] = beta[0];
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    for (Eigen::Index i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()[i];
        const double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = beta[0] * v0 * v0;
    }
    return rule;
}

}  // namespace bifprob::quad
