#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "bifprob/rng.hpp"

namespace bifprob {

struct Uniform {
    double a, b;
};
struct GammaDist {
    double shape, rate;
};
struct BetaDist {
    double alpha, beta;
};
/// Beta(alpha, beta) pushed forward to [a, b] by x -> a + (b - a) x.
struct GenBeta {
    double alpha, beta, a, b;
};
struct Gaussian {
    double mu, sigma;
};
/// Degenerate law concentrated at `value`.
struct PointMass {
    double value;
};

struct Support {
    double lo, hi;  // may be +-infinity
};

/// Immutable parametric univariate law. Construction validates parameters
/// and throws DomainError on violation.
class Distribution {
public:
    using Params = std::variant<Uniform, GammaDist, BetaDist, GenBeta, Gaussian, PointMass>;

    static Distribution uniform(double a, double b);
    static Distribution gamma(double shape, double rate);
    static Distribution beta(double alpha, double beta);
    static Distribution genbeta(double alpha, double beta, double a, double b);
    static Distribution gaussian(double mu, double sigma);
    static Distribution point(double value);

    const Params& params() const { return params_; }
    std::string kind() const;

    double pdf(double x) const;
    double cdf(double x) const;
    /// Inverse CDF; p must lie in (0, 1).
    double quantile(double p) const;

    /// E[X^n] for n >= 0.
    double raw_moment(int n) const;
    /// E[X^k] for any integer k; negative k requires an a.s. positive law and
    /// throws ExistenceError when the moment diverges.
    double power_moment(int k) const;
    /// Mellin transform E[X^(s-1)] at integer s >= 1; requires a.s.
    /// non-negative support (UnsupportedError otherwise).
    double mellin(int s) const;

    double mean() const { return raw_moment(1); }
    double variance() const;
    Support support() const;
    bool nonnegative() const { return support().lo >= 0.0; }
    bool positive_open() const;

    double sample(CounterRng& rng) const;
    std::vector<double> sample(CounterRng& rng, std::size_t n) const;

    bool operator==(const Distribution& o) const;

private:
    explicit Distribution(Params p) : params_(p) {}
    Params params_;
};

void to_json(nlohmann::json& j, const Distribution& d);
void from_json(const nlohmann::json& j, Distribution& d);
Distribution distribution_from_json(const nlohmann::json& j);

}  // namespace bifprob
