#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "bifprob/mellin.hpp"
#include "bifprob/moments.hpp"

namespace bifprob::reconstruct {

struct GaussianMixture {
    std::vector<double> pi, mu, sigma;

    int k() const { return static_cast<int>(pi.size()); }
    double pdf(double y) const;
    /// Throws DomainError when the parameters violate the mixture invariants.
    void validate() const;
};

/// sum_i pi_i sum_{k even} C(n,k) mu_i^(n-k) sigma_i^k (k-1)!!
double gmm_moment(const GaussianMixture& gm, int n);
double gmm_cdf(const GaussianMixture& gm, double y);

struct WeightMatrix {
    std::vector<double> diag;
};

WeightMatrix default_weight_matrix(const MomentSequence& m);

/// Weighted quadratic form of the moment residuals mu_j - m_j(gm).
double gmm_objective(const MomentSequence& m, const GaussianMixture& gm, const WeightMatrix& W);

/// Natural parameters eta = (pi_1..pi_{k-1}, mu_1..mu_k, sigma_1..sigma_k).
std::vector<double> gmm_default_init(int k, double lo, double hi);
GaussianMixture mixture_from_eta(const std::vector<double>& eta, int k);

struct GmmOptions {
    int max_evals = 10000;
    int restarts = 5;
    std::uint64_t seed = 1;
    /// Scale of the restart perturbation of the means (support width).
    double width = 1.0;
};

struct GmmRestart {
    GaussianMixture mixture;
    double objective = 0.0;
    int evaluations = 0;
    bool converged = false;
};

struct GmmFit {
    GaussianMixture mixture;
    double objective = 0.0;
    int evaluations = 0;
    bool converged = false;
    std::size_t best_restart = 0;
    std::vector<GmmRestart> restarts;
};

/// Generalized method of moments by Nelder-Mead over softmax weights, means and
/// log standard deviations. Restart 0 starts from `init`; restarts 1.. perturb
/// it with seeded Gaussian noise. The best objective wins.
GmmFit fit_gmm(const MomentSequence& m, int k, const WeightMatrix& W, const std::vector<double>& init,
               const GmmOptions& opt = {});

void to_json(nlohmann::json& j, const GaussianMixture& gm);
GaussianMixture mixture_from_json(const nlohmann::json& j);

struct Approximant {
    mellin::PiecewisePdf pdf;
    double min_value = 0.0;
    /// Trapezoid mass of the negative part (as a positive number).
    double negative_mass = 0.0;
    /// Trapezoid mass before any clipping.
    double mass = 0.0;
    bool clipped = false;
};

struct ApproxOptions {
    std::size_t grid_points = 512;
    /// Clip negative lobes and renormalize.
    bool clip = false;
};

/// Legendre approximant of degree n on [a, b]; needs mu_1..mu_n.
Approximant legendre_pdf_approx(const MomentSequence& m, double a, double b, int n,
                                const ApproxOptions& opt = {});

/// Monic orthogonal approximant with uniform weight on [a, b], n_p = 0, c_w = 1.
Approximant monic_pdf_approx(const MomentSequence& m, double a, double b, int n,
                             const ApproxOptions& opt = {});

/// Transformed-moments approximant on (0, b) of order N; needs mu_1..mu_N.
Approximant transformed_moments_pdf_approx(const MomentSequence& m, double b, int N,
                                           const ApproxOptions& opt = {});

/// Pointwise evaluators behind the approximants.
double legendre_density(const MomentSequence& m, double a, double b, int n, double y);
double transformed_moments_density(const MomentSequence& m, double b, int N, double y);

}  // namespace bifprob::reconstruct
