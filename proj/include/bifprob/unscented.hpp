#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "bifprob/distributions.hpp"
#include "bifprob/models.hpp"

namespace bifprob::unscented {

struct SigmaPointSet {
    std::vector<std::vector<double>> points;
    int precision = 3;
    double kappa = 0.0;
    /// Mean/covariance weights of the precision-3 scheme; empty for precision 5.
    std::vector<double> weights;
};

/// 2n + 1 points mean, mean +- sqrt((n + kappa) var_i) e_i.
SigmaPointSet sigma_points_p3(const std::vector<Distribution>& inputs, std::optional<double> kappa = {});

/// 2n^2 + 1 points: center, axial mean +- d_i e_i and paired mean +- d_i e_i +- d_j e_j,
/// d_i = sqrt(3) std_i.
SigmaPointSet sigma_points_p5(const std::vector<Distribution>& inputs);

struct UtResult {
    std::size_t count = 0;
    std::size_t total = 0;
    double probability = 0.0;
    std::vector<double> values;

    void write_csv(std::ostream& os, const SigmaPointSet& sp, const models::BifurcationModel& model) const;
};

/// Unweighted fraction of propagated points that are strictly subcritical.
UtResult ut_sign_probability(const models::BifurcationModel& model, const SigmaPointSet& sp);

}  // namespace bifprob::unscented
