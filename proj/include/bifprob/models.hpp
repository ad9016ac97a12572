#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bifprob/distributions.hpp"
#include "bifprob/kernels.hpp"
#include "bifprob/mellin.hpp"

namespace bifprob::models {

enum class Subcritical { WhenPositive, WhenNegative };

/// Options for building the Mellin decomposition of a model.
struct DecompositionOptions {
    int N = 2;
    int quad_nodes = 0;
    Distribution germ = Distribution::uniform(0.0, 1.0);
};

struct BifurcationModel {
    std::string name;
    std::vector<std::string> inputs;
    std::function<double(std::span<const double>)> eval;
    Subcritical subcritical_when;
    std::optional<kernels::ModelKernel> kernel;
    /// Input expanded by a PCE in the decomposition, and the map applied to it.
    std::optional<std::size_t> pce_input;
    std::function<double(double)> pce_function;
    /// Empty when the coefficient has no product structure.
    std::function<mellin::ProductExpression(const std::vector<Distribution>&,
                                            const DecompositionOptions&)>
        decompose;

    std::size_t dim() const { return inputs.size(); }
    bool is_subcritical(double v) const {
        return subcritical_when == Subcritical::WhenPositive ? v > 0.0 : v < 0.0;
    }
};

/// X = r1 / (r2 (1 + r1)).
double lorenz_reduced(double r1, double r2);
double pitchfork_product(double r1, double r2);
/// s(beta, alpha) = -(3 + (alpha^2 - 5) beta^2 + alpha^4 beta^6).
double watt_governor_sign(double beta, double alpha);
/// First Lyapunov coefficient of the Watt governor up to the positive factor
/// depending on the critical parameter.
double watt_governor_lyapunov(double beta, double alpha);

const BifurcationModel& model_by_name(const std::string& name);
std::vector<std::string> model_names();

}  // namespace bifprob::models
