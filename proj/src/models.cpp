#include "bifprob/models.hpp"

#include <cmath>
#include <map>

#include "bifprob/errors.hpp"

namespace bifprob::models {

double lorenz_reduced(double r1, double r2) {
    if (r1 == -1.0) throw DomainError("lorenz_reduced: singular at r1 = -1");
    if (!(r2 > 0.0)) throw DomainError("lorenz_reduced: r2 must be positive");
    return r1 / (r2 * (1.0 + r1));
}

double pitchfork_product(double r1, double r2) { return r1 * r2; }

double watt_governor_sign(double beta, double alpha) {
    const double b2 = beta * beta;
    const double al2 = alpha * alpha;
    return -(3.0 + (al2 - 5.0) * b2 + (al2 * al2) * (b2 * b2) * b2);
}

double watt_governor_lyapunov(double beta, double alpha) {
    const double b2 = beta * beta;
    const double a2 = alpha * alpha;
    const double b4 = b2 * b2;
    const double num = alpha * std::pow(beta, 1.5) * (1.0 - b2) * (3.0 + (a2 - 5.0) * b2 + a2 * a2 * b4 * b2);
    const double den = (1.0 - b2 + a2 * b4) * (1.0 - b2 + 4.0 * a2 * b4);
    return -0.5 * num / den;
}

namespace {

double zeta_map(double z) { return z / (1.0 + z); }

std::map<std::string, BifurcationModel> build_registry() {
    std::map<std::string, BifurcationModel> reg;

    reg["lorenz"] = BifurcationModel{
        "lorenz",
        {"zeta", "theta"},
        [](std::span<const double> r) { return lorenz_reduced(r[0], r[1]); },
        Subcritical::WhenNegative,
        kernels::ModelKernel::Lorenz,
        0,
        zeta_map,
        [](const std::vector<Distribution>& in, const DecompositionOptions& opt) {
            // 1/theta analytically, zeta/(1+zeta) through a PCE factor
            const auto res = pce::project(zeta_map, in.at(0), opt.germ, opt.N, opt.quad_nodes);
            mellin::ProductExpression e;
            e.factors.push_back({in.at(1), -1, 1.0, "theta"});
            e.factors.push_back({pce::collect_powers(res.coeffs, res.basis), 1, 1.0, "zeta/(1+zeta)"});
            return e;
        }};

    reg["pitchfork_product"] = BifurcationModel{
        "pitchfork_product",
        {"r1", "r2"},
        [](std::span<const double> r) { return pitchfork_product(r[0], r[1]); },
        Subcritical::WhenNegative,
        kernels::ModelKernel::Pitchfork,
        std::nullopt,
        {},
        [](const std::vector<Distribution>& in, const DecompositionOptions&) {
            mellin::ProductExpression e;
            e.factors.push_back({in.at(0), 1, 1.0, "r1"});
            e.factors.push_back({in.at(1), 1, 1.0, "r2"});
            return e;
        }};

    reg["watt_governor"] = BifurcationModel{
        "watt_governor",
        {"beta", "alpha"},
        [](std::span<const double> r) { return watt_governor_sign(r[0], r[1]); },
        Subcritical::WhenPositive,
        kernels::ModelKernel::WattSign,
        std::nullopt,
        {},
        {}};

    return reg;
}

const std::map<std::string, BifurcationModel>& registry() {
    static const auto reg = build_registry();
    return reg;
}

}  // namespace

const BifurcationModel& model_by_name(const std::string& name) {
    const auto& reg = registry();
    auto it = reg.find(name);
    if (it == reg.end()) throw ConfigError("unknown model \"" + name + "\"");
    return it->second;
}

std::vector<std::string> model_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
}

}  // namespace bifprob::models
