#include "bifprob/unscented.hpp"

#include <cmath>
#include <ostream>

#include "bifprob/errors.hpp"

namespace bifprob::unscented {

SigmaPointSet sigma_points_p3(const std::vector<Distribution>& inputs, std::optional<double> kappa) {
    const std::size_t n = inputs.size();
    if (n == 0) throw DomainError("sigma_points_p3: need at least one input");
    const double nd = static_cast<double>(n);
    const double k = kappa.value_or(3.0 - nd);
    if (!(nd + k > 0.0)) throw DomainError("sigma_points_p3: n + kappa must be positive");

    std::vector<double> mean(n);
    for (std::size_t i = 0; i < n; ++i) mean[i] = inputs[i].mean();
    SigmaPointSet sp;
    sp.precision = 3;
    sp.kappa = k;
    sp.points.push_back(mean);
    sp.weights.push_back(k / (nd + k));
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::sqrt((nd + k) * inputs[i].variance());
        for (double sg : {1.0, -1.0}) {
            auto p = mean;
            p[i] += sg * d;
            sp.points.push_back(std::move(p));
            sp.weights.push_back(1.0 / (2.0 * (nd + k)));
        }
    }
    return sp;
}

SigmaPointSet sigma_points_p5(const std::vector<Distribution>& inputs) {
    const std::size_t n = inputs.size();
    if (n == 0) throw DomainError("sigma_points_p5: need at least one input");
    std::vector<double> mean(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
        mean[i] = inputs[i].mean();
        d[i] = std::sqrt(3.0) * std::sqrt(inputs[i].variance());
    }
    SigmaPointSet sp;
    sp.precision = 5;
    sp.points.push_back(mean);
    for (std::size_t i = 0; i < n; ++i) {
        for (double sg : {1.0, -1.0}) {
            auto p = mean;
            p[i] += sg * d[i];
            sp.points.push_back(std::move(p));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (double si : {1.0, -1.0}) {
                for (double sj : {1.0, -1.0}) {
                    auto p = mean;
                    p[i] += si * d[i];
                    p[j] += sj * d[j];
                    sp.points.push_back(std::move(p));
                }
            }
        }
    }
    return sp;
}

UtResult ut_sign_probability(const models::BifurcationModel& model, const SigmaPointSet& sp) {
    UtResult r;
    r.total = sp.points.size();
    for (const auto& p : sp.points) {
        if (p.size() != model.dim()) throw ConfigError("ut: point dimension does not match model inputs");
        const double v = model.eval(p);
        r.values.push_back(v);
        r.count += model.is_subcritical(v);
    }
    r.probability = r.total ? static_cast<double>(r.count) / static_cast<double>(r.total) : 0.0;
    return r;
}

void UtResult::write_csv(std::ostream& os, const SigmaPointSet& sp, const models::BifurcationModel& model) const {
    for (const auto& name : model.inputs) os << name << ',';
    os << "value,subcritical\n";
    os.precision(17);
    for (std::size_t k = 0; k < values.size(); ++k) {
        for (double x : sp.points[k]) os << x << ',';
        os << values[k] << ',' << (model.is_subcritical(values[k]) ? 1 : 0) << '\n';
    }
}

}  // namespace bifprob::unscented
