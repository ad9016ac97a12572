#include "bifprob/moments.hpp"

#include "bifprob/errors.hpp"
#include "bifprob/models.hpp"
#include "bifprob/montecarlo.hpp"

namespace bifprob {

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::MellinExact:
            return "mellin_exact";
        case Provenance::MellinPce:
            return "mellin_pce";
        case Provenance::MonteCarlo:
            return "monte_carlo";
        case Provenance::User:
            return "user";
    }
    return "user";
}

std::vector<double> MomentSequence::with_mu0() const {
    std::vector<double> v{1.0};
    v.insert(v.end(), mu.begin(), mu.end());
    return v;
}

bool MomentSequence::hankel_ok() const {
    if (mu.size() < 2) return true;
    return mu[1] - mu[0] * mu[0] >= 0.0;
}

void to_json(nlohmann::json& j, const MomentSequence& m) {
    j = {{"moments", m.mu}, {"provenance", provenance_name(m.provenance)}};
}

MomentSequence moment_sequence_from_json(const nlohmann::json& j) {
    MomentSequence m;
    const nlohmann::json* arr = &j;
    if (j.is_object()) {
        if (!j.contains("moments")) throw ConfigError("moment sequence needs \"moments\"");
        arr = &j["moments"];
        const std::string p = j.value("provenance", "user");
        if (p == "mellin_exact")
            m.provenance = Provenance::MellinExact;
        else if (p == "mellin_pce")
            m.provenance = Provenance::MellinPce;
        else if (p == "monte_carlo")
            m.provenance = Provenance::MonteCarlo;
    }
    if (!arr->is_array()) throw ConfigError("moments must be a JSON array of numbers");
    for (const auto& v : *arr) {
        if (!v.is_number()) throw ConfigError("moments must be a JSON array of numbers");
        m.mu.push_back(v.get<double>());
    }
    return m;
}

namespace moments {

MomentSequence coefficient_moments(const mellin::ProductExpression& e, int n_moms) {
    if (n_moms < 1 || n_moms > 10) throw DomainError("coefficient_moments: n_moms must lie in [1, 10]");
    MomentSequence m;
    m.provenance = e.has_pce() ? Provenance::MellinPce : Provenance::MellinExact;
    for (int s = 2; s <= n_moms + 1; ++s) m.mu.push_back(mellin::mellin_eval(e, s));
    return m;
}

MomentSequence mc_moments(const models::BifurcationModel& model, const std::vector<Distribution>& inputs,
                          int n_moms, std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 1000) throw DomainError("mc_moments: n_samples must be >= 1000");
    montecarlo::McOptions opt;
    opt.n_samples = n_samples;
    opt.seed = seed;
    opt.n_moms = n_moms;
    return montecarlo::mc_run(model, inputs, opt).moments;
}

}  // namespace moments
}  // namespace bifprob
