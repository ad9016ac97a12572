#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "bifprob/distributions.hpp"
#include "bifprob/mellin.hpp"

namespace bifprob {

namespace models {
struct BifurcationModel;
}

enum class Provenance { MellinExact, MellinPce, MonteCarlo, User };

std::string provenance_name(Provenance p);

/// Raw moments mu_1..mu_n (mu_0 = 1 is implicit).
struct MomentSequence {
    std::vector<double> mu;
    Provenance provenance = Provenance::User;

    int n_moms() const { return static_cast<int>(mu.size()); }
    /// mu_j for j >= 0 with mu_0 = 1.
    double at(int j) const { return j == 0 ? 1.0 : mu.at(j - 1); }
    /// 1, mu_1, ..., mu_n.
    std::vector<double> with_mu0() const;
    /// [[1, mu1], [mu1, mu2]] positive semidefinite (true when fewer than 2 moments).
    bool hankel_ok() const;
};

void to_json(nlohmann::json& j, const MomentSequence& m);
MomentSequence moment_sequence_from_json(const nlohmann::json& j);

namespace moments {

/// mu_{s-1} = mellin_eval(e, s) for s = 2..n_moms+1.
MomentSequence coefficient_moments(const mellin::ProductExpression& e, int n_moms);

/// Sample raw moments of the model coefficient.
MomentSequence mc_moments(const models::BifurcationModel& model, const std::vector<Distribution>& inputs,
                          int n_moms, std::size_t n_samples, std::uint64_t seed);

}  // namespace moments
}  // namespace bifprob
