#pragma once

#include <functional>
#include <vector>

namespace bifprob::opt {

struct NelderMeadOptions {
    int max_evals = 10000;
    double xtol = 1e-12;
    double ftol = 1e-20;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int evaluations = 0;
    bool converged = false;
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Downhill simplex minimization. The initial simplex perturbs each nonzero
/// coordinate by 5% and each zero coordinate by 2.5e-4.
NelderMeadResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                             const NelderMeadOptions& opt = {});

}  // namespace bifprob::opt
