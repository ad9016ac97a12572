#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bifprob/distributions.hpp"

namespace bifprob {

struct MethodParams {
    int N = 2;
    int n_moms = 5;
    int k = 2;
    int quad_nodes = 0;
    std::size_t n_samples = 1000000;
    std::uint64_t seed = 1;
    std::optional<Support> support;
    /// Approximant degree; defaults to n_moms.
    std::optional<int> degree;
    int precision = 3;
    std::optional<double> kappa;
    int restarts = 5;
    int max_evals = 10000;
    std::string approximant = "legendre";
    bool clip = false;
    /// User-supplied moments (fit-gmm / reconstruct without a model pipeline).
    std::vector<double> moments;
    std::size_t grid_points = 2048;
    unsigned workers = 0;
};

struct ExperimentConfig {
    std::string name;
    std::string model;
    /// Ordered as the model's declared inputs.
    std::vector<std::pair<std::string, Distribution>> inputs;
    std::string method;
    MethodParams params;
    std::vector<double> eval_cdf;
    std::string output_dir;

    std::vector<Distribution> input_distributions() const;
};

const std::vector<std::string>& method_names();

/// Parses and validates; throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& c);

}  // namespace bifprob
