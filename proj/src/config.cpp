#include "bifprob/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "bifprob/errors.hpp"
#include "bifprob/models.hpp"

namespace bifprob {

const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names{"analytic", "mellin_pce_gmm", "polynomial_reconstruct",
                                                "unscented", "monte_carlo"};
    return names;
}

std::vector<Distribution> ExperimentConfig::input_distributions() const {
    std::vector<Distribution> out;
    for (const auto& [name, d] : inputs) out.push_back(d);
    return out;
}

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
    }
}

template <class T>
T get(const nlohmann::json& j, const char* key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("field \"" + std::string(key) + "\" in " + where + " has the wrong type");
    }
}

int get_int(const nlohmann::json& j, const char* key, int lo, int hi) {
    if (!j[key].is_number_integer()) throw ConfigError(std::string("params.") + key + " must be an integer");
    const auto v = j[key].get<long long>();
    if (v < lo || v > hi) {
        throw ConfigError(std::string("params.") + key + " must lie in [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    }
    return static_cast<int>(v);
}

MethodParams parse_params(const nlohmann::json& j) {
    MethodParams p;
    if (j.is_null()) return p;
    if (!j.is_object()) throw ConfigError("\"params\" must be an object");
    reject_unknown(j,
                   {"N", "n_moms", "k", "quad_nodes", "n_samples", "seed", "support", "degree", "precision",
                    "kappa", "restarts", "max_evals", "approximant", "clip", "moments", "grid_points", "workers"},
                   "params");
    if (j.contains("N")) p.N = get_int(j, "N", 0, 16);
    if (j.contains("n_moms")) p.n_moms = get_int(j, "n_moms", 1, 10);
    if (j.contains("k")) p.k = get_int(j, "k", 1, 6);
    if (j.contains("quad_nodes")) p.quad_nodes = get_int(j, "quad_nodes", 0, 200);
    if (j.contains("n_samples")) {
        if (!j["n_samples"].is_number_unsigned()) throw ConfigError("params.n_samples must be a non-negative integer");
        p.n_samples = j["n_samples"].get<std::size_t>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("params.seed must be a non-negative integer");
        p.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("support")) {
        const auto s = get<std::vector<double>>(j, "support", "params");
        if (s.size() != 2 || !(s[0] < s[1])) throw ConfigError("params.support must be [lo, hi] with lo < hi");
        p.support = Support{s[0], s[1]};
    }
    if (j.contains("degree")) p.degree = get_int(j, "degree", 0, 40);
    if (j.contains("precision")) {
        p.precision = get_int(j, "precision", 3, 5);
        if (p.precision != 3 && p.precision != 5) throw ConfigError("params.precision must be 3 or 5");
    }
    if (j.contains("kappa")) p.kappa = get<double>(j, "kappa", "params");
    if (j.contains("restarts")) p.restarts = get_int(j, "restarts", 1, 100);
    if (j.contains("max_evals")) p.max_evals = get_int(j, "max_evals", 10, 10000000);
    if (j.contains("approximant")) {
        p.approximant = get<std::string>(j, "approximant", "params");
        if (p.approximant != "legendre" && p.approximant != "monic" && p.approximant != "transformed_moments")
            throw ConfigError("params.approximant must be legendre, monic or transformed_moments");
    }
    if (j.contains("clip")) p.clip = get<bool>(j, "clip", "params");
    if (j.contains("moments")) p.moments = get<std::vector<double>>(j, "moments", "params");
    if (j.contains("grid_points")) p.grid_points = static_cast<std::size_t>(get_int(j, "grid_points", 2, 1 << 20));
    if (j.contains("workers")) p.workers = static_cast<unsigned>(get_int(j, "workers", 0, 1024));
    return p;
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j, {"name", "model", "inputs", "method", "params", "eval_cdf", "output_dir"}, "config");
    ExperimentConfig c;
    c.name = j.value("name", "experiment");
    if (!j.contains("method")) throw ConfigError("config needs \"method\"");
    c.method = get<std::string>(j, "method", "config");
    const auto& mn = method_names();
    if (std::find(mn.begin(), mn.end(), c.method) == mn.end())
        throw ConfigError("unknown method \"" + c.method + "\"");
    c.params = parse_params(j.value("params", nlohmann::json()));
    if (j.contains("eval_cdf")) c.eval_cdf = get<std::vector<double>>(j, "eval_cdf", "config");
    c.output_dir = j.value("output_dir", "");

    if (j.contains("model")) {
        c.model = get<std::string>(j, "model", "config");
        const auto& model = models::model_by_name(c.model);
        if (!j.contains("inputs") || !j["inputs"].is_object())
            throw ConfigError("config needs an \"inputs\" object for model \"" + c.model + "\"");
        const auto& in = j["inputs"];
        for (const auto& name : model.inputs) {
            if (!in.contains(name))
                throw ConfigError("model \"" + c.model + "\" needs input \"" + name + "\"");
            c.inputs.emplace_back(name, distribution_from_json(in[name]));
        }
        for (auto it = in.begin(); it != in.end(); ++it) {
            if (std::find(model.inputs.begin(), model.inputs.end(), it.key()) == model.inputs.end())
                throw ConfigError("model \"" + c.model + "\" has no input \"" + it.key() + "\"");
        }
    } else if (c.params.moments.empty()) {
        throw ConfigError("config needs a \"model\" (or params.moments for moment-only commands)");
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config \"" + path + "\"");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config \"" + path + "\" is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["name"] = c.name;
    if (!c.model.empty()) {
        j["model"] = c.model;
        for (const auto& [name, d] : c.inputs) j["inputs"][name] = d;
    }
    j["method"] = c.method;
    const auto& p = c.params;
    nlohmann::json pj{{"N", p.N},         {"n_moms", p.n_moms},   {"k", p.k},
                      {"quad_nodes", p.quad_nodes}, {"n_samples", p.n_samples}, {"seed", p.seed},
                      {"precision", p.precision}, {"restarts", p.restarts}, {"max_evals", p.max_evals},
                      {"approximant", p.approximant}, {"clip", p.clip}, {"grid_points", p.grid_points}};
    if (p.support) pj["support"] = {p.support->lo, p.support->hi};
    if (p.degree) pj["degree"] = *p.degree;
    if (p.kappa) pj["kappa"] = *p.kappa;
    if (!p.moments.empty()) pj["moments"] = p.moments;
    j["params"] = pj;
    j["eval_cdf"] = c.eval_cdf;
    if (!c.output_dir.empty()) j["output_dir"] = c.output_dir;
    return j;
}

}  // namespace bifprob
