#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"

#include "bifprob/analyze.hpp"
#include "bifprob/config.hpp"
#include "bifprob/errors.hpp"

using namespace bifprob;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = BIFPROB_CONFIG_DIR;

ExperimentConfig bundled(const std::string& name) { return load_config(kConfigs + "/" + name + ".json"); }

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("bifprob_cli_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(BIFPROB_CLI) + " " + args + " > /dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path write_json(const fs::path& dir, const std::string& name, const std::string& text) {
    const auto p = dir / name;
    std::ofstream(p) << text;
    return p;
}

bool has_stage(const Report& r, const std::string& s) {
    return std::find(r.stages.begin(), r.stages.end(), s) != r.stages.end();
}

}  // namespace

TEST_CASE("command names") {
    for (const char* n : {"analyze", "mellin-product", "pce", "moments", "fit-gmm", "reconstruct", "ut", "mc"})
        CHECK(command_name(command_from_name(n)) == n);
    CHECK_THROWS_AS(command_from_name("plot"), ConfigError);
}

TEST_CASE("bundled configs parse and round trip") {
    for (const auto& e : fs::directory_iterator(kConfigs)) {
        const auto c = load_config(e.path().string());
        CHECK(std::find(method_names().begin(), method_names().end(), c.method) != method_names().end());
        const auto again = parse_config(config_to_json(c));
        CHECK(config_to_json(again) == config_to_json(c));
    }
}

TEST_CASE("config validation") {
    auto j = config_to_json(bundled("ps_d"));
    auto bad = j;
    bad["params"]["bogus"] = 1;
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = j;
    bad["model"] = "duffing";
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = j;
    bad["method"] = "maximum_likelihood";
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = j;
    bad["inputs"].erase("theta");
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = j;
    bad["inputs"]["zeta"] = {{"kind", "beta"}, {"alpha", 2}};
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    CHECK_THROWS_AS(load_config(kConfigs + "/missing.json"), ConfigError);
}

TEST_CASE("analytic uniform-gamma product report") {
    const auto r = run_command(bundled("uniform_gamma"), Command::Analyze);
    CHECK(r.data["subcritical_probability"].get<double>() == 0.25);
    CHECK(r.files.count("pdf.csv") == 1);
    CHECK(r.files.count("cdf.csv") == 1);
    CHECK(r.text.find("0.25") != std::string::npos);
}

TEST_CASE("unscented reports") {
    CHECK(run_command(bundled("watt_ut"), Command::Analyze).data["subcritical_probability"].get<double>() == 0.2);
    CHECK(run_command(bundled("watt_ut5"), Command::Analyze).data["subcritical_probability"].get<double>() == 2.0 / 9.0);
}

TEST_CASE("PS D report contains the mixture and sampled probabilities") {
    const auto r = run_command(bundled("ps_d"), Command::Analyze);
    CHECK(std::abs(r.data["subcritical_probability"].get<double>() - 0.9049) <= 0.03);
    CHECK(std::abs(r.data["monte_carlo"]["sign_probability"].get<double>() - 0.8903) <= 3 * std::sqrt(0.89 * 0.11 / 1e6));
    CHECK(r.data["gmm"]["restarts"].size() == 5);
    CHECK(r.data["gmm"]["cdf"].size() == 4);
}

TEST_CASE("Monte Carlo method never touches the Mellin or PCE paths") {
    for (const char* name : {"ps_d_mc", "uniform_gamma_mc"}) {
        const auto r = run_command(bundled(name), Command::Analyze);
        CHECK(r.stages == std::vector<std::string>{"monte_carlo"});
        CHECK_FALSE(has_stage(r, "pce"));
        CHECK_FALSE(has_stage(r, "mellin"));
    }
    const auto mel = run_command(bundled("ps_d"), Command::Analyze);
    CHECK(has_stage(mel, "pce"));
    CHECK(has_stage(mel, "mellin"));
}

TEST_CASE("subcommands run on the bundled configs") {
    CHECK(run_command(bundled("ps_b"), Command::Pce).data.contains("pce"));
    CHECK(run_command(bundled("ps_b"), Command::Moments).data.contains("moments"));
    CHECK(run_command(bundled("ps_b"), Command::MellinProduct).data.contains("mellin"));
    CHECK(run_command(bundled("ps_a_legendre"), Command::Reconstruct).files.count("pdf.csv") == 1);
    CHECK(run_command(bundled("watt_ut"), Command::Ut).files.count("sigma_points.csv") == 1);
    auto mc = bundled("uniform_gamma");
    mc.params.n_samples = 20000;
    CHECK(run_command(mc, Command::Mc).stages == std::vector<std::string>{"monte_carlo"});
}

TEST_CASE("reruns of every bundled config are byte-identical") {
    for (const auto& e : fs::directory_iterator(kConfigs)) {
        const auto stem = e.path().stem().string();
        const auto dir = scratch(stem);
        const std::string cmd = "analyze --quiet --config " + e.path().string() + " --out " + dir.string();
        REQUIRE(run_cli(cmd) == 0);
        std::map<std::string, std::string> first;
        for (const auto& f : fs::directory_iterator(dir)) first[f.path().filename().string()] = slurp(f.path());
        CHECK(first.size() >= 2);
        CHECK(first.count("report.json") == 1);
        CHECK(first.count("report.txt") == 1);
        fs::remove_all(dir);
        REQUIRE(run_cli(cmd) == 0);
        std::size_t files = 0;
        for (const auto& f : fs::directory_iterator(dir)) {
            ++files;
            CHECK_MESSAGE(slurp(f.path()) == first[f.path().filename().string()], stem << "/" << f.path().filename().string());
        }
        CHECK(files == first.size());
    }
}

TEST_CASE("seed and eval-cdf overrides") {
    const auto cfg = kConfigs + "/uniform_gamma_mc.json";
    const auto a = scratch("seed_a"), b = scratch("seed_b");
    REQUIRE(run_cli("mc --quiet --config " + cfg + " --out " + a.string() + " --seed 7 --eval-cdf -1,0,1") == 0);
    REQUIRE(run_cli("mc --quiet --config " + cfg + " --out " + b.string() + " --seed 8") == 0);
    const auto ja = nlohmann::json::parse(slurp(a / "report.json"));
    const auto jb = nlohmann::json::parse(slurp(b / "report.json"));
    CHECK(ja["config"]["params"]["seed"] == 7);
    CHECK(ja["monte_carlo"]["cdf"].size() == 3);
    CHECK(ja["monte_carlo"]["moments"] != jb["monte_carlo"]["moments"]);
}

TEST_CASE("exit codes") {
    const auto dir = scratch("exit");
    CHECK(run_cli("analyze --config " + kConfigs + "/watt_ut.json --quiet --out " + dir.string()) == 0);
    CHECK(run_cli("analyze --config " + (dir / "nope.json").string()) == 2);
    CHECK(run_cli("analyze") == 2);
    CHECK(run_cli("frobnicate --config x") == 2);
    CHECK(run_cli("analyze --config " + write_json(dir, "broken.json", "{ not json").string()) == 2);
    CHECK(run_cli("analyze --config " + kConfigs + "/ps_d.json --eval-cdf 0,abc") == 2);
    // theta ~ Gamma(2,1): E[theta^-(s-1)] diverges from the third moment on
    auto j = config_to_json(bundled("ps_b"));
    j["inputs"]["theta"] = {{"kind", "gamma"}, {"shape", 2}, {"rate", 1}};
    j["params"]["n_samples"] = 0;
    CHECK(run_cli("analyze --quiet --config " + write_json(dir, "diverge.json", j.dump()).string()) == 3);
}
