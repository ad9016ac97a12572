#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "bifprob/config.hpp"

namespace bifprob {

enum class Command { Analyze, MellinProduct, Pce, Moments, FitGmm, Reconstruct, Ut, Mc };

Command command_from_name(const std::string& name);
std::string command_name(Command c);

struct Report {
    /// Pipeline stages that actually ran, in order.
    std::vector<std::string> stages;
    nlohmann::json data;
    std::string text;
    /// CSV outputs keyed by file name.
    std::map<std::string, std::string> files;

    /// Writes report.txt, report.json and the CSV files into dir.
    void write(const std::string& dir) const;
};

/// Runs a subcommand; Command::Analyze dispatches on cfg.method.
Report run_command(const ExperimentConfig& cfg, Command cmd);

}  // namespace bifprob
