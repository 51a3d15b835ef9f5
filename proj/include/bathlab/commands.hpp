#pragma once

#include "bathlab/config.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace bathlab {

struct CommandContext {
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 1;
    int threads = 1;
};

// Exit status: 0 success, 1 a check or run failed. Configuration problems
// throw ConfigError before any computation starts.
int cmd_verify(const RunConfig& config, const CommandContext& ctx);
int cmd_spectrum(const RunConfig& config, const CommandContext& ctx);
int cmd_propagator(const RunConfig& config, const CommandContext& ctx);
int cmd_evolve(const RunConfig& config, const CommandContext& ctx);

// Dispatch by config.command().
int run_command(const RunConfig& config, const CommandContext& ctx);

struct CheckResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

// The identity suite behind cmd_verify.
std::vector<CheckResult> verify_checks(const RunConfig& config, std::uint64_t seed);

// "n1_0_0" style tag used in file names.
std::string mode_tag(const Mode& n);

} // namespace bathlab
