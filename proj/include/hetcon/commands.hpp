#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

namespace hetcon {

inline constexpr const char* kToolName = "hetcon";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitMath = 3, kExitPolicy = 4 };

struct CliOptions {
    std::string command;  // analyze | gap | certify | simulate
    std::string config;
    std::string out;    // report path, stdout when empty
    std::string trace;  // simulate: CSV path
    std::optional<std::pair<int, int>> edge;
    int jobs = 1;
    bool require_certified = false;
    bool no_bound = false;
    std::optional<std::uint64_t> seed;
    std::optional<double> axis_tol;
    int tree_root = 1;
    bool all_roots = false;
    std::string csv_prefix;  // analyze: incidence/Laplacian/Q CSV files
};

/// Runs one command. Reports go to `out` (or opts.out), diagnostics to `err`.
int run_command(const CliOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace hetcon
