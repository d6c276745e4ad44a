#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "hetcon/commands.hpp"

int main(int argc, char** argv) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("hetcon"));
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("HETCON_LOG")) {
        spdlog::set_level(spdlog::level::from_str(level));
    }

    hetcon::CliOptions opts;
    CLI::App app{"Consensus certificates for heterogeneous LTI networks"};
    app.set_version_flag("--version", std::string(hetcon::kToolVersion));
    app.add_option("command", opts.command, "analyze | gap | certify | simulate")
        ->required()
        ->check(CLI::IsMember({"analyze", "gap", "certify", "simulate"}));
    app.add_option("--config", opts.config, "network description (JSON)")->required();
    app.add_option("--out,--report", opts.out, "report path (default: stdout)");
    app.add_option("--trace", opts.trace, "simulate: trace CSV path");
    std::vector<int> edge;
    app.add_option("--edge", edge, "gap: restrict to the edge I J")->expected(2);
    app.add_option("--jobs", opts.jobs, "parallel edge computations")->check(CLI::PositiveNumber);
    app.add_flag("--require-certified", opts.require_certified, "certify: exit 4 when not certified");
    app.add_flag("--no-bound", opts.no_bound, "simulate: skip certification and bound check");
    std::uint64_t seed = 0;
    auto* seed_opt = app.add_option("--seed", seed, "seed for random disturbances");
    double axis_tol = 0.0;
    auto* axis_opt = app.add_option("--axis-tol", axis_tol, "imaginary-axis band for pole classification");
    app.add_option("--tree-root", opts.tree_root, "root of the BFS spanning tree");
    app.add_flag("--all-roots", opts.all_roots, "certify: also report the smallest rho over BFS roots");
    app.add_option("--csv-prefix", opts.csv_prefix, "analyze: write incidence, Laplacian and Q as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return hetcon::kExitConfig;
    }
    if (edge.size() == 2) {
        opts.edge = std::make_pair(edge[0], edge[1]);
    }
    if (*seed_opt) {
        opts.seed = seed;
    }
    if (*axis_opt) {
        opts.axis_tol = axis_tol;
    }
    return hetcon::run_command(opts, std::cout, std::cerr);
}
