#include "hetcon/commands.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <fstream>
#include <random>

#include <spdlog/spdlog.h>

#include "hetcon/config.hpp"
#include "hetcon/errors.hpp"
#include "hetcon/report.hpp"

namespace hetcon {

using nlohmann::json;

namespace {

class PhaseTimer {
public:
    PhaseTimer(json& timings, std::string name)
        : timings_(timings), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
    ~PhaseTimer() {
        const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start_;
        timings_[name_] = ms.count();
    }

private:
    json& timings_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

struct EdgeRow {
    EdgeGap gap;
    bool passive = true;
    std::string error;
};

std::vector<int> selected_edges(const Graph& g, const std::optional<std::pair<int, int>>& filter) {
    std::vector<int> idx;
    for (int k = 0; k < g.p(); ++k) {
        const Edge& e = g.edges()[k];
        if (!filter || (e.i == filter->first && e.j == filter->second) ||
            (e.i == filter->second && e.j == filter->first)) {
            idx.push_back(k);
        }
    }
    if (filter && idx.empty()) {
        throw ConfigError("--edge " + std::to_string(filter->first) + " " + std::to_string(filter->second) +
                          ": no such edge in the graph");
    }
    return idx;
}

// Gap index per selected edge; a pair that is not gap-passive in the scan
// range becomes a flagged row instead of an error.
std::vector<EdgeRow> edge_rows(const Network& net, const GapOptions& opts, int jobs, const std::vector<int>& idx) {
    const int count = static_cast<int>(idx.size());
    std::vector<EdgeRow> rows(count);
    std::vector<std::exception_ptr> errors(count);
    GapOptions edge_opts = opts;
    if (jobs > 1) {
        edge_opts.pr.parallel = false;
    }
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs)) if (jobs > 1)
    for (int r = 0; r < count; ++r) {
        const Edge& e = net.graph.edges()[idx[r]];
        EdgeRow& row = rows[r];
        row.gap.edge = idx[r];
        row.gap.i = e.i;
        row.gap.j = e.j;
        row.gap.weight = e.weight;
        try {
            row.gap.gap = gap_index(net.nodes[e.i - 1], net.nodes[e.j - 1], edge_opts);
        } catch (const NotGapPassiveError& err) {
            row.passive = false;
            row.error = err.what();
        } catch (...) {
            errors[r] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return rows;
}

json rows_json(const Network& net, const GapOptions& opts, const std::vector<EdgeRow>& rows) {
    json table = json::array();
    for (const EdgeRow& row : rows) {
        const RationalFunction& hi = net.nodes[row.gap.i - 1];
        const RationalFunction& hj = net.nodes[row.gap.j - 1];
        json r = {{"edge", {row.gap.i, row.gap.j}}, {"weight", row.gap.weight}};
        if (row.passive) {
            r["status"] = "ok";
            r["gap"] = to_json(row.gap.gap);
            // diagnostics of the first failing gamma above the certified point
            r["fail_point"] =
                row.gap.gap.unbounded_above ? json(nullptr) : verdict_at(hi, hj, row.gap.gap.bracket_high, opts.pr);
        } else {
            r["status"] = "not_gap_passive";
            r["gap"] = nullptr;
            r["message"] = row.error;
            r["fail_point"] = verdict_at(hi, hj, -1024.0, opts.pr);
        }
        table.push_back(r);
    }
    return table;
}

json graph_json(const Graph& g, int root) {
    const GraphSpectrum spec = graph_spectrum(g);
    const TreeFactor tree = factor_graph(g, root);
    const Eigen::MatrixXd Qd = tree.Q.cast<double>();
    double kappa = 0.0;
    if (Qd.size() > 0) {
        kappa = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Qd * Qd.transpose(), Eigen::EigenvaluesOnly)
                    .eigenvalues()
                    .maxCoeff();
    }
    json edges = json::array();
    for (const Edge& e : g.edges()) {
        edges.push_back({{"i", e.i}, {"j", e.j}, {"weight", e.weight}});
    }
    return {{"n", g.n()},
            {"p", g.p()},
            {"edges", edges},
            {"lambda2", spec.lambda2},
            {"laplacian_eigenvalues", std::vector<double>(spec.laplacian_eigs.begin(), spec.laplacian_eigs.end())},
            {"rank_L", spec.rank_L},
            {"tree_root", root},
            {"spanning_tree", tree_json(g, tree)},
            {"Q", matrix_json(tree.Q)},
            {"kappa", kappa}};
}

json nodes_json(const Network& net, double axis_tol) {
    json nodes = json::array();
    for (int k = 0; k < net.graph.n(); ++k) {
        nodes.push_back(node_json(k + 1, net.nodes[k], axis_tol));
    }
    return nodes;
}

void write_csv_file(const std::string& path, const auto& matrix) {
    std::ofstream f(path);
    if (!f) {
        throw ConfigError("cannot write " + path);
    }
    write_matrix_csv(f, matrix);
}

struct Context {
    const CliOptions& opts;
    NetworkConfig cfg;
    json report;
    json timings = json::object();
};

void check_root(const Context& ctx) {
    if (ctx.opts.tree_root < 1 || ctx.opts.tree_root > ctx.cfg.network.graph.n()) {
        throw ConfigError("--tree-root must be a node id in 1.." + std::to_string(ctx.cfg.network.graph.n()));
    }
}

int cmd_analyze(Context& ctx) {
    check_root(ctx);
    const Network& net = ctx.cfg.network;
    {
        PhaseTimer t(ctx.timings, "graph");
        ctx.report["graph"] = graph_json(net.graph, ctx.opts.tree_root);
    }
    {
        PhaseTimer t(ctx.timings, "nodes");
        ctx.report["nodes"] = nodes_json(net, ctx.cfg.analysis.pr.axis_tol);
    }
    if (!ctx.opts.csv_prefix.empty()) {
        const std::string& pre = ctx.opts.csv_prefix;
        write_csv_file(pre + "incidence.csv", incidence_matrix(net.graph));
        write_csv_file(pre + "laplacian.csv", laplacian(net.graph));
        write_csv_file(pre + "Q.csv", factor_graph(net.graph, ctx.opts.tree_root).Q);
    }
    return kExitOk;
}

int cmd_gap(Context& ctx) {
    const Network& net = ctx.cfg.network;
    const std::vector<int> idx = selected_edges(net.graph, ctx.opts.edge);
    PhaseTimer t(ctx.timings, "gap");
    const std::vector<EdgeRow> rows = edge_rows(net, ctx.cfg.analysis, ctx.opts.jobs, idx);
    ctx.report["edges"] = rows_json(net, ctx.cfg.analysis, rows);
    return kExitOk;
}

// Shared by certify and simulate: fills report["edges"], ["profile"],
// ["certificate"]. Returns the certificate when every edge is gap-passive.
std::optional<ConsensusCertificate> run_certificate(Context& ctx) {
    check_root(ctx);
    const Network& net = ctx.cfg.network;
    std::vector<int> all(net.graph.p());
    for (int k = 0; k < net.graph.p(); ++k) {
        all[k] = k;
    }
    std::vector<EdgeRow> rows;
    {
        PhaseTimer t(ctx.timings, "gap");
        rows = edge_rows(net, ctx.cfg.analysis, ctx.opts.jobs, all);
    }
    ctx.report["edges"] = rows_json(net, ctx.cfg.analysis, rows);

    const bool all_passive = std::all_of(rows.begin(), rows.end(), [](const EdgeRow& r) { return r.passive; });
    if (!all_passive) {
        ctx.report["profile"] = nullptr;
        ctx.report["certificate"] = {{"certified", false},
                                     {"rho", nullptr},
                                     {"reason", "at least one edge is not gap-passive in the scan range"}};
        return std::nullopt;
    }

    HeterogeneityProfile prof;
    std::vector<double> gammas;
    for (const EdgeRow& r : rows) {
        gammas.push_back(r.gap.gap.gamma_star);
    }
    prof = profile_from_gammas(net.graph, gammas);
    for (size_t k = 0; k < rows.size(); ++k) {
        prof.edges[k].gap = rows[k].gap.gap;
    }
    ctx.report["profile"] = {{"gamma_m", prof.gamma_m}, {"alpha", prof.alpha_min}, {"alpha_bar", prof.alpha_bar}};

    PhaseTimer t(ctx.timings, "certificate");
    ConsensusCertificate cert = certify(net.graph, prof, TreeChoice{ctx.opts.tree_root, std::nullopt});
    json cj = to_json(cert, net.graph);
    if (ctx.opts.all_roots) {
        const auto best = min_rho_over_roots(net.graph, prof);
        cj["rho_min_over_roots"] = best ? json(*best) : json(nullptr);
    }
    ctx.report["certificate"] = cj;
    return cert;
}

int cmd_certify(Context& ctx) {
    check_root(ctx);
    ctx.report["graph"] = graph_json(ctx.cfg.network.graph, ctx.opts.tree_root);
    const auto cert = run_certificate(ctx);
    const bool certified = cert && cert->certified;
    return (!certified && ctx.opts.require_certified) ? kExitPolicy : kExitOk;
}

int cmd_simulate(Context& ctx) {
    const Network& net = ctx.cfg.network;
    const SimulationConfig& sc = ctx.cfg.simulation;
    const bool bound = !ctx.opts.no_bound && !sc.exploratory;

    std::optional<ConsensusCertificate> cert;
    if (bound) {
        cert = run_certificate(ctx);
        if (!cert || !cert->certified) {
            ctx.report["simulation"] = nullptr;
            ctx.report["bound"] = {{"skipped", "network is not certified; rerun with --no-bound for a trace"}};
            return kExitPolicy;
        }
    }

    std::vector<SignalSpec> specs;
    if (sc.inputs) {
        specs = *sc.inputs;
    } else {
        std::mt19937_64 rng(ctx.cfg.seed);
        for (int k = 0; k < net.graph.n(); ++k) {
            specs.push_back(random_disturbance(rng));
        }
    }
    std::vector<Signal> inputs;
    json inputs_echo = json::array();
    for (const SignalSpec& s : specs) {
        inputs.push_back(make_signal(s));
        inputs_echo.push_back(signal_to_json(s));
    }

    const ClosedLoopSystem cls = assemble_closed_loop(net);
    SimOptions so;
    so.dt = sc.dt;
    so.t_end = sc.t_end;
    if (sc.initial_state) {
        if (static_cast<int>(sc.initial_state->size()) != cls.state_dim()) {
            throw ConfigError("simulation.initial_state: expected " + std::to_string(cls.state_dim()) +
                              " entries (closed-loop state dimension)");
        }
        so.x0 = Eigen::Map<const Eigen::VectorXd>(sc.initial_state->data(), cls.state_dim());
    }

    SimulationTrace trace;
    {
        PhaseTimer t(ctx.timings, "simulate");
        trace = simulate(cls, inputs, so);
    }
    const double sup_dty = trace.DtY.size() > 0 ? trace.DtY.rowwise().norm().maxCoeff() : 0.0;
    ctx.report["simulation"] = {{"dt", sc.dt},
                                {"t_end", sc.t_end},
                                {"samples", trace.samples()},
                                {"state_dim", cls.state_dim()},
                                {"inputs", inputs_echo},
                                {"zero_initial_state", trace.zero_initial_state},
                                {"finite_energy", trace.finite_energy},
                                {"exploratory", sc.exploratory},
                                {"consistency_residual", trace.consistency_residual},
                                {"sup_DtY", sup_dty},
                                {"norm_DtY_T", trace.norm_DtY(trace.samples() - 1)},
                                {"norm_DtW_T", trace.norm_DtW(trace.samples() - 1)}};

    if (!ctx.opts.trace.empty()) {
        std::ofstream f(ctx.opts.trace);
        if (!f) {
            throw ConfigError("cannot write " + ctx.opts.trace);
        }
        write_trace_csv(f, trace);
    }

    if (!bound) {
        ctx.report["bound"] = nullptr;
        return kExitOk;
    }
    if (!trace.finite_energy) {
        ctx.report["bound"] = {{"skipped", "inputs are not finite-energy"}};
        return kExitOk;
    }
    ctx.report["bound"] = to_json(verify_bound(trace, *cert));
    return kExitOk;
}

}  // namespace

int run_command(const CliOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        if (opts.jobs < 1) {
            throw ConfigError("--jobs must be at least 1");
        }
        if (opts.config.empty()) {
            throw ConfigError("--config is required");
        }
        Context ctx{opts, {}, {}};
        {
            PhaseTimer t(ctx.timings, "load");
            ctx.cfg = load_config(opts.config);
        }
        if (opts.seed) {
            ctx.cfg.seed = *opts.seed;
            ctx.cfg.normalized["seed"] = *opts.seed;
        }
        if (opts.axis_tol) {
            if (!(*opts.axis_tol >= 0.0)) {
                throw ConfigError("--axis-tol must be nonnegative");
            }
            ctx.cfg.analysis.pr.axis_tol = *opts.axis_tol;
            ctx.cfg.normalized["analysis"]["axis_tol"] = *opts.axis_tol;
        }
        ctx.report["tool"] = kToolName;
        ctx.report["version"] = kToolVersion;
        ctx.report["command"] = opts.command;
        ctx.report["config"] = ctx.cfg.normalized;
        spdlog::debug("{}: n = {}, p = {}", opts.command, ctx.cfg.network.graph.n(), ctx.cfg.network.graph.p());

        int code = kExitOk;
        if (opts.command == "analyze") {
            code = cmd_analyze(ctx);
        } else if (opts.command == "gap") {
            code = cmd_gap(ctx);
        } else if (opts.command == "certify") {
            code = cmd_certify(ctx);
        } else if (opts.command == "simulate") {
            code = cmd_simulate(ctx);
        } else {
            throw ConfigError("unknown command \"" + opts.command + "\"");
        }
        ctx.report["timings_ms"] = ctx.timings;

        const std::string text = ctx.report.dump(2) + "\n";
        if (opts.out.empty()) {
            out << text;
        } else {
            std::ofstream f(opts.out);
            if (!f) {
                throw ConfigError("cannot write " + opts.out);
            }
            f << text;
        }
        return code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitMath;
    }
}

}  // namespace hetcon
