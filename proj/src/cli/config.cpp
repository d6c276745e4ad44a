#include "hetcon/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "hetcon/errors.hpp"

namespace hetcon {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

void require_object(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
        fail(path, "expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) {
            fail(path.empty() ? key : path + "." + key, "unknown key");
        }
    }
}

double get_number(const json& obj, const std::string& key, const std::string& path, std::optional<double> def) {
    if (!obj.contains(key)) {
        if (!def) {
            fail(path + "." + key, "required field missing");
        }
        return *def;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        fail(path + "." + key, "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        fail(path + "." + key, "must be finite");
    }
    return d;
}

int get_int(const json& obj, const std::string& key, const std::string& path, std::optional<int> def) {
    if (!obj.contains(key)) {
        if (!def) {
            fail(path + "." + key, "required field missing");
        }
        return *def;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
        fail(path + "." + key, "expected an integer");
    }
    return v.get<int>();
}

bool get_bool(const json& obj, const std::string& key, const std::string& path, bool def) {
    if (!obj.contains(key)) {
        return def;
    }
    if (!obj.at(key).is_boolean()) {
        fail(path + "." + key, "expected a boolean");
    }
    return obj.at(key).get<bool>();
}

std::vector<double> get_coeffs(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) {
        fail(path + "." + key, "required field missing");
    }
    const json& v = obj.at(key);
    if (!v.is_array() || v.empty()) {
        fail(path + "." + key, "expected a nonempty array of numbers");
    }
    std::vector<double> out;
    for (size_t k = 0; k < v.size(); ++k) {
        if (!v[k].is_number() || !std::isfinite(v[k].get<double>())) {
            fail(path + "." + key + "[" + std::to_string(k) + "]", "expected a finite number");
        }
        out.push_back(v[k].get<double>());
    }
    return out;
}

SignalPrimitive parse_primitive(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        fail(path, "expected an object with a string \"type\"");
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "step") {
        require_object(j, path, {"type", "amplitude", "start"});
        return Step{get_number(j, "amplitude", path, std::nullopt), get_number(j, "start", path, 0.0)};
    }
    if (type == "pulse") {
        require_object(j, path, {"type", "amplitude", "start", "stop"});
        return Pulse{get_number(j, "amplitude", path, std::nullopt), get_number(j, "start", path, 0.0),
                     get_number(j, "stop", path, std::nullopt)};
    }
    if (type == "sine") {
        require_object(j, path, {"type", "amplitude", "frequency", "phase", "decay"});
        return Sine{get_number(j, "amplitude", path, std::nullopt), get_number(j, "frequency", path, std::nullopt),
                    get_number(j, "phase", path, 0.0), get_number(j, "decay", path, 0.0)};
    }
    if (type == "exp_decay") {
        require_object(j, path, {"type", "amplitude", "rate"});
        return ExpDecay{get_number(j, "amplitude", path, std::nullopt), get_number(j, "rate", path, std::nullopt)};
    }
    fail(path + ".type", "unknown signal type \"" + type + "\"");
}

}  // namespace

json signal_to_json(const SignalSpec& spec) {
    json arr = json::array();
    for (const SignalPrimitive& prim : spec) {
        if (const auto* s = std::get_if<Step>(&prim)) {
            arr.push_back({{"type", "step"}, {"amplitude", s->amplitude}, {"start", s->start}});
        } else if (const auto* p = std::get_if<Pulse>(&prim)) {
            arr.push_back({{"type", "pulse"}, {"amplitude", p->amplitude}, {"start", p->start}, {"stop", p->stop}});
        } else if (const auto* w = std::get_if<Sine>(&prim)) {
            arr.push_back({{"type", "sine"},
                           {"amplitude", w->amplitude},
                           {"frequency", w->frequency},
                           {"phase", w->phase},
                           {"decay", w->decay}});
        } else if (const auto* e = std::get_if<ExpDecay>(&prim)) {
            arr.push_back({{"type", "exp_decay"}, {"amplitude", e->amplitude}, {"rate", e->rate}});
        }
    }
    return arr;
}

SignalSpec random_disturbance(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    const int count = 1 + static_cast<int>(unit(rng) * 3.0 - 1e-12);
    SignalSpec spec;
    for (int k = 0; k < count; ++k) {
        const double pick = unit(rng);
        const double amp = uniform(-1.0, 1.0);
        if (pick < 0.5) {
            const double start = uniform(0.0, 10.0);
            spec.push_back(Pulse{amp, start, start + uniform(0.2, 3.0)});
        } else if (pick < 0.8) {
            spec.push_back(Sine{amp, uniform(0.2, 5.0), uniform(0.0, 2.0 * std::numbers::pi), uniform(0.1, 1.0)});
        } else {
            spec.push_back(ExpDecay{amp, uniform(0.2, 2.0)});
        }
    }
    return spec;
}

NetworkConfig parse_config(const json& doc) {
    require_object(doc, "", {"nodes", "edges", "analysis", "simulation", "seed"});
    if (!doc.contains("nodes") || !doc.at("nodes").is_array() || doc.at("nodes").empty()) {
        fail("nodes", "expected a nonempty array");
    }
    if (!doc.contains("edges") || !doc.at("edges").is_array()) {
        fail("edges", "expected an array");
    }

    json norm;
    const json& jn = doc.at("nodes");
    const int n = static_cast<int>(jn.size());
    std::vector<std::optional<RationalFunction>> nodes(n);
    std::vector<json> node_echo(n);
    for (int k = 0; k < n; ++k) {
        const std::string path = "nodes[" + std::to_string(k) + "]";
        require_object(jn[k], path, {"id", "num", "den"});
        const int id = get_int(jn[k], "id", path, std::nullopt);
        if (id < 1 || id > n) {
            fail(path + ".id", "node ids must be 1.." + std::to_string(n));
        }
        if (nodes[id - 1]) {
            fail(path + ".id", "duplicate node id " + std::to_string(id));
        }
        auto num = get_coeffs(jn[k], "num", path);
        auto den = get_coeffs(jn[k], "den", path);
        try {
            RationalFunction h{Polynomial(num), Polynomial(den)};
            if (!h.is_proper()) {
                fail(path, "transfer function must be proper (deg num <= deg den)");
            }
            nodes[id - 1] = h;
        } catch (const Error& e) {
            fail(path, e.what());
        }
        node_echo[id - 1] = {{"id", id}, {"num", num}, {"den", den}};
    }
    norm["nodes"] = node_echo;

    std::vector<Edge> edges;
    json edge_echo = json::array();
    const json& je = doc.at("edges");
    for (size_t k = 0; k < je.size(); ++k) {
        const std::string path = "edges[" + std::to_string(k) + "]";
        require_object(je[k], path, {"i", "j", "weight"});
        Edge e{get_int(je[k], "i", path, std::nullopt), get_int(je[k], "j", path, std::nullopt),
               get_number(je[k], "weight", path, 1.0)};
        edges.push_back(e);
        edge_echo.push_back({{"i", e.i}, {"j", e.j}, {"weight", e.weight}});
    }
    norm["edges"] = edge_echo;

    NetworkConfig cfg;
    try {
        std::vector<RationalFunction> fns;
        for (auto& h : nodes) {
            fns.push_back(*h);
        }
        cfg.network = make_network(build_graph(n, std::move(edges)), std::move(fns));
    } catch (const Error& e) {
        fail("edges", e.what());
    }

    const json empty = json::object();
    const json& ja = doc.contains("analysis") ? doc.at("analysis") : empty;
    require_object(ja, "analysis", {"gamma_tol", "psd_tol", "freq_grid", "axis_tol"});
    GapOptions& go = cfg.analysis;
    go.gamma_tol = get_number(ja, "gamma_tol", "analysis", 1e-4);
    go.pr.psd_tol = get_number(ja, "psd_tol", "analysis", 1e-8);
    go.pr.axis_tol = get_number(ja, "axis_tol", "analysis", kAxisTolerance);
    const json& jf = ja.contains("freq_grid") ? ja.at("freq_grid") : empty;
    require_object(jf, "analysis.freq_grid", {"w_min", "w_max", "points"});
    go.pr.w_min = get_number(jf, "w_min", "analysis.freq_grid", 1e-4);
    go.pr.w_max = get_number(jf, "w_max", "analysis.freq_grid", 1e4);
    go.pr.points = get_int(jf, "points", "analysis.freq_grid", 2000);
    if (!(go.gamma_tol > 0.0)) {
        fail("analysis.gamma_tol", "must be positive");
    }
    if (go.pr.psd_tol < 0.0 || go.pr.axis_tol < 0.0) {
        fail("analysis", "tolerances must be nonnegative");
    }
    if (!(go.pr.w_min > 0.0) || !(go.pr.w_max > go.pr.w_min) || go.pr.points < 2) {
        fail("analysis.freq_grid", "need 0 < w_min < w_max and points >= 2");
    }
    norm["analysis"] = {{"gamma_tol", go.gamma_tol},
                        {"psd_tol", go.pr.psd_tol},
                        {"axis_tol", go.pr.axis_tol},
                        {"freq_grid", {{"w_min", go.pr.w_min}, {"w_max", go.pr.w_max}, {"points", go.pr.points}}}};

    const json& js = doc.contains("simulation") ? doc.at("simulation") : empty;
    require_object(js, "simulation", {"dt", "t_end", "inputs", "enforce_l2", "exploratory", "initial_state"});
    SimulationConfig& sc = cfg.simulation;
    sc.dt = get_number(js, "dt", "simulation", 1e-3);
    sc.t_end = get_number(js, "t_end", "simulation", 30.0);
    sc.enforce_l2 = get_bool(js, "enforce_l2", "simulation", true);
    sc.exploratory = get_bool(js, "exploratory", "simulation", false);
    if (!(sc.dt > 0.0) || !(sc.t_end >= sc.dt)) {
        fail("simulation", "need dt > 0 and t_end >= dt");
    }
    json sim_echo = {{"dt", sc.dt}, {"t_end", sc.t_end}, {"enforce_l2", sc.enforce_l2}, {"exploratory", sc.exploratory}};
    if (js.contains("inputs")) {
        const json& ji = js.at("inputs");
        if (!ji.is_array() || static_cast<int>(ji.size()) != n) {
            fail("simulation.inputs", "expected one signal array per node (" + std::to_string(n) + ")");
        }
        std::vector<SignalSpec> inputs;
        for (int k = 0; k < n; ++k) {
            const std::string path = "simulation.inputs[" + std::to_string(k) + "]";
            if (!ji[k].is_array()) {
                fail(path, "expected an array of signal primitives");
            }
            SignalSpec spec;
            for (size_t m = 0; m < ji[k].size(); ++m) {
                spec.push_back(parse_primitive(ji[k][m], path + "[" + std::to_string(m) + "]"));
            }
            try {
                const Signal s = make_signal(spec);
                if (sc.enforce_l2 && !s.is_finite_energy()) {
                    fail(path, "signal is not finite-energy (enforce_l2 is set)");
                }
            } catch (const Error& e) {
                fail(path, e.what());
            }
            inputs.push_back(std::move(spec));
        }
        json echo = json::array();
        for (const auto& spec : inputs) {
            echo.push_back(signal_to_json(spec));
        }
        sim_echo["inputs"] = echo;
        sc.inputs = std::move(inputs);
    }
    if (js.contains("initial_state")) {
        const auto x0 = get_coeffs(js, "initial_state", "simulation");
        const bool nonzero = std::any_of(x0.begin(), x0.end(), [](double v) { return v != 0.0; });
        if (nonzero && !sc.exploratory) {
            fail("simulation.initial_state", "a nonzero initial state requires \"exploratory\": true");
        }
        sc.initial_state = x0;
        sim_echo["initial_state"] = x0;
    }
    norm["simulation"] = sim_echo;

    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned()) {
            fail("seed", "expected a nonnegative integer");
        }
        cfg.seed = doc.at("seed").get<std::uint64_t>();
    }
    norm["seed"] = cfg.seed;
    cfg.normalized = std::move(norm);
    return cfg;
}

NetworkConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

NetworkConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace hetcon
