#include "hetcon/report.hpp"

#include <cmath>

#include "hetcon/errors.hpp"

namespace hetcon {

using nlohmann::json;

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json complex_json(Complex z) { return json::array({num(z.real()), num(z.imag())}); }

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(num(m(r, c)));
        }
        rows.push_back(row);
    }
    return rows;
}

json matrix_json(const Eigen::MatrixXi& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(row);
    }
    return rows;
}

json to_json(const PRVerdict& v) {
    json out;
    out["pass"] = v.pass;
    json a = {{"pass", v.a.pass}, {"proper", v.a.proper}};
    a["rhp_poles"] = json::array();
    for (Complex p : v.a.rhp_poles) {
        a["rhp_poles"].push_back(complex_json(p));
    }
    out["a"] = a;
    if (v.b.evaluated) {
        out["b"] = {{"pass", v.b.pass}, {"min_eig", num(v.b.min_eig)}, {"argmin_w", num(v.b.argmin_w)},
                    {"grid_size", v.b.grid_size}};
    } else {
        out["b"] = nullptr;
    }
    if (v.c.evaluated) {
        json poles = json::array();
        for (const ImaginaryPoleCheck& p : v.c.poles) {
            poles.push_back({{"pole", complex_json(p.pole)},
                             {"simple", p.simple},
                             {"hermitian_deviation", num(p.hermitian_deviation)},
                             {"eigs", {num(p.eigs(0)), num(p.eigs(1))}},
                             {"pass", p.pass}});
        }
        out["c"] = {{"pass", v.c.pass}, {"poles", poles}};
    } else {
        out["c"] = nullptr;
    }
    out["warnings"] = v.warnings;
    return out;
}

json to_json(const GapIndex& g) {
    return {{"gamma_star", num(g.gamma_star)},
            {"bracket", {num(g.bracket_low), num(g.bracket_high)}},
            {"tolerance", num(g.tolerance)},
            {"unbounded_above", g.unbounded_above},
            {"pr_tests", g.pr_tests}};
}

json node_json(int id, const RationalFunction& h, double axis_tol) {
    json out = {{"id", id},
                {"num", h.num().coeffs()},
                {"den", h.den().coeffs()},
                {"order", h.den().degree()},
                {"strictly_proper", h.is_strictly_proper()}};
    json poles = json::array();
    if (h.den().degree() > 0) {
        for (const Pole& p : rf_poles(h, axis_tol).poles) {
            poles.push_back({{"value", complex_json(p.value)}, {"multiplicity", p.multiplicity},
                             {"class", to_string(p.cls)}});
        }
    }
    out["poles"] = poles;
    json near = json::array();
    for (const NearCancellation& c : near_cancellations(h)) {
        near.push_back({{"zero", complex_json(c.zero)}, {"pole", complex_json(c.pole)}, {"distance", c.distance}});
    }
    out["near_cancellations"] = near;
    return out;
}

json tree_json(const Graph& g, const TreeFactor& tree) {
    json edges = json::array();
    for (int k : tree.tree_edges) {
        edges.push_back({g.edges()[k].i, g.edges()[k].j});
    }
    return edges;
}

json to_json(const ConsensusCertificate& cert, const Graph& g) {
    return {{"lambda2", num(cert.lambda2)},
            {"gamma_m", num(cert.gamma_m)},
            {"alpha", num(cert.alpha_min)},
            {"alpha_bar", num(cert.alpha_bar)},
            {"condition_value", num(cert.condition_value)},
            {"certified", cert.certified},
            {"mu", num(cert.mu)},
            {"kappa", num(cert.kappa)},
            {"rho", cert.rho ? num(*cert.rho) : json(nullptr)},
            {"spanning_tree", tree_json(g, cert.tree)},
            {"M_tilde", matrix_json(cert.M_tilde)}};
}

json to_json(const BoundReport& rep) {
    json out = {{"rho", num(rep.rho)},
                {"max_ratio", rep.max_ratio ? num(*rep.max_ratio) : json(nullptr)},
                {"max_ratio_time", rep.max_ratio ? num(rep.max_ratio_time) : json(nullptr)},
                {"inconclusive", rep.inconclusive},
                {"sup_DtY", num(rep.sup_DtY)},
                {"pass", rep.pass}};
    return out;
}

json verdict_at(const RationalFunction& h_i, const RationalFunction& h_j, double gamma, const PRTestOptions& opts) {
    json out = {{"gamma", num(gamma)}};
    try {
        out["verdict"] = to_json(pr_test(build_omega(h_i, h_j, gamma), opts));
    } catch (const IllPosedLoopError& e) {
        out["ill_posed"] = e.what();
    }
    return out;
}

}  // namespace hetcon
