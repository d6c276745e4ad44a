#include "hetcon/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "hetcon/errors.hpp"

namespace hetcon {

Network make_network(Graph graph, std::vector<RationalFunction> nodes) {
    if (static_cast<int>(nodes.size()) != graph.n()) {
        throw ValidationError("network has " + std::to_string(nodes.size()) + " node functions but the graph has " +
                              std::to_string(graph.n()) + " nodes");
    }
    for (size_t k = 0; k < nodes.size(); ++k) {
        if (!nodes[k].is_proper()) {
            throw ValidationError("node " + std::to_string(k + 1) + " transfer function is improper");
        }
    }
    return Network{std::move(graph), std::move(nodes)};
}

namespace {

void fill_extrema(HeterogeneityProfile& prof) {
    prof.gamma_m = std::numeric_limits<double>::infinity();
    prof.alpha_min = std::numeric_limits<double>::infinity();
    prof.alpha_bar = -std::numeric_limits<double>::infinity();
    for (const EdgeGap& e : prof.edges) {
        prof.gamma_m = std::min(prof.gamma_m, e.gap.gamma_star);
        prof.alpha_min = std::min(prof.alpha_min, e.weight);
        prof.alpha_bar = std::max(prof.alpha_bar, e.weight);
    }
    if (prof.edges.empty()) {
        prof.gamma_m = 0.0;
        prof.alpha_min = 0.0;
        prof.alpha_bar = 0.0;
    }
}

}  // namespace

HeterogeneityProfile heterogeneity_profile(const Network& net, const GapOptions& opts, int jobs) {
    const int p = net.graph.p();
    HeterogeneityProfile prof;
    prof.edges.resize(p);
    std::vector<std::exception_ptr> errors(p);

    GapOptions edge_opts = opts;
    if (jobs > 1) {
        edge_opts.pr.parallel = false;
    }

#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs)) if (jobs > 1)
    for (int k = 0; k < p; ++k) {
        const Edge& e = net.graph.edges()[k];
        EdgeGap& out = prof.edges[k];
        out.edge = k;
        out.i = e.i;
        out.j = e.j;
        out.weight = e.weight;
        try {
            out.gap = gap_index(net.nodes[e.i - 1], net.nodes[e.j - 1], edge_opts);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }

    for (int k = 0; k < p; ++k) {
        if (!errors[k]) {
            continue;
        }
        const Edge& e = net.graph.edges()[k];
        try {
            std::rethrow_exception(errors[k]);
        } catch (const NotGapPassiveError& err) {
            throw NotGapPassiveError("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) + "): " + err.what(),
                                     e.i, e.j);
        }
    }
    fill_extrema(prof);
    return prof;
}

HeterogeneityProfile profile_from_gammas(const Graph& g, const std::vector<double>& gammas) {
    if (static_cast<int>(gammas.size()) != g.p()) {
        throw ValidationError("need one gap value per edge");
    }
    HeterogeneityProfile prof;
    for (int k = 0; k < g.p(); ++k) {
        EdgeGap e;
        e.edge = k;
        e.i = g.edges()[k].i;
        e.j = g.edges()[k].j;
        e.weight = g.edges()[k].weight;
        e.gap.gamma_star = e.gap.bracket_low = e.gap.bracket_high = gammas[k];
        prof.edges.push_back(e);
    }
    fill_extrema(prof);
    return prof;
}

Eigen::MatrixXd build_M(const Eigen::MatrixXi& Q, const Eigen::VectorXd& R, double gamma, const Eigen::MatrixXi& D) {
    if (Q.cols() != R.size() || D.cols() != R.size()) {
        throw ValidationError("build_M: dimension mismatch between Q, R and D");
    }
    if (R.size() > 0 && R.minCoeff() <= 0.0) {
        throw ValidationError("build_M: R must have a strictly positive diagonal");
    }
    const Eigen::MatrixXd Qd = Q.cast<double>();
    const Eigen::MatrixXd Dd = D.cast<double>();
    const Eigen::MatrixXd inner =
        gamma * Eigen::MatrixXd(R.asDiagonal()) + R.asDiagonal() * (Dd.transpose() * Dd) * R.asDiagonal();
    const Eigen::MatrixXd M = Qd * inner * Qd.transpose();
    return 0.5 * (M + M.transpose());
}

namespace {

double min_eig(const Eigen::MatrixXd& m) {
    if (m.size() == 0) {
        return std::numeric_limits<double>::infinity();
    }
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

double max_eig(const Eigen::MatrixXd& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    const auto ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
    return ev(ev.size() - 1);
}

}  // namespace

PdCheck pd_check(const Graph& g, const Eigen::VectorXd& R, double gamma) {
    const TreeFactor tf = factor_graph(g);
    const Eigen::MatrixXd M = build_M(tf.Q, R, gamma, incidence_matrix(g));
    PdCheck chk;
    chk.r = R.minCoeff();
    chk.lambda2 = lambda2(g);
    chk.predicted = gamma + chk.r * chk.lambda2 > 0.0;
    chk.min_eig = min_eig(M);
    chk.actual = chk.min_eig > 0.0;
    return chk;
}

double smallest_nonzero_singular_value(const Graph& g, const Eigen::VectorXd& R) {
    const Eigen::MatrixXd DR = incidence_matrix(g).cast<double>() * R.cwiseSqrt().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(DR);
    // Rank is n-1 for a connected graph; singular values are sorted descending.
    return svd.singularValues()(g.n() - 2);
}

ConsensusCertificate certify(const Graph& g, const HeterogeneityProfile& profile, const TreeChoice& choice) {
    ConsensusCertificate cert;
    const Eigen::MatrixXi D = incidence_matrix(g);
    cert.tree = tree_factor(D, choice.edges ? tree_from_edges(g, *choice.edges) : spanning_tree(g, choice.root));
    cert.lambda2 = lambda2(g);
    cert.gamma_m = profile.gamma_m;
    cert.alpha_min = profile.alpha_min;
    cert.alpha_bar = profile.alpha_bar;
    cert.condition_value = cert.gamma_m + cert.alpha_min * cert.lambda2;

    Eigen::VectorXd psi(g.p());
    for (int k = 0; k < g.p(); ++k) {
        psi(k) = g.edges()[k].weight;
    }
    cert.M_tilde = build_M(cert.tree.Q, psi, cert.gamma_m, D);
    cert.mu = min_eig(cert.M_tilde);
    const Eigen::MatrixXd Qd = cert.tree.Q.cast<double>();
    cert.kappa = max_eig(Qd * Qd.transpose());

    cert.certified = g.p() > 0 && cert.condition_value > kPositivityMargin && cert.mu > kPositivityMargin;
    if (cert.certified) {
        cert.rho = cert.kappa * cert.alpha_bar / cert.mu;
    }
    return cert;
}

std::optional<double> min_rho_over_roots(const Graph& g, const HeterogeneityProfile& profile) {
    std::optional<double> best;
    for (int root = 1; root <= g.n(); ++root) {
        const ConsensusCertificate c = certify(g, profile, TreeChoice{root, std::nullopt});
        if (c.rho && (!best || *c.rho < *best)) {
            best = c.rho;
        }
    }
    return best;
}

}  // namespace hetcon
