#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hetcon/graph.hpp"
#include "hetcon/passivity.hpp"
#include "hetcon/rational.hpp"

namespace hetcon {

inline constexpr double kPositivityMargin = 1e-9;

struct Network {
    Graph graph;
    std::vector<RationalFunction> nodes;  // nodes[k] is node k+1
};

/// Throws ValidationError if the node count differs from the graph or a node
/// transfer function is improper.
Network make_network(Graph graph, std::vector<RationalFunction> nodes);

struct EdgeGap {
    int edge = 0;  // 0-based edge index
    int i = 0;
    int j = 0;
    double weight = 0.0;
    GapIndex gap;
};

struct HeterogeneityProfile {
    std::vector<EdgeGap> edges;
    double gamma_m = 0.0;
    double alpha_min = 0.0;
    double alpha_bar = 0.0;
};

/// Gap index for every edge. `jobs` > 1 computes edges concurrently.
/// Throws NotGapPassiveError naming the first failing edge.
HeterogeneityProfile heterogeneity_profile(const Network& net, const GapOptions& opts = {}, int jobs = 1);

/// Profile with prescribed per-edge gap values (edge order), for analysis of
/// networks whose indices are known in closed form.
HeterogeneityProfile profile_from_gammas(const Graph& g, const std::vector<double>& gammas);

/// Q (gamma R + R D^T D R) Q^T, symmetrized. Throws ValidationError if R has a
/// nonpositive entry or dimensions disagree.
Eigen::MatrixXd build_M(const Eigen::MatrixXi& Q, const Eigen::VectorXd& R, double gamma, const Eigen::MatrixXi& D);

struct PdCheck {
    bool predicted = false;  // gamma + r*lambda2 > 0
    bool actual = false;     // min eig(M) > 0
    double min_eig = 0.0;
    double r = 0.0;
    double lambda2 = 0.0;
};

PdCheck pd_check(const Graph& g, const Eigen::VectorXd& R, double gamma);

/// Smallest nonzero singular value theta_{n-1} of D R^{1/2}.
double smallest_nonzero_singular_value(const Graph& g, const Eigen::VectorXd& R);

struct TreeChoice {
    int root = 1;
    std::optional<std::vector<int>> edges;  // explicit tree, overrides root
};

struct ConsensusCertificate {
    double lambda2 = 0.0;
    double gamma_m = 0.0;
    double alpha_min = 0.0;
    double alpha_bar = 0.0;
    double condition_value = 0.0;  // gamma_m + alpha_min * lambda2
    bool certified = false;
    Eigen::MatrixXd M_tilde;
    double mu = 0.0;     // min eig of M_tilde
    double kappa = 0.0;  // max eig of Q Q^T
    std::optional<double> rho;
    TreeFactor tree;
};

ConsensusCertificate certify(const Graph& g, const HeterogeneityProfile& profile, const TreeChoice& tree = {});

/// Smallest rho over BFS trees rooted at every node; nullopt when no tree
/// certifies.
std::optional<double> min_rho_over_roots(const Graph& g, const HeterogeneityProfile& profile);

}  // namespace hetcon
