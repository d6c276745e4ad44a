#include "hetcon/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <string>
#include <utility>

#include "hetcon/errors.hpp"

namespace hetcon {

double Graph::min_weight() const {
    if (edges_.empty()) {
        return 0.0;
    }
    double w = edges_.front().weight;
    for (const Edge& e : edges_) {
        w = std::min(w, e.weight);
    }
    return w;
}

double Graph::max_weight() const {
    if (edges_.empty()) {
        return 0.0;
    }
    double w = edges_.front().weight;
    for (const Edge& e : edges_) {
        w = std::max(w, e.weight);
    }
    return w;
}

Graph build_graph(int n, std::vector<Edge> edges) {
    if (n < 1) {
        throw GraphError(GraphError::Kind::Empty, "graph must have at least one node");
    }
    std::set<std::pair<int, int>> seen;
    for (const Edge& e : edges) {
        const std::string tag = "edge (" + std::to_string(e.i) + "," + std::to_string(e.j) + ")";
        if (e.i < 1 || e.i > n || e.j < 1 || e.j > n) {
            throw GraphError(GraphError::Kind::BadNodeId, tag + ": node id outside 1.." + std::to_string(n));
        }
        if (e.i == e.j) {
            throw GraphError(GraphError::Kind::SelfLoop, tag + ": self-loop");
        }
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
            throw GraphError(GraphError::Kind::NonPositiveWeight, tag + ": weight must be positive and finite");
        }
        if (!seen.emplace(std::min(e.i, e.j), std::max(e.i, e.j)).second) {
            throw GraphError(GraphError::Kind::DuplicateEdge, tag + ": duplicate edge");
        }
    }

    Graph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.adjacency_.assign(n, {});
    for (const Edge& e : g.edges_) {
        g.adjacency_[e.i - 1].push_back(e.j);
        g.adjacency_[e.j - 1].push_back(e.i);
    }
    for (auto& nb : g.adjacency_) {
        std::sort(nb.begin(), nb.end());
    }

    std::vector<bool> visited(n, false);
    std::queue<int> frontier;
    frontier.push(1);
    visited[0] = true;
    int reached = 1;
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        for (int w : g.adjacency_[v - 1]) {
            if (!visited[w - 1]) {
                visited[w - 1] = true;
                ++reached;
                frontier.push(w);
            }
        }
    }
    if (reached != n) {
        const auto it = std::find(visited.begin(), visited.end(), false);
        throw GraphError(GraphError::Kind::Disconnected,
                         "graph is disconnected: node " + std::to_string(it - visited.begin() + 1) +
                             " is unreachable from node 1");
    }
    return g;
}

Eigen::MatrixXi incidence_matrix(const Graph& g) {
    Eigen::MatrixXi D = Eigen::MatrixXi::Zero(g.n(), g.p());
    for (int k = 0; k < g.p(); ++k) {
        D(g.edges()[k].i - 1, k) = 1;
        D(g.edges()[k].j - 1, k) = -1;
    }
    return D;
}

Eigen::MatrixXi laplacian(const Graph& g) {
    Eigen::MatrixXi L = Eigen::MatrixXi::Zero(g.n(), g.n());
    for (int v = 1; v <= g.n(); ++v) {
        L(v - 1, v - 1) = static_cast<int>(g.neighbors(v).size());
        for (int w : g.neighbors(v)) {
            L(v - 1, w - 1) = -1;
        }
    }
    const Eigen::MatrixXi D = incidence_matrix(g);
    if (L != D * D.transpose()) {
        throw InternalConsistencyError("Laplacian differs from D*D^T");
    }
    return L;
}

Eigen::MatrixXd coupling_matrix(const Graph& g) {
    const Eigen::MatrixXd D = incidence_matrix(g).cast<double>();
    Eigen::VectorXd psi(g.p());
    for (int k = 0; k < g.p(); ++k) {
        psi(k) = g.edges()[k].weight;
    }
    return D * psi.asDiagonal() * D.transpose();
}

GraphSpectrum graph_spectrum(const Graph& g) {
    const Eigen::MatrixXd L = laplacian(g).cast<double>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L, Eigen::EigenvaluesOnly);
    GraphSpectrum s;
    s.laplacian_eigs = solver.eigenvalues();
    s.lambda2 = g.n() >= 2 ? s.laplacian_eigs(1) : 0.0;
    s.rank_L = numerical_rank(L);
    return s;
}

double lambda2(const Graph& g) { return graph_spectrum(g).lambda2; }

int numerical_rank(const Eigen::MatrixXd& m, double tol) {
    if (m.size() == 0) {
        return 0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return static_cast<int>((svd.singularValues().array() > tol).count());
}

namespace {

TreeFactor make_tree(const Graph& g, std::vector<int> edges) {
    std::sort(edges.begin(), edges.end());
    const Eigen::MatrixXi D = incidence_matrix(g);
    TreeFactor t;
    t.D_ST.resize(g.n(), static_cast<Eigen::Index>(edges.size()));
    for (size_t c = 0; c < edges.size(); ++c) {
        t.D_ST.col(static_cast<Eigen::Index>(c)) = D.col(edges[c]);
    }
    t.tree_edges = std::move(edges);
    return t;
}

}  // namespace

TreeFactor spanning_tree(const Graph& g, int root) {
    if (root < 1 || root > g.n()) {
        throw GraphError(GraphError::Kind::BadNodeId, "spanning-tree root " + std::to_string(root) + " out of range");
    }
    // Edge index lookup for (min, max) node pairs.
    std::vector<std::vector<int>> edge_of(g.n(), std::vector<int>(g.n(), -1));
    for (int k = 0; k < g.p(); ++k) {
        edge_of[g.edges()[k].i - 1][g.edges()[k].j - 1] = k;
        edge_of[g.edges()[k].j - 1][g.edges()[k].i - 1] = k;
    }
    std::vector<bool> visited(g.n(), false);
    std::vector<int> tree;
    std::queue<int> frontier;
    frontier.push(root);
    visited[root - 1] = true;
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        for (int w : g.neighbors(v)) {
            if (!visited[w - 1]) {
                visited[w - 1] = true;
                tree.push_back(edge_of[v - 1][w - 1]);
                frontier.push(w);
            }
        }
    }
    if (static_cast<int>(tree.size()) != g.n() - 1) {
        throw GraphError(GraphError::Kind::Disconnected, "graph is disconnected; no spanning tree");
    }
    return make_tree(g, std::move(tree));
}

TreeFactor tree_from_edges(const Graph& g, std::vector<int> edge_indices) {
    if (static_cast<int>(edge_indices.size()) != g.n() - 1) {
        throw GraphError(GraphError::Kind::Disconnected, "a spanning tree needs exactly n-1 edges");
    }
    // Union-find: n-1 edges without a cycle span the graph.
    std::vector<int> parent(g.n());
    for (int v = 0; v < g.n(); ++v) {
        parent[v] = v;
    }
    auto find = [&](int v) {
        while (parent[v] != v) {
            v = parent[v] = parent[parent[v]];
        }
        return v;
    };
    for (int k : edge_indices) {
        if (k < 0 || k >= g.p()) {
            throw GraphError(GraphError::Kind::BadNodeId, "tree edge index out of range");
        }
        const int a = find(g.edges()[k].i - 1);
        const int b = find(g.edges()[k].j - 1);
        if (a == b) {
            throw GraphError(GraphError::Kind::Disconnected, "tree edges contain a cycle");
        }
        parent[a] = b;
    }
    return make_tree(g, std::move(edge_indices));
}

TreeFactor tree_factor(const Eigen::MatrixXi& D, TreeFactor tree) {
    const Eigen::MatrixXd Dst = tree.D_ST.cast<double>();
    const Eigen::MatrixXd Dd = D.cast<double>();
    const Eigen::Index n = D.rows();

    Eigen::MatrixXd Qf;
    if (Dst.cols() == 0) {
        Qf = Eigen::MatrixXd::Zero(0, D.cols());
    } else {
        Qf = (Dst.transpose() * Dst).ldlt().solve(Dst.transpose() * Dd);
    }
    const Eigen::MatrixXd Qr = Qf.array().round().matrix();
    if (Qf.size() > 0 && (Qf - Qr).cwiseAbs().maxCoeff() > 1e-6) {
        throw InternalConsistencyError("tree factor is not integral; tree does not match graph");
    }
    tree.Q = Qr.cast<int>();

    if (tree.D_ST * tree.Q != D) {
        throw InternalConsistencyError("D_ST * Q != D");
    }
    if (tree.Q.size() > 0 && tree.Q.cwiseAbs().maxCoeff() > 1) {
        throw InternalConsistencyError("tree factor has entries outside {-1, 0, 1}");
    }
    if (numerical_rank(Qr) != n - 1) {
        throw InternalConsistencyError("tree factor does not have rank n-1");
    }
    return tree;
}

TreeFactor factor_graph(const Graph& g, int root) {
    return tree_factor(incidence_matrix(g), spanning_tree(g, root));
}

}  // namespace hetcon
