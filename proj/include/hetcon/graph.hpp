#pragma once

#include <ostream>
#include <vector>

#include <Eigen/Dense>

namespace hetcon {

/// Undirected weighted edge. Node ids are 1-based; `i` is the positive end.
struct Edge {
    int i = 0;
    int j = 0;
    double weight = 1.0;
};

/// Validated undirected, connected, simple graph with a fixed orientation.
class Graph {
public:
    int n() const { return n_; }
    int p() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    /// Ascending neighbor ids of 1-based node `v`.
    const std::vector<int>& neighbors(int v) const { return adjacency_[v - 1]; }
    double min_weight() const;
    double max_weight() const;

private:
    friend Graph build_graph(int n, std::vector<Edge> edges);
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adjacency_;
};

/// Throws GraphError (self-loop, duplicate edge, nonpositive weight, bad id,
/// disconnected).
Graph build_graph(int n, std::vector<Edge> edges);

/// n x p, column k holds +1 at edge k's first node and -1 at its second.
Eigen::MatrixXi incidence_matrix(const Graph& g);

/// Unweighted Laplacian from the adjacency definition; checked against D*D^T.
Eigen::MatrixXi laplacian(const Graph& g);

/// D * Psi * D^T with Psi = diag(edge weights in edge order).
Eigen::MatrixXd coupling_matrix(const Graph& g);

struct GraphSpectrum {
    Eigen::VectorXd laplacian_eigs;  // ascending
    double lambda2 = 0.0;
    int rank_L = 0;
};

GraphSpectrum graph_spectrum(const Graph& g);
double lambda2(const Graph& g);

struct TreeFactor {
    std::vector<int> tree_edges;  // ascending 0-based edge indices, size n-1
    Eigen::MatrixXi D_ST;         // n x (n-1)
    Eigen::MatrixXi Q;            // (n-1) x p, D_ST * Q = D
};

/// BFS spanning tree from `root` (1-based), visiting neighbors in ascending
/// id order. Fills tree_edges and D_ST; Q is left empty.
TreeFactor spanning_tree(const Graph& g, int root = 1);

/// Spanning tree made of the given edge indices. Throws GraphError if they do
/// not form a spanning tree.
TreeFactor tree_from_edges(const Graph& g, std::vector<int> edge_indices);

/// Q = (D_ST^T D_ST)^{-1} D_ST^T D rounded to integers. Throws
/// InternalConsistencyError when the rounding residual exceeds 1e-6 or any of
/// D_ST*Q = D, rank(Q) = n-1, Q in {-1,0,1} fails.
TreeFactor tree_factor(const Eigen::MatrixXi& D, TreeFactor tree);

/// Spanning tree plus its Q factor.
TreeFactor factor_graph(const Graph& g, int root = 1);

/// Numerical rank from singular values above `tol`.
int numerical_rank(const Eigen::MatrixXd& m, double tol = 1e-9);

template <typename Derived>
void write_matrix_csv(std::ostream& os, const Eigen::MatrixBase<Derived>& m) {
    const auto old = os.precision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) {
                os << ',';
            }
            os << m(r, c);
        }
        os << '\n';
    }
    os.precision(old);
}

}  // namespace hetcon
