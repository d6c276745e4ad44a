#pragma once

#include <random>
#include <vector>

#include "hetcon/graph.hpp"
#include "hetcon/rational.hpp"

namespace hetcon::testing {

inline RationalFunction rf(std::initializer_list<double> num, std::initializer_list<double> den) {
    return RationalFunction(Polynomial(num), Polynomial(den));
}

// Erdos-Renyi edges on n nodes, resampled until connected. Orientation and
// weights are random.
inline Graph random_connected_graph(std::mt19937_64& rng, int n, double prob = 0.5, double w_lo = 1.0,
                                    double w_hi = 1.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> w(w_lo, w_hi);
    for (;;) {
        std::vector<Edge> edges;
        for (int i = 1; i <= n; ++i) {
            for (int j = i + 1; j <= n; ++j) {
                if (u(rng) < prob) {
                    const double weight = w_lo == w_hi ? w_lo : w(rng);
                    edges.push_back(u(rng) < 0.5 ? Edge{i, j, weight} : Edge{j, i, weight});
                }
            }
        }
        try {
            return build_graph(n, edges);
        } catch (const std::exception&) {
        }
    }
}

}  // namespace hetcon::testing
