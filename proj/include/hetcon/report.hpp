#pragma once

#include <nlohmann/json.hpp>

#include "hetcon/consensus.hpp"
#include "hetcon/netsim.hpp"
#include "hetcon/passivity.hpp"

namespace hetcon {

// Non-finite numbers serialize as null.

nlohmann::json complex_json(Complex z);
nlohmann::json matrix_json(const Eigen::MatrixXd& m);
nlohmann::json matrix_json(const Eigen::MatrixXi& m);

nlohmann::json to_json(const PRVerdict& v);
nlohmann::json to_json(const GapIndex& g);
nlohmann::json node_json(int id, const RationalFunction& h, double axis_tol);
nlohmann::json tree_json(const Graph& g, const TreeFactor& tree);
nlohmann::json to_json(const ConsensusCertificate& cert, const Graph& g);
nlohmann::json to_json(const BoundReport& rep);

/// PR verdict of the pair at a single gamma, or {"ill_posed": ...}.
nlohmann::json verdict_at(const RationalFunction& h_i, const RationalFunction& h_j, double gamma,
                          const PRTestOptions& opts);

}  // namespace hetcon
