#pragma once

#include <Eigen/Dense>

#include "hetcon/rational.hpp"

namespace hetcon {

/// SISO realization x' = A x + B u, y = C x + D_ft u.
struct StateSpace {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    Eigen::RowVectorXd C;
    double D_ft = 0.0;

    int order() const { return static_cast<int>(A.rows()); }
    /// C (sI - A)^{-1} B + D_ft.
    Complex eval(Complex s) const;
};

/// Controllable canonical form. A biproper input has its feedthrough split
/// off first. Throws ProperError for improper input.
StateSpace to_state_space(const RationalFunction& h);

}  // namespace hetcon
