#include "hetcon/state_space.hpp"

#include "hetcon/errors.hpp"

namespace hetcon {

Complex StateSpace::eval(Complex s) const {
    const int n = order();
    if (n == 0) {
        return D_ft;
    }
    Eigen::MatrixXcd M = s * Eigen::MatrixXcd::Identity(n, n) - A.cast<Complex>();
    Eigen::VectorXcd x = M.partialPivLu().solve(B.cast<Complex>());
    return (C.cast<Complex>() * x)(0) + D_ft;
}

StateSpace to_state_space(const RationalFunction& h) {
    if (!h.is_proper()) {
        throw ProperError("cannot realize improper transfer function " + to_string(h));
    }
    const Polynomial& den = h.den();  // monic
    const int n = den.degree();

    StateSpace ss;
    ss.D_ft = (h.num().degree() == n && !h.num().is_zero()) ? h.num()[n] / den.leading() : 0.0;

    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.B = Eigen::VectorXd::Zero(n);
    ss.C = Eigen::RowVectorXd::Zero(n);
    if (n == 0) {
        return ss;
    }
    for (int k = 0; k + 1 < n; ++k) {
        ss.A(k, k + 1) = 1.0;
    }
    for (int k = 0; k < n; ++k) {
        ss.A(n - 1, k) = -den[k];
        // Strictly proper remainder num - D_ft*den.
        ss.C(k) = h.num()[k] - ss.D_ft * den[k];
    }
    ss.B(n - 1) = 1.0;
    return ss;
}

}  // namespace hetcon
