#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "hetcon/consensus.hpp"
#include "hetcon/signal.hpp"

namespace hetcon {

/// Stacked node realizations closed through u = w - K y, K = D Psi D^T.
struct ClosedLoopSystem {
    int n = 0;
    int p = 0;
    Eigen::MatrixXd A_blk;  // nx x nx
    Eigen::MatrixXd B_blk;  // nx x n
    Eigen::MatrixXd C_blk;  // n x nx
    Eigen::VectorXd D_ft;   // n
    Eigen::MatrixXd K;      // n x n
    Eigen::MatrixXd S;      // (I + K diag(D_ft))^{-1}
    Eigen::MatrixXd A_cl;   // A_blk - B_blk S K C_blk
    Eigen::MatrixXd B_cl;   // B_blk S
    Eigen::MatrixXd Dt;     // D^T, p x n
    std::vector<int> state_offset;

    int state_dim() const { return static_cast<int>(A_blk.rows()); }
};

/// Throws IllPosedLoopError when |det(I + K diag(D_ft))| <= 1e-9.
ClosedLoopSystem assemble_closed_loop(const Network& net);

struct SimOptions {
    double dt = 1e-3;
    double t_end = 10.0;
    /// Nonzero initial state is exploratory only; such traces cannot be used
    /// for bound verification.
    std::optional<Eigen::VectorXd> x0;
};

/// Samples on t_k = k dt, rows indexed by k.
struct SimulationTrace {
    double dt = 0.0;
    Eigen::VectorXd t;
    Eigen::MatrixXd W;
    Eigen::MatrixXd U;
    Eigen::MatrixXd Y;
    Eigen::MatrixXd DtY;
    Eigen::MatrixXd DtW;
    Eigen::VectorXd norm_DtY;  // running truncated norms
    Eigen::VectorXd norm_DtW;
    bool zero_initial_state = true;
    bool finite_energy = true;
    double consistency_residual = 0.0;  // max |u - (w - K y)|

    int samples() const { return static_cast<int>(t.size()); }
};

/// Classic fixed-step RK4 on the closed loop. Step and pulse edges are snapped
/// to the grid and inputs are evaluated one-sided within each step. Throws
/// InstabilityError on NaN or |x| > 1e12.
SimulationTrace simulate(const ClosedLoopSystem& cls, const std::vector<Signal>& inputs, const SimOptions& opts);

/// Independent runs; the OpenMP version returns the same traces as the serial one.
std::vector<SimulationTrace> simulate_batch_serial(const ClosedLoopSystem& cls,
                                                   const std::vector<std::vector<Signal>>& runs,
                                                   const SimOptions& opts);
std::vector<SimulationTrace> simulate_batch_omp(const ClosedLoopSystem& cls,
                                                const std::vector<std::vector<Signal>>& runs,
                                                const SimOptions& opts, int jobs = 0);

/// (int_0^T |x(t)|^2 dt)^{1/2} by the trapezoid rule over row samples.
/// Throws RangeError when T is off the grid or past the last sample.
double truncated_norm(const Eigen::MatrixXd& samples, double dt, double T);

/// Truncated norm at every grid time.
Eigen::VectorXd running_truncated_norm(const Eigen::MatrixXd& samples, double dt);

struct VerifyOptions {
    double ratio_slack = 1e-2;
    double norm_floor = 1e-9;
    double invariant_floor = 1e-6;
};

struct BoundReport {
    double rho = 0.0;
    std::optional<double> max_ratio;
    double max_ratio_time = 0.0;
    /// ||D^T W||_T stayed below the floor for every T; then only D^T Y == 0
    /// can be checked.
    bool inconclusive = false;
    double sup_DtY = 0.0;  // max_t |D^T Y(t)|
    bool pass = false;
    Eigen::VectorXd ratio;  // NaN where ||D^T W||_T <= norm_floor
};

/// Throws ValidationError unless the certificate is certified and the trace is
/// zero-state with finite-energy inputs.
BoundReport verify_bound(const SimulationTrace& trace, const ConsensusCertificate& cert, const VerifyOptions& opts = {});

/// Ratio ||D^T Y||_T / ||D^T W||_T, NaN below `norm_floor`.
Eigen::VectorXd ratio_curve(const SimulationTrace& trace, double norm_floor = 1e-9);

/// Header `t,w_1..w_n,u_1..u_n,y_1..y_n,norm_DtY,norm_DtW,ratio`.
void write_trace_csv(std::ostream& os, const SimulationTrace& trace, double norm_floor = 1e-9);

}  // namespace hetcon
