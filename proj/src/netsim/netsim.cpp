#include "hetcon/netsim.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>

#include <omp.h>

#include "hetcon/errors.hpp"
#include "hetcon/state_space.hpp"

namespace hetcon {

ClosedLoopSystem assemble_closed_loop(const Network& net) {
    const int n = net.graph.n();
    std::vector<StateSpace> parts;
    parts.reserve(n);
    int nx = 0;
    ClosedLoopSystem cls;
    for (const RationalFunction& h : net.nodes) {
        parts.push_back(to_state_space(h));
        cls.state_offset.push_back(nx);
        nx += parts.back().order();
    }

    cls.n = n;
    cls.p = net.graph.p();
    cls.A_blk = Eigen::MatrixXd::Zero(nx, nx);
    cls.B_blk = Eigen::MatrixXd::Zero(nx, n);
    cls.C_blk = Eigen::MatrixXd::Zero(n, nx);
    cls.D_ft = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < n; ++k) {
        const int off = cls.state_offset[k];
        const int m = parts[k].order();
        cls.A_blk.block(off, off, m, m) = parts[k].A;
        cls.B_blk.block(off, k, m, 1) = parts[k].B;
        cls.C_blk.block(k, off, 1, m) = parts[k].C;
        cls.D_ft(k) = parts[k].D_ft;
    }

    cls.K = coupling_matrix(net.graph);
    cls.Dt = incidence_matrix(net.graph).cast<double>().transpose();
    const Eigen::MatrixXd loop = Eigen::MatrixXd::Identity(n, n) + cls.K * cls.D_ft.asDiagonal();
    const double det = loop.determinant();
    if (!(std::abs(det) > 1e-9)) {
        std::ostringstream os;
        os << "algebraic loop is ill-posed: det(I + K D_ft) = " << det;
        throw IllPosedLoopError(os.str());
    }
    cls.S = loop.inverse();
    cls.A_cl = cls.A_blk - cls.B_blk * cls.S * cls.K * cls.C_blk;
    cls.B_cl = cls.B_blk * cls.S;
    return cls;
}

SimulationTrace simulate(const ClosedLoopSystem& cls, const std::vector<Signal>& inputs, const SimOptions& opts) {
    if (!(opts.dt > 0.0) || !(opts.t_end >= opts.dt)) {
        throw ValidationError("simulation needs dt > 0 and t_end >= dt");
    }
    if (static_cast<int>(inputs.size()) != cls.n) {
        throw ValidationError("one input signal per node is required");
    }
    const int nx = cls.state_dim();
    const int n = cls.n;
    const double dt = opts.dt;
    const long steps = std::lround(opts.t_end / dt);

    std::vector<Signal> w;
    w.reserve(n);
    SimulationTrace tr;
    tr.dt = dt;
    for (const Signal& s : inputs) {
        w.push_back(s.snapped(dt));
        tr.finite_energy = tr.finite_energy && s.is_finite_energy();
    }

    Eigen::VectorXd x = Eigen::VectorXd::Zero(nx);
    if (opts.x0) {
        if (opts.x0->size() != nx) {
            throw ValidationError("initial state has the wrong dimension");
        }
        x = *opts.x0;
        tr.zero_initial_state = x.isZero(0.0);
    }

    const long rows = steps + 1;
    tr.t.resize(rows);
    tr.W.resize(rows, n);
    tr.U.resize(rows, n);
    tr.Y.resize(rows, n);

    Eigen::VectorXd wk(n);
    Eigen::VectorXd wm(n);
    Eigen::VectorXd we(n);
    auto sample = [&](double t, Eigen::VectorXd& out, int mode) {
        for (int i = 0; i < n; ++i) {
            out(i) = mode < 0 ? w[i].left_limit(t) : w[i](t);
        }
    };
    auto record = [&](long k, const Eigen::VectorXd& xs, const Eigen::VectorXd& ws) {
        const Eigen::VectorXd u = cls.S * (ws - cls.K * (cls.C_blk * xs));
        const Eigen::VectorXd y = cls.C_blk * xs + cls.D_ft.cwiseProduct(u);
        tr.t(k) = static_cast<double>(k) * dt;
        tr.W.row(k) = ws.transpose();
        tr.U.row(k) = u.transpose();
        tr.Y.row(k) = y.transpose();
    };

    for (long k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        sample(t, wk, +1);
        sample(t + 0.5 * dt, wm, 0);
        sample(t + dt, we, -1);
        record(k, x, wk);

        const Eigen::VectorXd bk = cls.B_cl * wk;
        const Eigen::VectorXd bm = cls.B_cl * wm;
        const Eigen::VectorXd be = cls.B_cl * we;
        const Eigen::VectorXd k1 = cls.A_cl * x + bk;
        const Eigen::VectorXd k2 = cls.A_cl * (x + 0.5 * dt * k1) + bm;
        const Eigen::VectorXd k3 = cls.A_cl * (x + 0.5 * dt * k2) + bm;
        const Eigen::VectorXd k4 = cls.A_cl * (x + dt * k3) + be;
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if (!x.allFinite() || (nx > 0 && x.cwiseAbs().maxCoeff() > 1e12)) {
            std::ostringstream os;
            os << "closed-loop state diverged at t = " << t + dt;
            throw InstabilityError(os.str(), t + dt);
        }
    }
    sample(static_cast<double>(steps) * dt, wk, +1);
    record(steps, x, wk);

    tr.DtY = tr.Y * cls.Dt.transpose();
    tr.DtW = tr.W * cls.Dt.transpose();
    tr.norm_DtY = running_truncated_norm(tr.DtY, dt);
    tr.norm_DtW = running_truncated_norm(tr.DtW, dt);
    const Eigen::MatrixXd resid = tr.U - (tr.W - tr.Y * cls.K.transpose());
    tr.consistency_residual = resid.size() > 0 ? resid.cwiseAbs().maxCoeff() : 0.0;
    return tr;
}

std::vector<SimulationTrace> simulate_batch_serial(const ClosedLoopSystem& cls,
                                                   const std::vector<std::vector<Signal>>& runs,
                                                   const SimOptions& opts) {
    std::vector<SimulationTrace> out;
    out.reserve(runs.size());
    for (const auto& run : runs) {
        out.push_back(simulate(cls, run, opts));
    }
    return out;
}

std::vector<SimulationTrace> simulate_batch_omp(const ClosedLoopSystem& cls,
                                                const std::vector<std::vector<Signal>>& runs,
                                                const SimOptions& opts, int jobs) {
    const long count = static_cast<long>(runs.size());
    std::vector<SimulationTrace> out(runs.size());
    std::vector<std::exception_ptr> errors(runs.size());
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long k = 0; k < count; ++k) {
        try {
            out[k] = simulate(cls, runs[k], opts);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

Eigen::VectorXd running_truncated_norm(const Eigen::MatrixXd& samples, double dt) {
    const Eigen::Index rows = samples.rows();
    Eigen::VectorXd out(rows);
    if (rows == 0) {
        return out;
    }
    const Eigen::VectorXd sq = samples.rowwise().squaredNorm();
    double acc = 0.0;
    out(0) = 0.0;
    for (Eigen::Index k = 1; k < rows; ++k) {
        acc += 0.5 * dt * (sq(k - 1) + sq(k));
        out(k) = std::sqrt(acc);
    }
    return out;
}

double truncated_norm(const Eigen::MatrixXd& samples, double dt, double T) {
    const double idx = T / dt;
    const long k = std::lround(idx);
    if (T < 0.0 || std::abs(idx - static_cast<double>(k)) > 1e-9 * std::max(1.0, idx)) {
        throw RangeError("truncation time is not on the sample grid");
    }
    if (k >= samples.rows()) {
        throw RangeError("truncation time lies beyond the end of the trace");
    }
    double acc = 0.0;
    for (long m = 1; m <= k; ++m) {
        acc += 0.5 * dt * (samples.row(m - 1).squaredNorm() + samples.row(m).squaredNorm());
    }
    return std::sqrt(acc);
}

Eigen::VectorXd ratio_curve(const SimulationTrace& trace, double norm_floor) {
    Eigen::VectorXd r(trace.samples());
    for (int k = 0; k < trace.samples(); ++k) {
        r(k) = trace.norm_DtW(k) > norm_floor ? trace.norm_DtY(k) / trace.norm_DtW(k)
                                              : std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

BoundReport verify_bound(const SimulationTrace& trace, const ConsensusCertificate& cert, const VerifyOptions& opts) {
    if (!cert.certified || !cert.rho) {
        throw ValidationError("bound verification needs a certified network");
    }
    if (!trace.zero_initial_state) {
        throw ValidationError("bound verification needs a zero-initial-state trace");
    }
    if (!trace.finite_energy) {
        throw ValidationError("bound verification needs finite-energy inputs");
    }
    BoundReport rep;
    rep.rho = *cert.rho;
    rep.ratio = ratio_curve(trace, opts.norm_floor);
    rep.sup_DtY = trace.DtY.size() > 0 ? trace.DtY.rowwise().norm().maxCoeff() : 0.0;
    for (int k = 0; k < rep.ratio.size(); ++k) {
        if (std::isnan(rep.ratio(k))) {
            continue;
        }
        if (!rep.max_ratio || rep.ratio(k) > *rep.max_ratio) {
            rep.max_ratio = rep.ratio(k);
            rep.max_ratio_time = trace.t(k);
        }
    }
    if (!rep.max_ratio) {
        rep.inconclusive = true;
        rep.pass = rep.sup_DtY < opts.invariant_floor;
    } else {
        rep.pass = *rep.max_ratio <= rep.rho * (1.0 + opts.ratio_slack);
    }
    return rep;
}

namespace {

void put(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

}  // namespace

void write_trace_csv(std::ostream& os, const SimulationTrace& trace, double norm_floor) {
    const int n = static_cast<int>(trace.W.cols());
    os << 't';
    for (const char* tag : {"w", "u", "y"}) {
        for (int i = 1; i <= n; ++i) {
            os << ',' << tag << '_' << i;
        }
    }
    os << ",norm_DtY,norm_DtW,ratio\n";
    const Eigen::VectorXd ratio = ratio_curve(trace, norm_floor);
    for (int k = 0; k < trace.samples(); ++k) {
        put(os, trace.t(k));
        for (const Eigen::MatrixXd* m : {&trace.W, &trace.U, &trace.Y}) {
            for (int i = 0; i < n; ++i) {
                os << ',';
                put(os, (*m)(k, i));
            }
        }
        os << ',';
        put(os, trace.norm_DtY(k));
        os << ',';
        put(os, trace.norm_DtW(k));
        os << ',';
        if (!std::isnan(ratio(k))) {
            put(os, ratio(k));
        }
        os << '\n';
    }
}

}  // namespace hetcon
