#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>
#include <sstream>

#include "hetcon/errors.hpp"
#include "hetcon/netsim.hpp"
#include "support.hpp"

using namespace hetcon;
using testing::rf;

namespace {

std::vector<Signal> same_input(int n, const SignalSpec& spec) { return std::vector<Signal>(n, make_signal(spec)); }

SimOptions opts(double dt, double t_end) {
    SimOptions o;
    o.dt = dt;
    o.t_end = t_end;
    return o;
}

}  // namespace

TEST_CASE("signal examples") {
    const Signal p = make_signal({Pulse{1.0, 0.0, 1.0}});
    CHECK(p(0.5) == 1.0);
    CHECK(p(1.5) == 0.0);
    CHECK(p(1.0) == 0.0);
    CHECK(p.left_limit(1.0) == 1.0);
    CHECK(p.left_limit(0.0) == 0.0);

    const Signal s = make_signal({Sine{2.0, 1.0, 0.0, 0.0}});
    CHECK(s(std::numbers::pi / 2) == doctest::Approx(2.0).epsilon(1e-15));

    const Signal se = make_signal({Step{1.0, 0.0}, ExpDecay{-1.0, 1.0}});
    CHECK(se(0.0) == 0.0);

    CHECK_THROWS_AS(make_signal({ExpDecay{1.0, -1.0}}), ValidationError);
    CHECK_THROWS_AS(make_signal({Sine{1.0, 1.0, 0.0, -0.5}}), ValidationError);
    CHECK_THROWS_AS(make_signal({Pulse{1.0, 2.0, 1.0}}), ValidationError);

    CHECK(make_signal({Pulse{}, ExpDecay{}, Sine{1.0, 2.0, 0.0, 0.3}}).is_finite_energy());
    CHECK_FALSE(make_signal({Step{}}).is_finite_energy());
    CHECK_FALSE(make_signal({Sine{}}).is_finite_energy());

    const Signal snapped = make_signal({Pulse{1.0, 0.10004, 0.2}}).snapped(1e-3);
    CHECK(std::get<Pulse>(snapped.spec()[0]).start == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("closed loop assembly") {
    const Graph k2 = build_graph(2, {{1, 2, 1.0}});
    const ClosedLoopSystem cls = assemble_closed_loop(make_network(k2, {rf({1}, {1, 1}), rf({1}, {1, 1})}));
    Eigen::Matrix2d A;
    A << -2, 1, 1, -2;
    CHECK((cls.A_cl - A).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(cls.S == Eigen::MatrixXd::Identity(2, 2));

    const ClosedLoopSystem one = assemble_closed_loop(make_network(build_graph(1, {}), {rf({1}, {1, 1})}));
    CHECK(one.K.isZero());
    CHECK(one.A_cl(0, 0) == -1.0);

    // feedthrough nodes: S = (I + K D)^-1
    const ClosedLoopSystem ft = assemble_closed_loop(make_network(k2, {rf({2, 1}, {1, 1}), rf({1}, {1, 1})}));
    const Eigen::MatrixXd loop = Eigen::MatrixXd::Identity(2, 2) + ft.K * ft.D_ft.asDiagonal();
    CHECK((ft.S * loop - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

    // I + K D singular: K = [[1,-1],[-1,1]], D = diag(-1, 0) -> det = 0
    CHECK_THROWS_AS(assemble_closed_loop(make_network(k2, {rf({-1}, {1}), rf({1}, {1, 1})})), IllPosedLoopError);
}

TEST_CASE("single node step response") {
    const ClosedLoopSystem cls = assemble_closed_loop(make_network(build_graph(1, {}), {rf({1}, {1, 1})}));
    const SimulationTrace tr = simulate(cls, same_input(1, {Step{1.0, 0.0}}), opts(1e-3, 2.0));
    CHECK(tr.samples() == 2001);
    CHECK(std::abs(tr.Y(1000, 0) - (1.0 - std::exp(-1.0))) < 1e-6);
    CHECK(tr.zero_initial_state);
    CHECK_FALSE(tr.finite_energy);

    const SimulationTrace zero = simulate(cls, same_input(1, {}), opts(1e-3, 1.0));
    CHECK(zero.Y.isZero(0.0));
    CHECK(zero.U.isZero(0.0));
}

TEST_CASE("RK4 order on a step input") {
    const ClosedLoopSystem cls = assemble_closed_loop(make_network(build_graph(1, {}), {rf({50}, {50, 1})}));
    auto max_err = [&](double dt) {
        const SimulationTrace tr = simulate(cls, same_input(1, {Step{1.0, 0.0}}), opts(dt, 1.0));
        double e = 0.0;
        for (int k = 0; k < tr.samples(); ++k) {
            e = std::max(e, std::abs(tr.Y(k, 0) - (1.0 - std::exp(-50.0 * tr.t(k)))));
        }
        return e;
    };
    const double order = std::log2(max_err(2e-3) / max_err(1e-3));
    CHECK(order >= 3.5);
}

TEST_CASE("symmetric K2 with identical inputs stays in consensus") {
    const Graph k2 = build_graph(2, {{1, 2, 1.0}});
    const ClosedLoopSystem cls = assemble_closed_loop(make_network(k2, {rf({1}, {1, 1}), rf({1}, {1, 1})}));
    const SimulationTrace tr = simulate(cls, same_input(2, {Pulse{1.0, 0.5, 2.0}, Sine{0.3, 2.0, 0.1, 0.5}}), opts(1e-3, 5.0));
    CHECK(tr.DtY.cwiseAbs().maxCoeff() == 0.0);
    CHECK(tr.DtW.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("truncated norm examples") {
    const double dt = 1e-3;
    Eigen::MatrixXd c = Eigen::MatrixXd::Constant(3001, 2, 1.5);
    CHECK(std::abs(truncated_norm(c, dt, 3.0) - std::sqrt(2 * 1.5 * 1.5) * std::sqrt(3.0)) < 1e-12);

    // pulse on [0,1): samples right-continuous, the trapezoid loses half a step at the edge
    Eigen::MatrixXd p(2001, 1);
    for (int k = 0; k <= 2000; ++k) {
        p(k, 0) = k < 1000 ? 1.0 : 0.0;
    }
    CHECK(std::abs(truncated_norm(p, dt, 2.0) - 1.0) < 1e-3);

    Eigen::MatrixXd e(20001, 1);
    for (int k = 0; k <= 20000; ++k) {
        e(k, 0) = std::exp(-k * dt);
    }
    CHECK(std::abs(truncated_norm(e, dt, 20.0) - std::sqrt(0.5)) < 1e-6);

    CHECK_THROWS_AS(truncated_norm(e, dt, 25.0), RangeError);
    CHECK_THROWS_AS(truncated_norm(e, dt, 1.00005), RangeError);

    const Eigen::VectorXd run = running_truncated_norm(e, dt);
    CHECK(run(10000) == doctest::Approx(truncated_norm(e, dt, 10.0)).epsilon(1e-12));
}

TEST_CASE("trace consistency and linearity") {
    const Graph g = build_graph(3, {{1, 2, 1.5}, {2, 3, 0.7}, {3, 1, 2.0}});
    const Network net = make_network(g, {rf({2, 1}, {1, 1}), rf({1}, {2, 0.5, 1}), rf({0.5, 0.2}, {3, 1})});
    const ClosedLoopSystem cls = assemble_closed_loop(net);
    std::vector<Signal> w = {make_signal({Pulse{1.0, 0.2, 1.0}}), make_signal({Sine{0.5, 3.0, 0.0, 0.4}}),
                             make_signal({ExpDecay{-0.8, 1.5}})};
    std::vector<Signal> w3 = {make_signal({Pulse{3.0, 0.2, 1.0}}), make_signal({Sine{1.5, 3.0, 0.0, 0.4}}),
                              make_signal({ExpDecay{-2.4, 1.5}})};
    const SimulationTrace a = simulate(cls, w, opts(1e-3, 6.0));
    const SimulationTrace b = simulate(cls, w3, opts(1e-3, 6.0));
    CHECK(a.consistency_residual < 1e-9 * (1.0 + a.W.cwiseAbs().maxCoeff()));
    const double scale = std::max(1.0, b.Y.cwiseAbs().maxCoeff());
    CHECK((b.Y - 3.0 * a.Y).cwiseAbs().maxCoeff() < 1e-9 * scale);
    CHECK((b.U - 3.0 * a.U).cwiseAbs().maxCoeff() < 1e-9 * scale);
}

TEST_CASE("instability is reported") {
    const ClosedLoopSystem cls = assemble_closed_loop(make_network(build_graph(1, {}), {rf({1}, {-5, 1})}));
    try {
        simulate(cls, same_input(1, {Step{1.0, 0.0}}), opts(1e-2, 20.0));
        FAIL("expected InstabilityError");
    } catch (const InstabilityError& e) {
        CHECK(e.time > 5.0);
        CHECK(e.time < 6.0);
    }
}

TEST_CASE("batch kernels agree") {
    const Graph g = build_graph(3, {{1, 2, 1.0}, {2, 3, 1.0}});
    const ClosedLoopSystem cls =
        assemble_closed_loop(make_network(g, {rf({1}, {1, 1}), rf({1}, {1.3, 1}), rf({1}, {0.9, 1})}));
    std::vector<std::vector<Signal>> runs;
    for (int r = 0; r < 6; ++r) {
        runs.push_back({make_signal({Pulse{1.0 + r, 0.0, 1.0}}), make_signal({}), make_signal({ExpDecay{0.5, 1.0 + r}})});
    }
    const auto s = simulate_batch_serial(cls, runs, opts(1e-3, 3.0));
    const auto p = simulate_batch_omp(cls, runs, opts(1e-3, 3.0), 3);
    for (size_t r = 0; r < runs.size(); ++r) {
        CHECK(s[r].Y == p[r].Y);
    }
}

TEST_CASE("verify_bound on the certified K2 example") {
    // both nodes 1/(s - 0.5) have OFP index -0.5; the certificate gives rho = 2/3
    const Graph k2 = build_graph(2, {{1, 2, 1.0}});
    const Network net = make_network(k2, {rf({1}, {-0.5, 1}), rf({1}, {-0.5, 1})});
    const ConsensusCertificate cert = certify(k2, profile_from_gammas(k2, {-0.5}));
    REQUIRE(cert.certified);
    const ClosedLoopSystem cls = assemble_closed_loop(net);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_real_distribution<double> t0(0.0, 4.0);
    for (int run = 0; run < 10; ++run) {
        std::vector<Signal> w;
        for (int i = 0; i < 2; ++i) {
            const double a = t0(rng);
            w.push_back(make_signal({Pulse{amp(rng), a, a + 1.0}, Pulse{amp(rng), a + 1.5, a + 2.0}}));
        }
        const SimulationTrace tr = simulate(cls, w, opts(1e-3, 10.0));
        const BoundReport rep = verify_bound(tr, cert);
        CHECK(rep.pass);
        REQUIRE(rep.max_ratio);
        CHECK(*rep.max_ratio <= 2.0 / 3.0 * 1.01);
    }
}

TEST_CASE("verify_bound preconditions and the inconclusive case") {
    const Graph k2 = build_graph(2, {{1, 2, 1.0}});
    const ClosedLoopSystem cls = assemble_closed_loop(make_network(k2, {rf({1}, {1, 1}), rf({1}, {1, 1})}));
    const ConsensusCertificate cert = certify(k2, profile_from_gammas(k2, {1.0}));
    const SimulationTrace same = simulate(cls, same_input(2, {Pulse{1.0, 0.0, 1.0}}), opts(1e-3, 3.0));
    const BoundReport rep = verify_bound(same, cert);
    CHECK(rep.inconclusive);
    CHECK(rep.pass);
    CHECK_FALSE(rep.max_ratio);

    const ConsensusCertificate bad = certify(k2, profile_from_gammas(k2, {-3.0}));
    CHECK_THROWS_AS(verify_bound(same, bad), ValidationError);

    SimOptions o = opts(1e-3, 1.0);
    o.x0 = Eigen::Vector2d(1.0, 0.0);
    const SimulationTrace ic = simulate(cls, same_input(2, {}), o);
    CHECK_FALSE(ic.zero_initial_state);
    CHECK_THROWS_AS(verify_bound(ic, cert), ValidationError);

    const SimulationTrace step = simulate(cls, same_input(2, {Step{}}), opts(1e-3, 1.0));
    CHECK_THROWS_AS(verify_bound(step, cert), ValidationError);
}

TEST_CASE("trace csv layout") {
    const ClosedLoopSystem cls = assemble_closed_loop(make_network(build_graph(2, {{1, 2, 1.0}}),
                                                                   {rf({1}, {1, 1}), rf({1}, {2, 1})}));
    const SimulationTrace tr =
        simulate(cls, {make_signal({Pulse{1.0, 0.0, 0.5}}), make_signal({})}, opts(0.25, 1.0));
    std::ostringstream os;
    write_trace_csv(os, tr);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,w_1,w_2,u_1,u_2,y_1,y_2,norm_DtY,norm_DtW,ratio");
    std::getline(in, line);
    CHECK(line.back() == ',');  // ratio blank at t = 0
    int rows = 1;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 9);
    }
    CHECK(rows == 5);
}
