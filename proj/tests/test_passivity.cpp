#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hetcon/errors.hpp"
#include "hetcon/passivity.hpp"
#include "hetcon/sweep.hpp"
#include "support.hpp"

using namespace hetcon;
using testing::rf;

namespace {

// Oracle: dense Hermitian eigensolver on Omega(jw) + Omega(jw)^H built from
// direct complex division.
double oracle_min_eig(const RationalFunction& h_i, const RationalFunction& h_j, double gamma, double w) {
    const Complex s(0.0, w);
    auto g = [&](const RationalFunction& h) {
        const Complex v = h.num().eval(s) / h.den().eval(s);
        return v / (1.0 - gamma * v);
    };
    const Complex a = g(h_i), b = g(h_j);
    Eigen::Matrix2cd om;
    om << a, -b, -a, b;
    const Eigen::Matrix2cd herm = om + om.adjoint();
    return Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(herm).eigenvalues()(0);
}

}  // namespace

TEST_CASE("build_omega examples") {
    const OmegaMatrix o0 = build_omega(rf({1}, {1, 1}), rf({1}, {1, 1}), 0.0);
    CHECK(o0.g_i == rf({1}, {1, 1}));
    CHECK(o0.g_j == rf({1}, {1, 1}));

    const OmegaMatrix o1 = build_omega(rf({1}, {1, 1}), rf({1}, {2, 1}), 1.0);
    CHECK(o1.g_i == rf({1}, {0, 1}));
    CHECK(o1.g_j == rf({1}, {1, 1}));

    const OmegaMatrix o2 = build_omega(rf({1}, {1, 1}), rf({1}, {1, 1}), 1.0);
    const Eigen::Matrix2cd m = o2.eval(1.0);
    CHECK(std::abs(m(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(m(0, 1) + 1.0) < 1e-15);
    CHECK(std::abs(m(1, 0) + 1.0) < 1e-15);

    try {
        build_omega(rf({1}, {1, 1}), rf({1}, {1}), 1.0);
        FAIL("expected ill-posed loop");
    } catch (const IllPosedLoopError& e) {
        CHECK(e.node == 2);
    }
}

TEST_CASE("hermitian part examples") {
    const OmegaMatrix o = build_omega(rf({1}, {1, 1}), rf({1}, {1, 1}), 0.0);
    CHECK(std::abs(hermitian_part_min_eig(o, 0.0)) < 1e-15);
    CHECK(std::abs(hermitian_part_min_eig(o, 1e8)) < 1e-12);

    // identical pair: PSD iff Re a >= 0, and then the min eig is 0
    CHECK(std::abs(hermitian_min_eig(Complex(0.3, -2.0), Complex(0.3, -2.0))) < 1e-15);
    CHECK(hermitian_min_eig(Complex(-0.3, 1.0), Complex(-0.3, 1.0)) < 0.0);

    const OmegaMatrix pole = build_omega(rf({1}, {0, 1}), rf({1}, {0, 1}), 0.0);
    CHECK_THROWS_AS(hermitian_part_min_eig(pole, 0.0), ExcludedFrequencyError);
    CHECK_THROWS_AS(hermitian_part_min_eig(pole, 5e-7), ExcludedFrequencyError);
    CHECK_NOTHROW(hermitian_part_min_eig(pole, 2e-6));
}

TEST_CASE("closed form agrees with a dense eigensolver") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 500; ++k) {
        const Complex a(u(rng), u(rng)), b(u(rng), u(rng));
        Eigen::Matrix2cd om;
        om << a, -b, -a, b;
        const double dense = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(om + om.adjoint()).eigenvalues()(0);
        CHECK(std::abs(hermitian_min_eig(a, b) - dense) < 1e-12);
    }
    const RationalFunction hi = rf({1, 0.5}, {2, 3, 1});
    const RationalFunction hj = rf({2}, {3, 1});
    for (double gamma : {-3.0, -0.5, 0.0, 0.4}) {
        const OmegaMatrix o = build_omega(hi, hj, gamma);
        for (double w : {0.0, 0.01, 0.7, 3.0, 40.0}) {
            CHECK(std::abs(hermitian_part_min_eig(o, w) - oracle_min_eig(hi, hj, gamma, w)) < 1e-12);
        }
    }
}

TEST_CASE("pr_test examples") {
    const RationalFunction lag = rf({1}, {1, 1});

    const PRVerdict v1 = pr_test(build_omega(lag, lag, 1.0));
    CHECK(v1.pass);
    CHECK(v1.a.pass);
    CHECK(v1.b.pass);
    REQUIRE(v1.c.poles.size() == 1);
    const ImaginaryPoleCheck& pc = v1.c.poles[0];
    CHECK(pc.simple);
    Eigen::Matrix2cd r;
    r << 1, -1, -1, 1;
    CHECK((pc.residue - r).norm() < 1e-12);
    CHECK(std::abs(pc.eigs(0)) < 1e-12);
    CHECK(std::abs(pc.eigs(1) - 2.0) < 1e-12);

    const PRVerdict v2 = pr_test(build_omega(lag, lag, 1.5));
    CHECK_FALSE(v2.pass);
    CHECK_FALSE(v2.a.pass);
    REQUIRE(v2.a.rhp_poles.size() == 1);
    CHECK(std::abs(v2.a.rhp_poles[0] - 0.5) < 1e-12);

    // strictly stable passive pairs at gamma = 0
    const std::vector<RationalFunction> passive = {lag, rf({1}, {2, 1}), rf({1, 1}, {2, 3, 1}), rf({3, 1}, {1, 1})};
    for (const auto& a : passive) {
        for (const auto& b : passive) {
            if (a == b) {
                CHECK(pr_test(build_omega(a, b, 0.0)).pass);
            }
        }
    }
    CHECK(v1.pass == (v1.a.pass && v1.b.pass && v1.c.pass));
}

TEST_CASE("condition (c) failures are verdicts") {
    // double integrator: repeated pole on the axis
    const RationalFunction dint = rf({1}, {0, 0, 1});
    const PRVerdict v = pr_test(build_omega(dint, dint, 0.0));
    CHECK_FALSE(v.pass);
    CHECK_FALSE(v.c.pass);
    CHECK_FALSE(v.c.poles.at(0).simple);

    // negative residue
    const RationalFunction neg = rf({-1}, {0, 1});
    CHECK_FALSE(pr_test(build_omega(neg, neg, 0.0)).c.pass);

    // oscillator 1/(s^2+4) is not positive real: residues at +-2j are +-1/(4j)
    const RationalFunction osc = rf({1}, {4, 0, 1});
    const PRVerdict vo = pr_test(build_omega(osc, osc, 0.0));
    CHECK_FALSE(vo.pass);
    REQUIRE(vo.c.poles.size() == 2);
    CHECK((vo.c.poles[0].residue - vo.c.poles[1].residue.conjugate()).norm() < 1e-12);

    // s/(s^2+4) is lossless PR
    const RationalFunction lossless = rf({0, 1}, {4, 0, 1});
    CHECK(pr_test(build_omega(lossless, lossless, 0.0)).pass);
}

TEST_CASE("sweep kernels agree bit for bit") {
    const OmegaMatrix o = build_omega(rf({1, 0.2}, {4, 0.4, 1}), rf({1}, {2, 1}), -0.7);
    const auto grid = log_frequency_grid(1e-4, 1e4, 20000);
    const auto a = sweep_min_eig_serial(o.g_i, o.g_j, grid);
    const auto b = sweep_min_eig_omp(o.g_i, o.g_j, grid);
    REQUIRE(a.size() == b.size());
    for (size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k] == b[k]);
    }
    PRTestOptions serial;
    serial.parallel = false;
    const PRVerdict vs = pr_test(o, serial);
    const PRVerdict vp = pr_test(o);
    CHECK(vs.b.min_eig == vp.b.min_eig);
    CHECK(vs.b.argmin_w == vp.b.argmin_w);
}

TEST_CASE("frequency grid construction") {
    const auto g = log_frequency_grid(1e-4, 1e4, 2000);
    CHECK(g.front() == doctest::Approx(1e-4));
    CHECK(g.back() == doctest::Approx(1e4));
    const auto fine = log_frequency_grid(1e-4, 1e4, 10 * 1999 + 1);
    for (size_t k = 0; k < g.size(); ++k) {
        CHECK(fine[10 * k] == g[k]);
    }

    PRTestOptions opts;
    const auto grid = build_frequency_grid(opts, {Complex(0.0, 2.0)});
    CHECK(grid.front() == 0.0);
    for (double w : grid) {
        CHECK(std::abs(w - 2.0) >= exclusion_radius(Complex(0.0, 2.0)));
    }
    // approach points on both sides of the pole
    CHECK(std::count_if(grid.begin(), grid.end(), [](double w) { return w < 2.0 && w > 2.0 - 1e-4; }) > 0);
    CHECK(std::count_if(grid.begin(), grid.end(), [](double w) { return w > 2.0 && w < 2.0 + 1e-4; }) > 0);
}

TEST_CASE("monotone refinement of condition (b)") {
    // mildly non-PR pairs: a denser grid never raises the grid minimum
    const RationalFunction hi = rf({1, -0.1}, {1, 1});
    const RationalFunction hj = rf({1}, {4, 0.4, 1});
    for (double gamma : {-5.0, -1.0, 0.0}) {
        const OmegaMatrix o = build_omega(hi, hj, gamma);
        PRTestOptions coarse;
        coarse.refine_rounds = 0;
        PRTestOptions dense = coarse;
        dense.points = 10 * (coarse.points - 1) + 1;
        const PRVerdict vc = pr_test(o, coarse);
        const PRVerdict vd = pr_test(o, dense);
        CHECK(vd.b.min_eig <= vc.b.min_eig);
        if (!vc.b.pass) {
            CHECK_FALSE(vd.b.pass);
        }
    }
}

TEST_CASE("ofp index closed forms") {
    for (double a : {1.0, 3.0}) {
        const GapIndex g = ofp_index(rf({1}, {a, 1}));
        CHECK(std::abs(g.gamma_star - a) <= 1e-4);
        CHECK(g.bracket_high - g.bracket_low <= 1e-4);
        CHECK(g.gamma_star == g.bracket_low);
    }
    CHECK(std::abs(ofp_index(rf({1}, {0, 1})).gamma_star) <= 1e-4);
}

TEST_CASE("gap index bracket and down-closedness") {
    const RationalFunction h1 = rf({1}, {1, 1});
    const RationalFunction h2 = rf({1}, {2, 1});
    const GapIndex g = gap_index(h1, h2);
    CHECK_FALSE(g.unbounded_above);
    CHECK(g.bracket_high - g.bracket_low <= 1e-4);
    PRTestOptions opts;
    CHECK(gap_passes(h1, h2, g.bracket_low, opts));
    CHECK_FALSE(gap_passes(h1, h2, g.bracket_high, opts));
    CHECK(gap_passes(h1, h2, g.gamma_star - 10 * 1e-4, opts));
    CHECK_FALSE(gap_passes(h1, h2, g.gamma_star + 10 * 1e-4, opts));

    const GapIndex swapped = gap_index(h2, h1);
    CHECK(std::abs(swapped.gamma_star - g.gamma_star) <= 1e-4);

    // identical pair goes through the same path as ofp_index
    const GapIndex same = gap_index(h2, h2);
    CHECK(same.gamma_star == ofp_index(h2).gamma_star);
}

TEST_CASE("ill-posed gamma is a fail point") {
    // (s+2)/(s+1): at gamma = 1 the loop is improper
    PRTestOptions opts;
    CHECK_FALSE(gap_passes(rf({2, 1}, {1, 1}), rf({2, 1}, {1, 1}), 1.0, opts));
    // static unit gain: D - gamma N == 0 at gamma = 1
    CHECK_FALSE(gap_passes(rf({1}, {1}), rf({1}, {1}), 1.0, opts));
    const GapIndex g = ofp_index(rf({1}, {1}));
    CHECK(g.gamma_star <= 1.0);
    CHECK(g.gamma_star >= 1.0 - 1e-4);
}

TEST_CASE("pairs with no pass point raise") {
    // unstable beyond any feedback in range: s - 2000 in the numerator flips sign
    const RationalFunction active = rf({-1}, {1, 1});
    CHECK_THROWS_AS(ofp_index(active), NotGapPassiveError);
}

TEST_CASE("unbounded above is flagged") {
    // zero transfer function: Omega == 0 is PR for every gamma
    const GapIndex g = ofp_index(rf({0}, {1, 1}));
    CHECK(g.unbounded_above);
    CHECK(std::isinf(g.bracket_high));
}
