#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hetcon/rational.hpp"

namespace hetcon {

struct PRTestOptions {
    double w_min = 1e-4;
    double w_max = 1e4;
    int points = 2000;
    double psd_tol = 1e-8;
    double herm_tol = 1e-8;
    double axis_tol = kAxisTolerance;
    int refine_rounds = 3;
    /// Use the OpenMP sweep kernel; results are identical to the serial one.
    bool parallel = true;
    /// Skip conditions (b) and (c) once (a) fails; used inside bisection.
    bool stop_at_first_failure = false;
};

/// Pole-exclusion radius around an imaginary-axis pole p.
inline double exclusion_radius(Complex p) { return 1e-6 * std::max(1.0, std::abs(p)); }

/// The 2x2 gap operator [[g_i, -g_j], [-g_i, g_j]] with g = H/(1 - gamma*H).
struct OmegaMatrix {
    double gamma = 0.0;
    RationalFunction g_i;
    RationalFunction g_j;
    PoleSet poles_i;
    PoleSet poles_j;

    Eigen::Matrix2cd eval(Complex s) const;
    /// Union of the poles of g_i and g_j (shared poles listed once).
    std::vector<Pole> poles() const;
};

/// Throws IllPosedLoopError with node = 1 (for h_i) or 2 (for h_j).
OmegaMatrix build_omega(const RationalFunction& h_i, const RationalFunction& h_j, double gamma);

/// Smallest eigenvalue of [[2Re a, -(b + conj a)], [-(a + conj b), 2Re b]].
double hermitian_min_eig(Complex a, Complex b);

/// Smallest eigenvalue of Omega(jw) + Omega(jw)^H. Throws
/// ExcludedFrequencyError when jw sits inside the exclusion radius of an
/// imaginary-axis pole.
double hermitian_part_min_eig(const OmegaMatrix& omega, double w, double axis_tol = kAxisTolerance);

struct ConditionA {
    bool pass = true;
    bool proper = true;  // false: the loop lost properness (ill-posed)
    std::vector<Complex> rhp_poles;
};

struct ConditionB {
    bool evaluated = false;
    bool pass = true;
    double min_eig = 0.0;
    double argmin_w = 0.0;
    int grid_size = 0;
};

struct ImaginaryPoleCheck {
    Complex pole;
    bool simple = true;
    Eigen::Matrix2cd residue = Eigen::Matrix2cd::Zero();
    double hermitian_deviation = 0.0;
    Eigen::Vector2d eigs = Eigen::Vector2d::Zero();  // of (R + R^H)/2
    bool pass = true;
};

struct ConditionC {
    bool evaluated = false;
    bool pass = true;
    std::vector<ImaginaryPoleCheck> poles;
};

struct PRVerdict {
    bool pass = false;
    ConditionA a;
    ConditionB b;
    ConditionC c;
    int frequency_grid_size = 0;
    std::vector<std::string> warnings;
};

/// Positive-realness of Omega: (a) no right-half-plane poles, (b) Hermitian
/// part PSD on a refined frequency sweep, (c) simple imaginary poles with
/// Hermitian PSD residue matrices. Failures are verdicts, never exceptions.
PRVerdict pr_test(const OmegaMatrix& omega, const PRTestOptions& opts = {});

/// Sweep grid: w = 0, the log sweep, approach points around every
/// imaginary-axis pole; points inside an exclusion radius are dropped.
std::vector<double> build_frequency_grid(const PRTestOptions& opts, const std::vector<Complex>& imaginary_poles);

struct GapOptions {
    PRTestOptions pr;
    double gamma_tol = 1e-4;
};

/// Certified bracket for sup{gamma : Omega(gamma) is PR}.
struct GapIndex {
    double gamma_star = 0.0;  // == bracket_low (certified pass)
    double bracket_low = 0.0;
    double bracket_high = 0.0;  // +inf when unbounded_above
    double tolerance = 0.0;
    bool unbounded_above = false;
    int pr_tests = 0;
};

/// PR verdict at one gamma; an ill-posed loop counts as a failure.
bool gap_passes(const RationalFunction& h_i, const RationalFunction& h_j, double gamma, const PRTestOptions& opts);

/// Throws NotGapPassiveError if no gamma in {0, -1, -2, ..., -1024} passes.
GapIndex gap_index(const RationalFunction& h_i, const RationalFunction& h_j, const GapOptions& opts = {});

/// Incremental output-feedback passivity index: gap_index(h, h).
GapIndex ofp_index(const RationalFunction& h, const GapOptions& opts = {});

}  // namespace hetcon
