#pragma once

#include <string>
#include <vector>

#include "hetcon/polynomial.hpp"

namespace hetcon {

inline constexpr double kAxisTolerance = 1e-9;
inline constexpr double kMultiplicityRadius = 1e-7;
inline constexpr double kCancellationRadius = 1e-7;

/// SISO real-rational transfer function num(s)/den(s), den normalized monic.
///
/// Properness is not enforced here: H/(1 - gamma*H) may legitimately lose
/// properness, and callers that need it check is_proper().
class RationalFunction {
public:
    RationalFunction() : num_{0.0}, den_{1.0} {}
    RationalFunction(Polynomial num, Polynomial den);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_proper() const { return num_.is_zero() || num_.degree() <= den_.degree(); }
    bool is_strictly_proper() const { return num_.is_zero() || num_.degree() < den_.degree(); }

    friend bool operator==(const RationalFunction&, const RationalFunction&) = default;

private:
    Polynomial num_;
    Polynomial den_;
};

enum class PoleClass { StrictLeft, ImaginaryAxis, RightHalfPlane };

const char* to_string(PoleClass c);
PoleClass classify_pole(Complex p, double axis_tol);

struct Pole {
    Complex value;
    int multiplicity = 1;
    PoleClass cls = PoleClass::StrictLeft;
};

struct PoleSet {
    std::vector<Pole> poles;

    int total_multiplicity() const;
    std::vector<Pole> of_class(PoleClass c) const;
};

/// Groups roots lying within `radius` of each other; the representative is
/// the cluster mean. Output is ordered by ascending real part, then imaginary.
std::vector<Pole> cluster_roots(const std::vector<Complex>& roots, double radius);

/// Horner evaluation; throws PoleEvaluationError when den(s) vanishes.
Complex rf_eval(const RationalFunction& h, Complex s);

/// N/(D - gamma*N), re-normalized. Throws IllPosedLoopError if D - gamma*N == 0.
/// The result may be improper; check is_proper() before relying on it.
RationalFunction rf_feedback_scale(const RationalFunction& h, double gamma);

PoleSet rf_poles(const RationalFunction& h, double axis_tol = kAxisTolerance);

/// num(s0)/den'(s0) at a simple pole s0.
Complex rf_residue(const RationalFunction& h, Complex s0);

/// Numerator/denominator root pairs closer than `radius`. They are reported,
/// never cancelled.
struct NearCancellation {
    Complex zero;
    Complex pole;
    double distance;
};
std::vector<NearCancellation> near_cancellations(const RationalFunction& h,
                                                 double radius = kCancellationRadius);

std::string to_string(const RationalFunction& h);

}  // namespace hetcon
