#include <cmath>
#include <limits>

#include "hetcon/errors.hpp"
#include "hetcon/passivity.hpp"

namespace hetcon {

namespace {
constexpr double kGammaBound = 1024.0;
}

bool gap_passes(const RationalFunction& h_i, const RationalFunction& h_j, double gamma, const PRTestOptions& opts) {
    OmegaMatrix omega;
    try {
        omega = build_omega(h_i, h_j, gamma);
    } catch (const IllPosedLoopError&) {
        return false;
    }
    return pr_test(omega, opts).pass;
}

GapIndex gap_index(const RationalFunction& h_i, const RationalFunction& h_j, const GapOptions& opts) {
    PRTestOptions pr = opts.pr;
    pr.stop_at_first_failure = true;

    GapIndex out;
    out.tolerance = opts.gamma_tol;
    auto passes = [&](double gamma) {
        ++out.pr_tests;
        return gap_passes(h_i, h_j, gamma, pr);
    };

    // Certified pass point from {0, -1, -2, -4, ..., -1024}.
    double lo = std::numeric_limits<double>::quiet_NaN();
    for (double gamma = 0.0; gamma >= -kGammaBound; gamma = (gamma == 0.0 ? -1.0 : 2.0 * gamma)) {
        if (passes(gamma)) {
            lo = gamma;
            break;
        }
    }
    if (std::isnan(lo)) {
        throw NotGapPassiveError("no certified pass point for gamma in [-1024, 0]: " + to_string(h_i) + " vs " +
                                 to_string(h_j));
    }

    // Certified fail point by doubling the step upward, capped at +1024.
    double hi = std::numeric_limits<double>::infinity();
    for (double step = 1.0;; step *= 2.0) {
        const double cand = std::min(lo + step, kGammaBound);
        if (passes(cand)) {
            lo = cand;
            if (cand >= kGammaBound) {
                out.unbounded_above = true;
                break;
            }
        } else {
            hi = cand;
            break;
        }
    }

    if (!out.unbounded_above) {
        // Feasible gammas are down-closed, so bisection keeps lo certified.
        while (hi - lo > opts.gamma_tol) {
            const double mid = 0.5 * (lo + hi);
            if (passes(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    out.bracket_low = lo;
    out.bracket_high = hi;
    out.gamma_star = lo;
    return out;
}

GapIndex ofp_index(const RationalFunction& h, const GapOptions& opts) { return gap_index(h, h, opts); }

}  // namespace hetcon
