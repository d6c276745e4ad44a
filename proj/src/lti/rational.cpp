#include "hetcon/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hetcon/errors.hpp"

namespace hetcon {

PoleEvaluationError::PoleEvaluationError(Complex nearest)
    : Error([&] {
          std::ostringstream os;
          os << "evaluation at a pole (nearest pole " << nearest.real() << (nearest.imag() < 0 ? "-" : "+")
             << std::abs(nearest.imag()) << "j)";
          return os.str();
      }()),
      nearest_pole(nearest) {}

RationalFunction::RationalFunction(Polynomial num, Polynomial den) {
    if (den.is_zero()) {
        throw ValidationError("rational function denominator is identically zero");
    }
    const double lead = den.leading();
    num_ = num * (1.0 / lead);
    den_ = den * (1.0 / lead);
}

const char* to_string(PoleClass c) {
    switch (c) {
        case PoleClass::StrictLeft:
            return "strict-left";
        case PoleClass::ImaginaryAxis:
            return "imaginary-axis";
        case PoleClass::RightHalfPlane:
            return "right-half-plane";
    }
    return "?";
}

PoleClass classify_pole(Complex p, double axis_tol) {
    if (std::abs(p.real()) <= axis_tol) {
        return PoleClass::ImaginaryAxis;
    }
    return p.real() > 0.0 ? PoleClass::RightHalfPlane : PoleClass::StrictLeft;
}

int PoleSet::total_multiplicity() const {
    int total = 0;
    for (const Pole& p : poles) {
        total += p.multiplicity;
    }
    return total;
}

std::vector<Pole> PoleSet::of_class(PoleClass c) const {
    std::vector<Pole> out;
    std::copy_if(poles.begin(), poles.end(), std::back_inserter(out), [c](const Pole& p) { return p.cls == c; });
    return out;
}

std::vector<Pole> cluster_roots(const std::vector<Complex>& roots, double radius) {
    struct Cluster {
        Complex sum;
        int count;
        Complex mean() const { return sum / static_cast<double>(count); }
    };
    std::vector<Cluster> clusters;
    for (const Complex& r : roots) {
        auto it = std::find_if(clusters.begin(), clusters.end(),
                               [&](const Cluster& c) { return std::abs(c.mean() - r) < radius; });
        if (it != clusters.end()) {
            it->sum += r;
            ++it->count;
        } else {
            clusters.push_back({r, 1});
        }
    }
    std::vector<Pole> out;
    out.reserve(clusters.size());
    for (const Cluster& c : clusters) {
        Complex m = c.mean();
        // Conjugate symmetry survives averaging only up to rounding; real clusters stay real.
        if (m.imag() != 0.0 && std::abs(m.imag()) < radius) {
            m = Complex(m.real(), 0.0);
        }
        out.push_back({m, c.count, PoleClass::StrictLeft});
    }
    std::sort(out.begin(), out.end(), [](const Pole& a, const Pole& b) {
        return a.value.real() != b.value.real() ? a.value.real() < b.value.real() : a.value.imag() < b.value.imag();
    });
    return out;
}

Complex rf_eval(const RationalFunction& h, Complex s) {
    const Complex d = h.den().eval(s);
    if (std::abs(d) <= 1e-14 * h.den().magnitude_scale(s)) {
        Complex nearest = s;
        double best = std::numeric_limits<double>::infinity();
        for (const Complex& p : poly_roots(h.den())) {
            if (std::abs(p - s) < best) {
                best = std::abs(p - s);
                nearest = p;
            }
        }
        throw PoleEvaluationError(nearest);
    }
    return h.num().eval(s) / d;
}

RationalFunction rf_feedback_scale(const RationalFunction& h, double gamma) {
    Polynomial den = h.den() - h.num() * gamma;
    if (den.is_zero()) {
        throw IllPosedLoopError("1 - gamma*H vanishes identically (gamma = " + std::to_string(gamma) + ")");
    }
    return RationalFunction(h.num(), std::move(den));
}

PoleSet rf_poles(const RationalFunction& h, double axis_tol) {
    PoleSet set;
    if (h.den().degree() < 1) {
        return set;
    }
    set.poles = cluster_roots(poly_roots(h.den()), kMultiplicityRadius);
    for (Pole& p : set.poles) {
        p.cls = classify_pole(p.value, axis_tol);
    }
    return set;
}

Complex rf_residue(const RationalFunction& h, Complex s0) {
    const PoleSet set = rf_poles(h);
    const Pole* nearest = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const Pole& p : set.poles) {
        if (std::abs(p.value - s0) < best) {
            best = std::abs(p.value - s0);
            nearest = &p;
        }
    }
    if (nearest == nullptr || best > kMultiplicityRadius * std::max(1.0, std::abs(s0))) {
        throw NotAPoleError("residue requested at a point that is not a pole");
    }
    if (nearest->multiplicity > 1) {
        throw RepeatedPoleError("residue requested at a pole of multiplicity " +
                                std::to_string(nearest->multiplicity));
    }
    return h.num().eval(s0) / h.den().derivative().eval(s0);
}

std::vector<NearCancellation> near_cancellations(const RationalFunction& h, double radius) {
    std::vector<NearCancellation> out;
    if (h.num().degree() < 1 || h.den().degree() < 1) {
        return out;
    }
    const auto zeros = poly_roots(h.num());
    const auto poles = poly_roots(h.den());
    for (const Complex& z : zeros) {
        for (const Complex& p : poles) {
            const double d = std::abs(z - p);
            if (d < radius) {
                out.push_back({z, p, d});
            }
        }
    }
    return out;
}

namespace {

std::string poly_string(const Polynomial& p) {
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k <= p.degree(); ++k) {
        const double c = p[k];
        if (c == 0.0 && p.degree() > 0) {
            continue;
        }
        if (!first) {
            os << (c < 0 ? " - " : " + ");
        } else if (c < 0) {
            os << "-";
        }
        os << std::abs(c);
        if (k == 1) {
            os << "s";
        } else if (k > 1) {
            os << "s^" << k;
        }
        first = false;
    }
    return os.str();
}

}  // namespace

std::string to_string(const RationalFunction& h) {
    return "(" + poly_string(h.num()) + ")/(" + poly_string(h.den()) + ")";
}

}  // namespace hetcon
