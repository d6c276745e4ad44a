#include "hetcon/sweep.hpp"

#include <cmath>

#include "hetcon/passivity.hpp"

namespace hetcon {

double hermitian_min_eig(Complex a, Complex b) {
    const double p = 2.0 * a.real();
    const double q = 2.0 * b.real();
    const double c = std::abs(b + std::conj(a));
    const double half_diff = 0.5 * (p - q);
    return 0.5 * (p + q) - std::sqrt(half_diff * half_diff + c * c);
}

namespace {

inline double min_eig_at(const RationalFunction& g_i, const RationalFunction& g_j, double w) {
    const Complex s(0.0, w);
    const Complex a = g_i.num().eval(s) / g_i.den().eval(s);
    const Complex b = g_j.num().eval(s) / g_j.den().eval(s);
    return hermitian_min_eig(a, b);
}

}  // namespace

std::vector<double> sweep_min_eig_serial(const RationalFunction& g_i, const RationalFunction& g_j,
                                         std::span<const double> omegas) {
    std::vector<double> out(omegas.size());
    for (size_t k = 0; k < omegas.size(); ++k) {
        out[k] = min_eig_at(g_i, g_j, omegas[k]);
    }
    return out;
}

std::vector<double> sweep_min_eig_omp(const RationalFunction& g_i, const RationalFunction& g_j,
                                      std::span<const double> omegas) {
    const auto n = static_cast<long>(omegas.size());
    std::vector<double> out(omegas.size());
#pragma omp parallel for schedule(static) if (n > 256)
    for (long k = 0; k < n; ++k) {
        out[k] = min_eig_at(g_i, g_j, omegas[k]);
    }
    return out;
}

std::vector<double> log_frequency_grid(double w_min, double w_max, int points) {
    std::vector<double> out;
    if (points <= 0) {
        return out;
    }
    if (points == 1) {
        return {w_min};
    }
    const double l0 = std::log10(w_min);
    const double l1 = std::log10(w_max);
    out.resize(points);
    for (int k = 0; k < points; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(points - 1);
        out[k] = std::pow(10.0, l0 + t * (l1 - l0));
    }
    return out;
}

}  // namespace hetcon
