#pragma once

#include <span>
#include <vector>

#include "hetcon/rational.hpp"

namespace hetcon {

// Hermitian-part sweep kernels for the 2x2 gap operator. Both produce the
// same values bit for bit; the serial one is the reference.

std::vector<double> sweep_min_eig_serial(const RationalFunction& g_i, const RationalFunction& g_j,
                                         std::span<const double> omegas);

std::vector<double> sweep_min_eig_omp(const RationalFunction& g_i, const RationalFunction& g_j,
                                      std::span<const double> omegas);

/// `points` log-spaced frequencies in [w_min, w_max]; the k-th point depends
/// only on k/(points-1), so a 10(N-1)+1 grid contains the N grid.
std::vector<double> log_frequency_grid(double w_min, double w_max, int points);

}  // namespace hetcon
