#include "hetcon/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "hetcon/errors.hpp"

namespace hetcon {

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) { trim(); }

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
    if (coeffs_.empty()) {
        coeffs_ = {0.0};
        return;
    }
    double max_abs = 0.0;
    for (double c : coeffs_) {
        max_abs = std::max(max_abs, std::abs(c));
    }
    if (max_abs == 0.0) {
        coeffs_ = {0.0};
        return;
    }
    const double cut = kTrimTolerance * max_abs;
    while (coeffs_.size() > 1 && std::abs(coeffs_.back()) < cut) {
        coeffs_.pop_back();
    }
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots) {
    std::vector<Complex> c{Complex(1.0)};
    for (const Complex& r : roots) {
        std::vector<Complex> next(c.size() + 1, Complex(0.0));
        for (size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    std::vector<double> real(c.size());
    std::transform(c.begin(), c.end(), real.begin(), [](Complex z) { return z.real(); });
    return Polynomial(std::move(real));
}

Complex Polynomial::eval(Complex s) const {
    Complex acc(0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

double Polynomial::eval(double s) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

double Polynomial::magnitude_scale(Complex s) const {
    const double r = std::abs(s);
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * r + std::abs(*it);
    }
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) {
        return Polynomial();
    }
    std::vector<double> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) {
        d[k - 1] = static_cast<double>(k) * coeffs_[k];
    }
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    std::vector<double> out(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
    for (size_t k = 0; k < out.size(); ++k) {
        out[k] = (*this)[static_cast<int>(k)] + rhs[static_cast<int>(k)];
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const { return *this + rhs * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    std::vector<double> out(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
    for (size_t a = 0; a < coeffs_.size(); ++a) {
        for (size_t b = 0; b < rhs.coeffs_.size(); ++b) {
            out[a + b] += coeffs_[a] * rhs.coeffs_[b];
        }
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(double c) const {
    std::vector<double> out = coeffs_;
    for (double& v : out) {
        v *= c;
    }
    return Polynomial(std::move(out));
}

namespace {

// Parlett-Reinsch diagonal balancing, in place.
void balance(Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    constexpr double radix = 2.0;
    bool converged = false;
    while (!converged) {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0;
            double r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j != i) {
                    c += std::abs(m(j, i));
                    r += std::abs(m(i, j));
                }
            }
            if (c == 0.0 || r == 0.0) {
                continue;
            }
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix * radix;
            }
            if ((c + r) / f < 0.95 * s) {
                converged = false;
                m.row(i) /= f;
                m.col(i) *= f;
            }
        }
    }
}

Complex polish(const Polynomial& p, const Polynomial& dp, Complex r) {
    Complex best = r;
    double best_res = std::abs(p.eval(r));
    for (int it = 0; it < 3 && best_res > 0.0; ++it) {
        const Complex d = dp.eval(best);
        if (std::abs(d) == 0.0) {
            break;
        }
        const Complex next = best - p.eval(best) / d;
        const double res = std::abs(p.eval(next));
        if (!(res < best_res)) {
            break;
        }
        best = next;
        best_res = res;
    }
    return best;
}

}  // namespace

std::vector<Complex> poly_roots(const Polynomial& p) {
    const int n = p.degree();
    if (n < 1) {
        throw NoRootsError();
    }

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        companion(k, n - 1) = -p[k] / p.leading();
        if (k > 0) {
            companion(k, k - 1) = 1.0;
        }
    }
    balance(companion);

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const Polynomial dp = p.derivative();
    std::vector<Complex> raw(n);
    for (int k = 0; k < n; ++k) {
        raw[k] = polish(p, dp, solver.eigenvalues()[k]);
    }

    // Enforce conjugate symmetry: snap near-real roots, average conjugate pairs.
    auto tol = [](Complex z) { return 1e-7 * std::max(1.0, std::abs(z)); };
    std::vector<Complex> out;
    std::vector<Complex> upper;
    std::vector<Complex> lower;
    for (const Complex& r : raw) {
        if (std::abs(r.imag()) <= tol(r)) {
            out.emplace_back(r.real(), 0.0);
        } else if (r.imag() > 0.0) {
            upper.push_back(r);
        } else {
            lower.push_back(r);
        }
    }
    std::vector<bool> used(lower.size(), false);
    for (const Complex& u : upper) {
        size_t best = lower.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < lower.size(); ++k) {
            const double d = std::abs(std::conj(lower[k]) - u);
            if (!used[k] && d < best_d) {
                best = k;
                best_d = d;
            }
        }
        if (best == lower.size()) {
            out.push_back(u);
            continue;
        }
        used[best] = true;
        const Complex mean = 0.5 * (u + std::conj(lower[best]));
        out.push_back(mean);
        out.push_back(std::conj(mean));
    }
    for (size_t k = 0; k < lower.size(); ++k) {
        if (!used[k]) {
            out.push_back(lower[k]);
        }
    }

    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

}  // namespace hetcon
