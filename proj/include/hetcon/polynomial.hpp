#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace hetcon {

using Complex = std::complex<double>;

/// Coefficients below this fraction of the largest |coefficient| are trimmed.
inline constexpr double kTrimTolerance = 1e-12;

/// Real polynomial, coefficients in ascending degree (coeffs[k] multiplies s^k).
///
/// Construction trims trailing near-zero coefficients, so degree() is the true
/// degree. The zero polynomial is stored as {0} and reports degree 0.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}
    Polynomial(std::initializer_list<double> coeffs);
    explicit Polynomial(std::vector<double> coeffs);

    static Polynomial from_roots(std::span<const Complex> roots);

    const std::vector<double>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    double leading() const { return coeffs_.back(); }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
    double operator[](int k) const { return k < static_cast<int>(coeffs_.size()) ? coeffs_[k] : 0.0; }

    Complex eval(Complex s) const;
    double eval(double s) const;
    /// Sum of |c_k| |s|^k; the natural scale for judging |p(s)| small.
    double magnitude_scale(Complex s) const;

    Polynomial derivative() const;

    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator-(const Polynomial& rhs) const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator*(double c) const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim();
    std::vector<double> coeffs_;
};

/// All deg(p) roots with multiplicity, from the eigenvalues of the companion
/// matrix. Near-real roots are snapped to the real axis and complex roots are
/// paired with their conjugates so the result is exactly conjugate-symmetric.
/// Throws NoRootsError for a constant polynomial.
std::vector<Complex> poly_roots(const Polynomial& p);

}  // namespace hetcon
