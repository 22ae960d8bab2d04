#pragma once

#include "qho/errors.hpp"
#include "qho/real.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <vector>

namespace qho {

using BigInt = mp::cpp_int;

// Exact-integer to Real at the current default precision. Never use
// convert_to<Real>: it yields a number at the integer's own precision, which
// then propagates through expressions and truncates everything downstream.
inline Real bigint_to_real(const BigInt& v) { return parse_real(v.str()); }

// psi_n(x) = e^{-x^2/2} H_n(x) / sqrt(2^n n! sqrt(pi)), by the stable
// three-term recurrence on the normalized functions.
Real eval_psi(int n, const Real& x);

// sqrt(c) psi_n(c x), c > 0.
Real eval_psi_scaled(int n, const Real& c, const Real& x);

// Closed form of sum_n z^n psi_n(x) psi_n(y), |z| < 1.
Complex mehler_kernel(const Complex& z, const Real& x, const Real& y);

// Exact integer coefficients of H_n; coeffs[j] multiplies x^j.
std::vector<BigInt> hermite_coefficients(int n);

// 1 / sqrt(2^n n! sqrt(pi)) at working precision.
Real psi_normalization(int n);

// Positive zeros of H_n, ascending.
std::vector<Real> hermite_positive_zeros(int n);

// Integral of |psi_n| over the line: piecewise Gauss-Legendre between sign
// changes plus a certified tail bound. Returns (value, tail_bound).
struct OneNormResult {
    Real value;
    Real tail_bound;
};
OneNormResult one_norm_with_tail(int n);
Real one_norm(int n);

struct NormTable {
    int max_order = 0;
    std::vector<Real> one_norms;  // index j = 0..max_order
    Real tail_bound;              // largest tail estimate used

    static NormTable build(int max_order);
    const Real& operator[](int j) const { return one_norms.at(static_cast<size_t>(j)); }
    Real max_up_to(int j) const;
    std::string key_material() const;
};

// Envelope 2^n sqrt(n! n^n / (e^n sqrt(pi))); n = 0 uses 0^0 = 1.
Real lemma2_envelope(int n);

// |psi_n(x)| < 1.74 n^{-1/4} on the oscillatory interval [-sqrt(n), sqrt(n)].
bool check_lemma1(int n, std::span<const Real> grid);
// |psi_n(x)| <= lemma2_envelope(n) e^{-x^2/4} for |x| > 1.
bool check_lemma2(int n, std::span<const Real> grid);
// sup |psi_n| <= 1.086435 / pi^{1/4}.
bool check_charlier_cramer(int n, std::span<const Real> grid);

}  // namespace qho
