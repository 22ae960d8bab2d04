#include "qho/quad.hpp"

#include <cmath>
#include <stdexcept>

namespace qho {

namespace {

// Legendre P_n(x) and derivative via the three-term recurrence.
void legendre_eval(int n, const Real& x, Real& p, Real& dp) {
    Real p0 = 1, p1 = x;
    if (n == 0) {
        p = p0;
        dp = 0;
        return;
    }
    for (int j = 2; j <= n; ++j) {
        Real p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1);
}

// Orthonormal Hermite polynomials for weight exp(-x^2): h_n = H_n / sqrt(2^n n! sqrt(pi)).
// Returns h_n(x) and h_{n-1}(x); h_n' = sqrt(2n) h_{n-1}.
void hermite_eval(int n, const Real& x, Real& pn, Real& pnm1) {
    static const Real pim4 = 1 / pow(pi_value(), Real(1) / 4);
    Real p0 = pim4, p1 = x * sqrt(Real(2)) * pim4;
    if (n == 0) {
        pn = p0;
        pnm1 = 0;
        return;
    }
    for (int j = 2; j <= n; ++j) {
        Real p2 = x * sqrt(Real(2) / j) * p1 - sqrt(Real(j - 1) / j) * p0;
        p0 = p1;
        p1 = p2;
    }
    pn = p1;
    pnm1 = p0;
}

}  // namespace

QuadRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const Real pi = pi_value();
    const unsigned prec = current_precision_bits();
    const Real tol = pow2(-static_cast<int>(prec) + 8);
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        Real z = cos(pi * (i + Real(3) / 4) / (n + Real(1) / 2));
        Real p, dp;
        for (int it = 0; it < 200; ++it) {
            legendre_eval(n, z, p, dp);
            Real dz = p / dp;
            z -= dz;
            if (abs(dz) <= tol * (1 + abs(z))) break;
        }
        legendre_eval(n, z, p, dp);
        Real w = 2 / ((1 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = z;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0;  // exact center
    return rule;
}

QuadRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n >= 1 required");
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const unsigned prec = current_precision_bits();
    const Real tol = pow2(-static_cast<int>(prec) + 8);
    int m = (n + 1) / 2;
    Real z = 0;
    for (int i = 0; i < m; ++i) {
        // double-precision initial guesses, then Newton at full precision
        if (i == 0)
            z = sqrt(Real(2 * n + 1)) - Real(1.85575) * pow(Real(2 * n + 1), Real(-0.16667));
        else if (i == 1)
            z -= Real(1.14) * pow(Real(n), Real(0.426)) / z;
        else if (i == 2)
            z = Real(1.86) * z - Real(0.86) * rule.nodes[n - 1];
        else if (i == 3)
            z = Real(1.91) * z - Real(0.91) * rule.nodes[n - 2];
        else
            z = 2 * z - rule.nodes[n - i + 1];
        Real pn, pnm1;
        for (int it = 0; it < 200; ++it) {
            hermite_eval(n, z, pn, pnm1);
            Real dp = sqrt(Real(2 * n)) * pnm1;
            Real dz = pn / dp;
            z -= dz;
            if (abs(dz) <= tol * (1 + abs(z))) break;
        }
        hermite_eval(n, z, pn, pnm1);
        Real w = 1 / (n * pnm1 * pnm1);
        rule.nodes[n - 1 - i] = z;
        rule.weights[n - 1 - i] = w;
        rule.nodes[i] = -z;
        rule.weights[i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0;
    return rule;
}

}  // namespace qho
