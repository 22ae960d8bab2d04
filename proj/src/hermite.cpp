#include "qho/hermite.hpp"

#include "qho/quad.hpp"

#include <sstream>
#include <stdexcept>

namespace qho {

Real eval_psi(int n, const Real& x) {
    if (n < 0) throw std::invalid_argument("eval_psi: order must be nonnegative");
    Real p0 = exp(-x * x / 2) / pow(pi_value(), Real(1) / 4);
    if (n == 0) return p0;
    Real p1 = x * sqrt(Real(2)) * p0;
    for (int j = 2; j <= n; ++j) {
        Real p2 = x * sqrt(Real(2) / j) * p1 - sqrt(Real(j - 1) / j) * p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

Real eval_psi_scaled(int n, const Real& c, const Real& x) {
    if (!(c > 0)) throw DomainError("eval_psi_scaled: c must be positive");
    return sqrt(c) * eval_psi(n, c * x);
}

Complex mehler_kernel(const Complex& z, const Real& x, const Real& y) {
    if (!(z.abs() < 1)) throw DomainError("mehler_kernel: |z| < 1 required");
    Complex z2 = z * z;
    Complex one{Real(1), Real(0)};
    Complex denom = one - z2;
    Real d2 = denom.norm();
    Complex inv_denom{denom.re / d2, -denom.im / d2};
    Complex arg = (Real(4) * x * y * z - (x * x + y * y) * (one + z2)) * inv_denom * (Real(1) / 2);
    Complex pref = complex_sqrt(pi_value() * denom);
    Real p2 = pref.norm();
    Complex inv_pref{pref.re / p2, -pref.im / p2};
    return inv_pref * complex_exp(arg);
}

std::vector<BigInt> hermite_coefficients(int n) {
    std::vector<BigInt> h0{1};
    if (n == 0) return h0;
    std::vector<BigInt> h1{0, 2};
    for (int j = 2; j <= n; ++j) {
        std::vector<BigInt> h2(static_cast<size_t>(j) + 1, 0);
        for (size_t i = 0; i + 1 < h2.size(); ++i) h2[i + 1] += 2 * h1[i];
        for (size_t i = 0; i < h0.size(); ++i) h2[i] -= 2 * (j - 1) * h0[i];
        h0 = std::move(h1);
        h1 = std::move(h2);
    }
    return h1;
}

Real psi_normalization(int n) {
    Real f = 1;
    for (int j = 1; j <= n; ++j) f *= 2 * j;  // 2^n n!
    return 1 / sqrt(f * sqrt(pi_value()));
}

std::vector<Real> hermite_positive_zeros(int n) {
    std::vector<Real> zeros;
    if (n < 1) return zeros;
    QuadRule rule = gauss_hermite(n);
    for (const Real& x : rule.nodes)
        if (x > 0) zeros.push_back(x);
    return zeros;
}

OneNormResult one_norm_with_tail(int n) {
    // Sign-constant pieces of psi_n on [0, X], then a certified tail. The tail
    // start X is pushed out until the alternating-series bound |H_n| <= (2x)^n
    // (valid for 4x^2 > n(n-1)) certifies a contribution below 1e-30.
    const Real target = Real("1e-30");
    Real X = sqrt(Real(2 * n + 1)) + 10;
    if (X < Real(n) / 2 + 2) X = Real(n) / 2 + 2;
    Real norm = psi_normalization(n);
    Real tail;
    for (;;) {
        // tail <= 2^{n/2}/sqrt(n! sqrt(pi)) * X^{n-1} e^{-X^2/2} / (1 - (n-1)/X^2)
        Real core = norm * pow(Real(2), n) * pow(X, n - 1) * exp(-X * X / 2);
        tail = core / (1 - Real(n > 0 ? n - 1 : 0) / (X * X));
        if (tail <= target) break;
        X += 2;
    }

    std::vector<Real> cuts{Real(0)};
    for (const Real& z : hermite_positive_zeros(n))
        if (z > 0 && z < X) cuts.push_back(z);
    cuts.push_back(X);

    static thread_local QuadRule gl;  // shared rule, 96 points
    if (gl.nodes.empty()) gl = gauss_legendre(96);

    Real half = 0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Real a = cuts[i], b = cuts[i + 1];
        Real mid = (a + b) / 2, rad = (b - a) / 2;
        Real acc = 0;
        for (size_t q = 0; q < gl.nodes.size(); ++q)
            acc += gl.weights[q] * abs(eval_psi(n, mid + rad * gl.nodes[q]));
        half += rad * acc;
    }
    return {2 * (half + tail), 2 * tail};
}

Real one_norm(int n) { return one_norm_with_tail(n).value; }

NormTable NormTable::build(int max_order) {
    NormTable t;
    t.max_order = max_order;
    t.tail_bound = 0;
    t.one_norms.reserve(static_cast<size_t>(max_order) + 1);
    for (int j = 0; j <= max_order; ++j) {
        auto [v, tail] = one_norm_with_tail(j);
        t.one_norms.push_back(v);
        if (tail > t.tail_bound) t.tail_bound = tail;
    }
    return t;
}

Real NormTable::max_up_to(int j) const {
    Real m = 0;
    for (int i = 0; i <= j; ++i)
        if (one_norms.at(static_cast<size_t>(i)) > m) m = one_norms[static_cast<size_t>(i)];
    return m;
}

std::string NormTable::key_material() const {
    std::ostringstream os;
    for (const Real& v : one_norms) os << real_to_hex(v) << '|';
    return os.str();
}

Real lemma2_envelope(int n) {
    Real fact = 1;
    for (int j = 1; j <= n; ++j) fact *= j;
    Real nn = (n == 0) ? Real(1) : pow(Real(n), n);
    return pow(Real(2), n) * sqrt(fact * nn / (exp(Real(n)) * sqrt(pi_value())));
}

bool check_lemma1(int n, std::span<const Real> grid) {
    if (n < 1) throw std::invalid_argument("check_lemma1: n >= 1 required");
    // Envelope of psi_n on the oscillatory interval scales as n^{-1/4}
    // (the restricted sup is ~0.80 (n+1)^{-1/4}), so 1.74 n^{-1/4} holds with
    // a wide margin for every n >= 1.
    Real bound = Real("1.74") * pow(Real(n), Real(-1) / 4);
    Real edge = sqrt(Real(n));
    for (const Real& x : grid) {
        if (abs(x) > edge) throw DomainError("check_lemma1: grid point outside oscillatory interval");
        if (!(abs(eval_psi(n, x)) < bound)) return false;
    }
    return true;
}

bool check_lemma2(int n, std::span<const Real> grid) {
    Real env = lemma2_envelope(n);
    for (const Real& x : grid)
        if (!(abs(eval_psi(n, x)) <= env * exp(-x * x / 4))) return false;
    return true;
}

bool check_charlier_cramer(int n, std::span<const Real> grid) {
    Real bound = Real("1.086435") / pow(pi_value(), Real(1) / 4);
    for (const Real& x : grid)
        if (!(abs(eval_psi(n, x)) <= bound)) return false;
    return true;
}

}  // namespace qho
