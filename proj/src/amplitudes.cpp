#include "qho/amplitudes.hpp"

#include "qho/errors.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qho {

void TruncationSpec::validate() const {
    if (D < 0) throw ValidationError("D must be nonnegative");
    if (L < 0) throw ValidationError("L must be nonnegative");
    if (N < 0) throw ValidationError("N must be nonnegative");
    if (N_prime >= 0 && N_prime <= N) throw ValidationError("N_prime must exceed N");
}

Real amplitude_prefactor(const DecoupledFrame& frame, const Real& r) {
    return frame.omega_u * frame.omega_v / (frame.omega_x * frame.omega_y) *
           sqrt((1 - r) / (pi_value() * (1 + r)));
}

namespace {

Real frame_i_cap(const DecoupledFrame& frame) {
    return pow(frame.omega_x * frame.omega_y / (frame.omega_u * frame.omega_v), Real(1) / 4);
}

}  // namespace

int mehler_series_cutoff(const DecoupledFrame& frame, const Real& r, const Real& tail_tol,
                         int min_terms) {
    if (!(r > 0)) return min_terms > 0 ? min_terms : 0;
    const Real cap = frame_i_cap(frame);
    const Real pref = sqrt(pi_value() * (1 - r * r));
    Real q = log(tail_tol * (1 - r) / (pref * cap * cap)) / log(r);
    long m = 0;
    if (q > 0) m = ceil(q).convert_to<long>();
    if (m < min_terms) m = min_terms;
    if (m < 0) m = 0;
    while (pref * cap * cap * pow(r, m + 1) / (1 - r) > tail_tol) ++m;
    return static_cast<int>(m);
}

Real table_integral_J(const IntegralTable& table, int b, int a, int kappa, int chi, int kappa_p,
                      int chi_p, const Real& r, const Real& tail_tol) {
    if (r < 0 || !(r < 1)) throw DomainError("table_integral_J: r in [0, 1) required");
    const int par1 = (b + kappa + chi) % 2, par2 = (a + kappa_p + chi_p) % 2;
    if (par1 != par2) return Real(0);
    if (r == 0) {
        if (par1 == 1) return Real(0);
        return sqrt(pi_value()) * table.at(b, 0, kappa, chi) * table.at(a, 0, kappa_p, chi_p);
    }
    const int cutoff = mehler_series_cutoff(table.frame(), r, tail_tol, 0);
    if (cutoff > table.bounds().max_ell)
        throw DomainError("table_integral_J: table bath index bound below the Mehler cutoff");
    const Real pref = sqrt(pi_value() * (1 - r * r));
    Real sum = 0;
    Real rl = par1 == 0 ? Real(1) : r;
    const Real r2 = r * r;
    for (int l = par1; l <= cutoff; l += 2) {
        sum += rl * table.at(b, l, kappa, chi) * table.at(a, l, kappa_p, chi_p);
        rl *= r2;
    }
    return pref * sum;
}

Real path_integrand_f(const IntegralTable& table, int a, int b, int a_p, int b_p, int ell_p,
                      int kappa, int kappa_p, int chi, int chi_p, const Real& r,
                      const Real& tail_tol) {
    if ((a_p + ell_p + kappa_p + chi_p) % 2 == 1 || (b_p + ell_p + kappa + chi) % 2 == 1)
        return Real(0);
    return table.at(a_p, ell_p, kappa_p, chi_p) * table.at(b_p, ell_p, kappa, chi) *
           table_integral_J(table, b, a, kappa, chi, kappa_p, chi_p, r, tail_tol);
}

size_t GroupedSums::index(int a, int b, int a_p, int b_p, int dk, int dx) const {
    const int d1 = spec_.D + 1, w = 2 * spec_.N + 1;
    size_t idx = static_cast<size_t>(a);
    idx = idx * d1 + static_cast<size_t>(b);
    idx = idx * d1 + static_cast<size_t>(a_p);
    idx = idx * d1 + static_cast<size_t>(b_p);
    idx = idx * w + static_cast<size_t>(dk + spec_.N);
    idx = idx * w + static_cast<size_t>(dx + spec_.N);
    return idx;
}

const Real& GroupedSums::at(int a, int b, int a_p, int b_p, int dk, int dx) const {
    if (a < 0 || a > spec_.D || b < 0 || b > spec_.D || a_p < 0 || a_p > spec_.D || b_p < 0 ||
        b_p > spec_.D || dk < -spec_.N || dk > spec_.N || dx < -spec_.N || dx > spec_.N)
        throw std::out_of_range("GroupedSums: index out of range");
    return g_[index(a, b, a_p, b_p, dk, dx)];
}

GroupedSums GroupedSums::build(const TruncationSpec& spec, const IntegralTable& table,
                               const Real& r, const Real& tail_tol) {
    spec.validate();
    if (r < 0 || !(r < 1)) throw DomainError("GroupedSums: r in [0, 1) required");
    const DecoupledFrame& frame = table.frame();
    const int cutoff = r == 0 ? 0 : mehler_series_cutoff(frame, r, tail_tol, 0);
    const IndexBounds& bnd = table.bounds();
    if (bnd.max_a < spec.D || bnd.max_ell < std::max(spec.L, cutoff) || bnd.max_kappa < spec.N ||
        bnd.max_chi < spec.N)
        throw DomainError("GroupedSums: integral table does not cover the truncation spec");

    GroupedSums out;
    out.spec_ = spec;
    out.frame_ = frame;
    out.r_ = r;
    const int d1 = spec.D + 1, w = 2 * spec.N + 1, n1 = spec.N + 1;
    out.g_.assign(static_cast<size_t>(d1) * d1 * d1 * d1 * w * w, Real(0));

    const Real pref = amplitude_prefactor(frame, r);
    const Real mehler_pref = sqrt(pi_value() * (1 - r * r));
    const Real cap = frame_i_cap(frame);
    // Every dropped bath term is one J tail; conservatively budget all terms.
    out.tail_budget_ = r == 0 ? Real(0)
                              : tail_tol * (spec.L + 1) * pow(Real(n1), 4) * cap * cap * pref;

    std::vector<Real> p(static_cast<size_t>(n1) * n1), q(static_cast<size_t>(n1) * n1);
    for (int a = 0; a <= spec.D; ++a)
        for (int b = 0; b <= spec.D; ++b)
            for (int a_p = 0; a_p <= spec.D; ++a_p)
                for (int b_p = 0; b_p <= spec.D; ++b_p) {
                    if ((a + b + a_p + b_p) % 2 == 1) continue;  // parity (Remark 2)
                    for (int ell_p = 0; ell_p <= spec.L; ++ell_p) {
                        Real rl = 1;
                        for (int ell = 0; ell <= cutoff; ++ell, rl *= r) {
                            // P over (kappa, chi), Q over (kappa', chi');
                            // zero unless both factor parities match.
                            bool any_p = false, any_q = false;
                            for (int k = 0; k < n1; ++k)
                                for (int x = 0; x < n1; ++x) {
                                    Real& pe = p[static_cast<size_t>(k) * n1 + x];
                                    Real& qe = q[static_cast<size_t>(k) * n1 + x];
                                    pe = 0;
                                    qe = 0;
                                    if ((b_p + ell_p + k + x) % 2 == 0 &&
                                        (b + ell + k + x) % 2 == 0) {
                                        pe = table.at(b_p, ell_p, k, x) * table.at(b, ell, k, x);
                                        if (pe != 0) any_p = true;
                                    }
                                    if ((a_p + ell_p + k + x) % 2 == 0 &&
                                        (a + ell + k + x) % 2 == 0) {
                                        qe = table.at(a_p, ell_p, k, x) * table.at(a, ell, k, x);
                                        if (qe != 0) any_q = true;
                                    }
                                }
                            if (!any_p || !any_q) continue;
                            const Real weight = pref * mehler_pref * rl;
                            for (int k = 0; k < n1; ++k)
                                for (int x = 0; x < n1; ++x) {
                                    const Real& pe = p[static_cast<size_t>(k) * n1 + x];
                                    if (pe == 0) continue;
                                    const Real wpe = weight * pe;
                                    for (int kp = 0; kp < n1; ++kp)
                                        for (int xp = 0; xp < n1; ++xp) {
                                            const Real& qe = q[static_cast<size_t>(kp) * n1 + xp];
                                            if (qe == 0) continue;
                                            out.g_[out.index(a, b, a_p, b_p, k - kp, x - xp)] +=
                                                wpe * qe;
                                        }
                                }
                        }
                    }
                }
    return out;
}

const Complex& AmplitudeTensor::at(int a, int b, int a_p, int b_p) const {
    const int d1 = D + 1;
    return values[((static_cast<size_t>(a) * d1 + b) * d1 + a_p) * d1 + b_p];
}

Complex& AmplitudeTensor::at(int a, int b, int a_p, int b_p) {
    const int d1 = D + 1;
    return values[((static_cast<size_t>(a) * d1 + b) * d1 + a_p) * d1 + b_p];
}

AmplitudeTensor amplitudes_at(const Real& t, const GroupedSums& sums) {
    if (t < 0) throw ValidationError("amplitudes_at: t must be nonnegative");
    const TruncationSpec& spec = sums.spec();
    const DecoupledFrame& frame = sums.frame();
    AmplitudeTensor out;
    out.D = spec.D;
    out.t = t;
    const int d1 = spec.D + 1;
    out.values.assign(static_cast<size_t>(d1) * d1 * d1 * d1, Complex{});

    // Phase table exp(-i(omega_u dk + omega_v dx)t), one trig pair per cell.
    const int w = 2 * spec.N + 1;
    std::vector<Complex> phase(static_cast<size_t>(w) * w);
    for (int dk = -spec.N; dk <= spec.N; ++dk)
        for (int dx = -spec.N; dx <= spec.N; ++dx)
            phase[static_cast<size_t>(dk + spec.N) * w + (dx + spec.N)] =
                unit_phase((frame.omega_u * dk + frame.omega_v * dx) * t);

    for (int a = 0; a <= spec.D; ++a)
        for (int b = 0; b <= spec.D; ++b)
            for (int a_p = 0; a_p <= spec.D; ++a_p)
                for (int b_p = 0; b_p <= spec.D; ++b_p) {
                    if ((a + b + a_p + b_p) % 2 == 1) continue;
                    Complex acc{};
                    for (int dk = -spec.N; dk <= spec.N; ++dk)
                        for (int dx = -spec.N; dx <= spec.N; ++dx) {
                            const Real& gv = sums.at(a, b, a_p, b_p, dk, dx);
                            if (gv == 0) continue;
                            acc += phase[static_cast<size_t>(dk + spec.N) * w + (dx + spec.N)] * gv;
                        }
                    out.at(a, b, a_p, b_p) = acc;
                }
    return out;
}

int csv_digits(unsigned precision_bits) {
    int d = static_cast<int>((static_cast<unsigned long long>(precision_bits) * 30103ull) / 100000ull) - 5;
    return d < 6 ? 6 : d;
}

std::string AmplitudeTensor::to_csv(unsigned precision_bits) const {
    const int digits = csv_digits(precision_bits);
    std::ostringstream os;
    os << "a,b,a_p,b_p,re,im\r\n";
    for (int a = 0; a <= D; ++a)
        for (int b = 0; b <= D; ++b)
            for (int a_p = 0; a_p <= D; ++a_p)
                for (int b_p = 0; b_p <= D; ++b_p) {
                    const Complex& v = at(a, b, a_p, b_p);
                    os << a << ',' << b << ',' << a_p << ',' << b_p << ','
                       << real_to_fixed(v.re, digits) << ',' << real_to_fixed(v.im, digits)
                       << "\r\n";
                }
    return os.str();
}

}  // namespace qho
