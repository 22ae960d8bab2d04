#include "qho/bounds.hpp"

#include "qho/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace qho {

namespace {

Real factorial(int n) {
    Real f = 1;
    for (int j = 2; j <= n; ++j) f *= j;
    return f;
}

Real n_pow_n(int n) { return n == 0 ? Real(1) : pow(Real(n), n); }

}  // namespace

BoundConstants compute_constants(const DecoupledFrame& frame, const NormTable& norms, int D, int L,
                                 bool allow_decoupled) {
    if (D < 0 || L < 0) throw std::invalid_argument("compute_constants: D, L >= 0 required");
    if (norms.max_order < D || norms.max_order < L)
        throw std::invalid_argument("compute_constants: norm table too short");
    BoundConstants c;
    c.D = D;
    c.L = L;
    c.c1 = std::min(abs(frame.u1), abs(frame.u2));
    c.c2 = std::min(abs(frame.v1), abs(frame.v2));
    if (c.c1 == 0 || c.c2 == 0) {
        if (!allow_decoupled)
            throw DegenerateCoupling("compute_constants: sin(theta) = 0 (uncoupled frame)");
        c.exponential_zero = true;
        c.C = 0;
    } else {
        c.C = std::min(1 / (4 * c.c1 * c.c1), 1 / (4 * c.c2 * c.c2));
    }
    c.n_D = norms.max_up_to(D);
    c.n_L = norms.max_up_to(L);
    const Real k174 = parse_real("1.74");
    c.A = k174 * k174 * c.n_D * c.n_L;
    c.B = parse_real("57.6") * c.n_D * c.n_D;
    const Real two_e_half = 2 * exp(Real(-1) / 2);
    const Real two_e_one = 2 * exp(Real(-1));
    c.A_tilde = parse_real("4.74") * pow(two_e_half, D + L) *
                sqrt(factorial(D) * n_pow_n(D) * factorial(L) * n_pow_n(L));
    c.B_tilde = parse_real("39.6") * pow(two_e_one, D) * factorial(D) * n_pow_n(D);
    c.norm_table_hash = fnv1a(norms.key_material());
    return c;
}

Real theorem1_bound(const BoundConstants& consts, int N, int L, const Real& r,
                    const DecoupledFrame& frame) {
    if (N < 1) throw std::invalid_argument("theorem1_bound: N >= 1 required");
    const Real nh = Real(N) - Real(1) / 2;
    const Real n54 = pow(Real(N), Real(5) / 4);
    const Real n52 = pow(Real(N), Real(5) / 2);
    const Real& A = consts.A;
    const Real& At = consts.A_tilde;
    const Real& B = consts.B;
    const Real& Bt = consts.B_tilde;

    Real bracket = 2 * sqrt(A * A * B) / (9 * nh * nh * nh);
    if (!consts.exponential_zero) {
        const Real eh = exp(-consts.C / 2);   // e^{-C/2}
        const Real e1 = eh * eh;              // e^{-C}
        const Real enh = exp(-N * consts.C / 2);
        const Real en1 = enh * enh;           // e^{-NC}
        bracket += 4 * sqrt(A * At * B) / (3 * n54 * nh * sqrt(nh)) * enh / (1 - eh);
        bracket += sqrt(At * At * B) / n52 * en1 / ((1 - eh) * (1 - eh));
        bracket += sqrt(A * A * Bt) / n52 * en1 / ((1 - eh) * (1 - eh));
        bracket += 2 * sqrt(A * At * Bt) / n54 * en1 * enh / ((1 - eh) * (1 - e1));
        bracket += sqrt(At * At * Bt) * en1 * en1 / ((1 - e1) * (1 - e1));
    }
    return bracket * bracket * amplitude_prefactor(frame, r) * (L + 1);
}

Real remark1_dominant(const BoundConstants& consts, int N, int L, const Real& r,
                      const DecoupledFrame& frame) {
    const Real nh = Real(N) - Real(1) / 2;
    return 4 * consts.A * consts.A * consts.B / (81 * pow(nh, 6)) *
           amplitude_prefactor(frame, r) * (L + 1);
}

Real remark1_cap(const BoundConstants& consts, int N, int L, const Real& r,
                 const DecoupledFrame& frame) {
    const Real nh = Real(N) - Real(1) / 2;
    return parse_real("14.7103") * (L + 1) * pow(consts.n_D, 4) * consts.n_L * consts.n_L /
           pow(nh, 6) * frame.omega_u * frame.omega_v / (frame.omega_x * frame.omega_y) *
           sqrt((1 - r) / (1 + r));
}

Real remark3_bound_for(const BoundConstants& consts, int a_p, int b_p, int N, int N_p,
                       const IntegralTable& table, int L, const Real& r,
                       const DecoupledFrame& frame) {
    if (N_p <= N) throw std::invalid_argument("remark3_bound_for: N' > N required");
    const IndexBounds& bnd = table.bounds();
    if (bnd.max_kappa < N_p || bnd.max_chi < N_p || bnd.max_a < std::max(a_p, b_p) ||
        bnd.max_ell < L)
        throw std::invalid_argument("remark3_bound_for: table does not cover N'");
    // The quadruple sum over N < kappa, kappa', chi, chi' <= N' factorizes into
    // per-oscillator sums s(j, l') = sum |I_{j,l',k,x}| (k x)^{-5/2}.
    Real total = 0;
    for (int ell_p = 0; ell_p <= L; ++ell_p) {
        Real sa = 0, sb = 0;
        for (int k = N + 1; k <= N_p; ++k)
            for (int x = N + 1; x <= N_p; ++x) {
                const Real w = pow(Real(k) * Real(x), Real(-5) / 2);
                sa += abs(table.at(a_p, ell_p, k, x)) * w;
                sb += abs(table.at(b_p, ell_p, k, x)) * w;
            }
        total += sa * sb;
    }
    return total * consts.B + theorem1_bound(consts, N_p, L, r, frame);
}

Real remark3_bound(const BoundConstants& consts, int N, int N_p, const IntegralTable& table,
                   const TruncationSpec& spec, const Real& r, const DecoupledFrame& frame) {
    Real worst = 0;
    for (int a_p = 0; a_p <= spec.D; ++a_p)
        for (int b_p = 0; b_p <= spec.D; ++b_p) {
            Real v = remark3_bound_for(consts, a_p, b_p, N, N_p, table, spec.L, r, frame);
            if (v > worst) worst = v;
        }
    return worst;
}

ErrorBudget compute_error_budget(const BoundConstants& consts, const TruncationSpec& spec,
                                 const IntegralTable& table, const Real& r,
                                 const DecoupledFrame& frame) {
    ErrorBudget e;
    e.D = spec.D;
    e.L = spec.L;
    e.N = spec.N;
    e.N_prime = spec.N_prime;
    e.r = r;
    e.epsilon = theorem1_bound(consts, spec.N, spec.L, r, frame);
    e.dominant_term = remark1_dominant(consts, spec.N, spec.L, r, frame);
    if (spec.has_refinement()) {
        e.epsilon_refined = remark3_bound(consts, spec.N, spec.N_prime, table, spec, r, frame);
        e.refined = true;
    } else {
        e.epsilon_refined = e.epsilon;
    }
    return e;
}

}  // namespace qho
