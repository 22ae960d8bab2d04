#pragma once

#include "qho/amplitudes.hpp"
#include "qho/gauss_integrals.hpp"
#include "qho/hermite.hpp"
#include "qho/model.hpp"
#include "qho/real.hpp"

#include <cstdint>

namespace qho {

// Frame- and truncation-dependent constants of the approximation-error bound.
struct BoundConstants {
    Real c1, c2;  // minima of the |u| and |v| coordinate coefficients
    Real C;       // min(1/(4 c1^2), 1/(4 c2^2)); undefined when exponential_zero
    Real A, A_tilde, B, B_tilde;
    Real n_D, n_L;  // running maxima of one-norms up to D and L
    int D = 0, L = 0;
    std::uint64_t norm_table_hash = 0;
    // k = 0 limit: c1 or c2 vanishes and C is conceptually infinite; the
    // exponential terms of the bound are then exactly zero.
    bool exponential_zero = false;
};

// Throws DegenerateCoupling when sin(theta) = 0 unless allow_decoupled, in
// which case the exponential_zero representation is returned.
BoundConstants compute_constants(const DecoupledFrame& frame, const NormTable& norms, int D, int L,
                                 bool allow_decoupled = false);

// Squared six-term bracket times (L+1) and the amplitude prefactor. The first
// bracket term uses coefficient 2/9 so its square carries 4/81, consistent
// with the dominant-term statement and the case-study budget; the displayed
// 4/9 would quadruple the leading constant against both.
Real theorem1_bound(const BoundConstants& consts, int N, int L, const Real& r,
                    const DecoupledFrame& frame);

// Large-C dominant term 4 A^2 B / (81 (N-1/2)^6) times prefactor and (L+1).
Real remark1_dominant(const BoundConstants& consts, int N, int L, const Real& r,
                      const DecoupledFrame& frame);

// Closed-form cap 14.7103 (L+1) nD^4 nL^2 (N-1/2)^{-6} (w_u w_v/(w_x w_y))
// sqrt((1-r)/(1+r)).
Real remark1_cap(const BoundConstants& consts, int N, int L, const Real& r,
                 const DecoupledFrame& frame);

// Refined budget for one amplitude (a', b'): the explicit I-weighted sum over
// N < kappa, kappa', chi, chi' <= N' plus the order-N' residual bound.
Real remark3_bound_for(const BoundConstants& consts, int a_p, int b_p, int N, int N_p,
                       const IntegralTable& table, int L, const Real& r,
                       const DecoupledFrame& frame);

// Worst case of remark3_bound_for over all (a', b') <= D.
Real remark3_bound(const BoundConstants& consts, int N, int N_p, const IntegralTable& table,
                   const TruncationSpec& spec, const Real& r, const DecoupledFrame& frame);

struct ErrorBudget {
    Real epsilon;          // theorem bound at N
    Real epsilon_refined;  // refined bound at (N, N'); equals epsilon if no N'
    Real dominant_term;
    int D = 0, L = 0, N = 0, N_prime = -1;
    Real r;
    bool refined = false;
};

ErrorBudget compute_error_budget(const BoundConstants& consts, const TruncationSpec& spec,
                                 const IntegralTable& table, const Real& r,
                                 const DecoupledFrame& frame);

}  // namespace qho
