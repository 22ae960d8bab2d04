#pragma once

#include "qho/gauss_integrals.hpp"
#include "qho/model.hpp"
#include "qho/real.hpp"

#include <string>
#include <vector>

namespace qho {

struct TruncationSpec {
    int D = 3;        // system levels a,b,a',b' <= D
    int L = 2;        // bath output truncation (ell' <= L)
    int N = 6;        // normal-mode truncation (kappa,chi,kappa',chi' <= N)
    int N_prime = -1; // optional refinement order; -1 = absent

    void validate() const;
    bool has_refinement() const { return N_prime >= 0; }
};

// Overall scalar of the amplitude sum:
//   (omega_u omega_v / (omega_x omega_y)) sqrt((1-r)/(pi(1+r))).
Real amplitude_prefactor(const DecoupledFrame& frame, const Real& r);

// Mehler cutoff for the bath resummation at ratio r: smallest M with
//   sqrt(pi(1-r^2)) cap^2 r^{M+1}/(1-r) <= tail_tol,
// floored at min_terms. cap is the rigorous |I| bound of the frame.
int mehler_series_cutoff(const DecoupledFrame& frame, const Real& r, const Real& tail_tol,
                         int min_terms);

// J-integral evaluated from tabulated I values (same Mehler resummation as
// IntegralEngine::integral_J). Throws DomainError when the table's bath index
// bound cannot certify the tail.
Real table_integral_J(const IntegralTable& table, int b, int a, int kappa, int chi, int kappa_p,
                      int chi_p, const Real& r, const Real& tail_tol);

// Path integrand f = I_{a',l',k',x'} I_{b',l',k,x} J_{b,a,k,x,k',x',r}.
Real path_integrand_f(const IntegralTable& table, int a, int b, int a_p, int b_p, int ell_p,
                      int kappa, int kappa_p, int chi, int chi_p, const Real& r,
                      const Real& tail_tol);

// Time-independent inner sums over (ell', kappa, kappa', chi, chi') grouped by
// the phase exponents (dk, dx) = (kappa - kappa', chi - chi'), prefactor
// included. Real-valued: f is a product of real integrals.
class GroupedSums {
  public:
    static GroupedSums build(const TruncationSpec& spec, const IntegralTable& table, const Real& r,
                             const Real& tail_tol);

    const Real& at(int a, int b, int a_p, int b_p, int dk, int dx) const;
    const TruncationSpec& spec() const { return spec_; }
    const DecoupledFrame& frame() const { return frame_; }
    const Real& tail_budget() const { return tail_budget_; }

  private:
    size_t index(int a, int b, int a_p, int b_p, int dk, int dx) const;
    TruncationSpec spec_;
    DecoupledFrame frame_;
    Real r_;
    Real tail_budget_;  // accumulated certified Mehler tails (worst entry)
    std::vector<Real> g_;
};

struct AmplitudeTensor {
    int D = 0;
    Real t;
    std::vector<Complex> values;  // row-major (a, b, a', b')

    const Complex& at(int a, int b, int a_p, int b_p) const;
    Complex& at(int a, int b, int a_p, int b_p);

    // CSV with header a,b,a_p,b_p,re,im; fixed decimals from the precision.
    std::string to_csv(unsigned precision_bits) const;
};

// A[a,b,a',b'](t) = sum_{dk,dx} z_u^{dk} z_v^{dx} G[a,b,a',b',dk,dx] with
// z_u = exp(-i omega_u t), z_v = exp(-i omega_v t).
AmplitudeTensor amplitudes_at(const Real& t, const GroupedSums& sums);

// Fixed-point digits used for CSV rendering at a given precision.
int csv_digits(unsigned precision_bits);

}  // namespace qho
