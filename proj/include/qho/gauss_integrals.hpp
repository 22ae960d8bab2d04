#pragma once

#include "qho/errors.hpp"
#include "qho/hermite.hpp"
#include "qho/model.hpp"
#include "qho/real.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qho {

// Symmetric positive-definite exponent matrix Q of a Gaussian weight
// exp(-x^T Q x / 2), with covariance Sigma = Q^{-1} and normalization
// sqrt((2 pi)^d / det Q).
struct QuadraticForm {
    int dim = 0;
    std::vector<Real> q;      // row-major dim x dim
    std::vector<Real> sigma;  // Q^{-1}
    std::vector<Real> chol;   // lower-triangular L with Q = L L^T
    Real det;
    Real normalization;

    static QuadraticForm from_matrix(int dim, std::vector<Real> entries);
    const Real& Q(int i, int j) const { return q[static_cast<size_t>(i) * dim + j]; }
    const Real& Sigma(int i, int j) const { return sigma[static_cast<size_t>(i) * dim + j]; }
    const Real& L(int i, int j) const { return chol[static_cast<size_t>(i) * dim + j]; }
};

// Integral of x^alpha exp(-x^T Q x / 2) over R^d via the Isserlis/Wick
// pairing recurrence on the covariance; zero for odd |alpha|.
Real gaussian_moment(const QuadraticForm& form, const std::vector<int>& alpha);

// Central moments E[x^i y^j] of a 2-d Gaussian with covariance Sigma,
// tabulated up to a total degree (no normalization factor).
class BivariateMoments {
  public:
    BivariateMoments(const QuadraticForm& form, int max_degree);
    const Real& operator()(int i, int j) const;
    int max_degree() const { return max_degree_; }

  private:
    int max_degree_;
    std::vector<Real> table_;
};

// On-demand exact evaluator of the two-variable Hermite-product integrals
//   I_{a,l,kappa,chi} = \int psi_a(x) psi_l(y) psi_kappa(u(x,y)) psi_chi(v(x,y)) dx dy
// for one frame. Polynomial part expanded over exact integer Hermite
// coefficients; Gaussian part integrated exactly through moments. Internal
// arithmetic carries guard bits scaled with the total degree; results are
// rounded once into the working precision.
class IntegralEngine {
  public:
    explicit IntegralEngine(DecoupledFrame frame);

    const DecoupledFrame& frame() const { return frame_; }

    Real integral_I(int a, int ell, int kappa, int chi);

    // Mehler-resummed J with certified geometric tail. min_terms raises the
    // cutoff floor (callers pass the bath truncation L).
    struct JResult {
        Real value;
        Real tail_bound;
    };
    JResult integral_J(int b, int a, int kappa, int chi, int kappa_p, int chi_p, const Real& r,
                       const Real& tail_tol, int min_terms = 0);

    // Independent oracle: whitened 4-d tensor Gauss-Hermite quadrature of the
    // J integrand; exact for the polynomial part by node-count choice.
    Real integral_J_direct(int b, int a, int kappa, int chi, int kappa_p, int chi_p,
                           const Real& r);
    // 2-d quadrature oracle for I.
    Real integral_I_direct(int a, int ell, int kappa, int chi);

    // Rigorous sup bound on |I|: (omega_x omega_y / (omega_u omega_v))^{1/4}
    // (Cauchy-Schwarz with the Jacobian of the (u,v) map).
    Real i_cap() const;

    int mehler_cutoff(const Real& r, const Real& tail_tol, int min_terms) const;

    // Guard bits for a contraction of the given total degree; covers both the
    // coefficient/moment magnitudes and the cancellation down to O(1) results.
    unsigned guard_bits(int total_degree) const;

  private:
    // Exponent form and moment table at one guard precision; the moment table
    // grows monotonically in degree. Keyed by precision so a call's working
    // precision depends only on its own degree, not on call history.
    struct Context {
        QuadraticForm form;
        std::unique_ptr<BivariateMoments> moments;
        int degree = -1;
    };
    Context& ensure_context(int max_degree, unsigned bits);
    const std::vector<BigInt>& hcoeffs(int n);
    QuadraticForm make_form2() const;  // at the current default precision

    DecoupledFrame frame_;
    unsigned base_bits_;
    std::map<unsigned, Context> contexts_;
    std::map<int, std::vector<BigInt>> hcoeff_;
    std::map<std::array<int, 4>, Real> i_cache_;
};

// Dense cache of I values for the amplitude assembly, serializable to a
// versioned binary cache keyed by (frame, precision, bounds).
struct IndexBounds {
    int max_a = 0;      // first index (system levels, <= D)
    int max_ell = 0;    // bath index
    int max_kappa = 0;  // normal-mode indices
    int max_chi = 0;
};

class IntegralTable {
  public:
    static IntegralTable build(IntegralEngine& engine, const IndexBounds& bounds);

    const Real& at(int a, int ell, int kappa, int chi) const;
    const IndexBounds& bounds() const { return bounds_; }
    const DecoupledFrame& frame() const { return frame_; }
    std::uint64_t cache_key() const;

    bool save(const std::string& path) const;
    static std::optional<IntegralTable> load(const std::string& path, std::uint64_t expected_key);

    // Largest |I| in the table (invariant checks).
    Real max_abs() const;

  private:
    size_t index(int a, int ell, int kappa, int chi) const;
    IndexBounds bounds_;
    DecoupledFrame frame_;
    unsigned precision_bits_ = 0;
    std::vector<Real> values_;
};

std::uint64_t table_cache_key(const DecoupledFrame& frame, unsigned precision_bits,
                              const IndexBounds& bounds);

}  // namespace qho
