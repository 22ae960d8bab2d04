#pragma once

#include "qho/amplitudes.hpp"
#include "qho/real.hpp"

#include <array>
#include <string>

namespace qho {

using Mat2 = std::array<std::array<Complex, 2>, 2>;
using Mat4 = std::array<std::array<Complex, 4>, 4>;
using Vec4 = std::array<Complex, 4>;
using Mat42 = std::array<std::array<Complex, 2>, 4>;  // output levels x input levels

// Choi-Jamiolkowski matrix of the truncated channel restricted to the four
// reachable (output, input) pairs {(0,0), (2,0), (1,1), (3,1)}.
struct ChoiMatrix {
    Mat4 chi;
    Real t;
    Real hermiticity_correction;  // Frobenius norm of the discarded (chi - chi^dag)/2
};

// Fills chi from the amplitude tensor and symmetrizes. Throws NonHermitianInput
// when the symmetrization correction exceeds 10 * eps.
ChoiMatrix build_choi(const AmplitudeTensor& amps, const Real& eps);

struct SpectralData {
    std::array<Real, 4> lambda;     // descending; ties keep original index order
    std::array<Vec4, 4> vectors;    // vectors[i] belongs to lambda[i]; unit norm,
                                    // largest-magnitude component real positive
    Mat42 a1;                       // dominant Kraus operator sqrt(lambda_1) * unstack(v_1)
};

// Cyclic-Jacobi eigendecomposition; off-diagonal Frobenius norm driven below
// 2^{8 - precision_bits}.
SpectralData spectral(const ChoiMatrix& choi);

// 1/2 (|A[0,0,2,2]| + |A[1,1,3,3]|) - 2 eps, clamped at zero; valid for the
// maximally mixed qubit input.
Real leakage_lower_bound(const AmplitudeTensor& amps, const Real& eps);

struct FidelityPair {
    Real exact;        // full 16-term contraction 1/4 sum Re(A[a,b,c,d]^2), a..d <= 1
    Real lower_bound;  // 1/4 Re(A0000^2 + A1111^2 + A0101^2 + A1010^2) - 8(2 eps + eps^2)
};

FidelityPair fidelity_no_recovery(const AmplitudeTensor& amps, const Real& eps);

// Barnum-Knill single-Kraus recovery bound. The eigenvalues enter divided by
// the qubit dimension, so the identity channel with eps = 0 scores exactly 1.
Real bk_recovery_fidelity(const SpectralData& spec, const Real& eps);

// Exact entanglement fidelity of the composed map R1 . Phi where R1 is the
// pseudo-inverse recovery built from the dominant Kraus operator. Plumbing for
// diagnostics; the cited quantity is the lower bound above.
Real bk_recovery_fidelity_exact(const SpectralData& spec);

// out[a', b'] = sum_{a,b <= 1} A[a, b, a', b'] rho[a, b]. Validates rho
// (Hermitian, PSD, unit trace at tolerance 1e-30) and requires D >= 3.
Mat4 apply_truncated_channel(const AmplitudeTensor& amps, const Mat2& rho);

struct ChannelSummary {
    Real t;
    std::array<Real, 4> lambda;
    Real leakage_lb;
    Real f_i_exact;
    Real f_i_lb;
    Real f_bk_lb;
};

ChannelSummary summarize_channel(const AmplitudeTensor& amps, const Real& eps);

std::string channel_csv_header();
std::string channel_csv_row(const ChannelSummary& row, unsigned precision_bits);

}  // namespace qho
