#include "qho/channel.hpp"

#include "qho/errors.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qho {

namespace {

// Basis order (output, input): (0,0), (2,0), (1,1), (3,1).
constexpr int kOut[4] = {0, 2, 1, 3};
constexpr int kIn[4] = {0, 0, 1, 1};

Real off_diagonal_norm(const Mat4& m) {
    Real s = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) s += m[i][j].norm();
    return sqrt(s);
}

// One complex Jacobi rotation annihilating m[p][q]; the unitary is accumulated
// into the columns of v.
void jacobi_rotate(Mat4& m, Mat4& v, int p, int q) {
    const Real beta = m[p][q].abs();
    if (beta == 0) return;
    const Complex phase{m[p][q].re / beta, m[p][q].im / beta};  // e^{i phi}
    const Real a = m[p][p].re, d = m[q][q].re;
    Real t;  // tan(theta) of the 2x2 real rotation, smaller root
    if (a == d) {
        t = 1;
    } else {
        const Real tau = (a - d) / (2 * beta);
        t = 1 / (abs(tau) + sqrt(tau * tau + 1));
        if (tau < 0) t = -t;
    }
    const Real c = 1 / sqrt(t * t + 1);
    const Real s = t * c;
    // U differs from the identity in columns p, q:
    //   U[p][p] = c, U[p][q] = -s, U[q][p] = s e^{-i phi}, U[q][q] = c e^{-i phi}.
    const Complex upp{c, Real(0)}, upq{-s, Real(0)};
    const Complex uqp = phase.conj() * s, uqq = phase.conj() * c;
    for (int i = 0; i < 4; ++i) {  // m <- m U
        const Complex mp = m[i][p], mq = m[i][q];
        m[i][p] = mp * upp + mq * uqp;
        m[i][q] = mp * upq + mq * uqq;
    }
    for (int j = 0; j < 4; ++j) {  // m <- U^dag m
        const Complex mp = m[p][j], mq = m[q][j];
        m[p][j] = upp.conj() * mp + uqp.conj() * mq;
        m[q][j] = upq.conj() * mp + uqq.conj() * mq;
    }
    m[p][q] = Complex{};
    m[q][p] = Complex{};
    m[p][p].im = 0;
    m[q][q].im = 0;
    for (int i = 0; i < 4; ++i) {  // v <- v U
        const Complex vp = v[i][p], vq = v[i][q];
        v[i][p] = vp * upp + vq * uqp;
        v[i][q] = vp * upq + vq * uqq;
    }
}

void check_coverage(const AmplitudeTensor& amps) {
    if (amps.D < 3) throw std::invalid_argument("amplitude tensor must cover levels up to 3");
}

Real clamp_nonneg(Real x) { return x < 0 ? Real(0) : x; }

}  // namespace

ChoiMatrix build_choi(const AmplitudeTensor& amps, const Real& eps) {
    check_coverage(amps);
    Mat4 raw;
    for (int i = 0; i < 4; ++i)
        for (int l = 0; l < 4; ++l) raw[i][l] = amps.at(kIn[i], kIn[l], kOut[i], kOut[l]);
    ChoiMatrix out;
    out.t = amps.t;
    Real corr2 = 0;
    for (int i = 0; i < 4; ++i)
        for (int l = 0; l < 4; ++l) {
            const Complex h = (raw[i][l] + raw[l][i].conj()) * (Real(1) / 2);
            corr2 += (raw[i][l] - h).norm();
            out.chi[i][l] = h;
        }
    Real scale2 = 0;
    for (int i = 0; i < 4; ++i)
        for (int l = 0; l < 4; ++l) scale2 += raw[i][l].norm();
    out.hermiticity_correction = sqrt(corr2);
    // Rounding floor: a zero analytic budget must still admit precision-level
    // asymmetry in the computed entries.
    const Real floor = sqrt(scale2) * pow2(16 - static_cast<int>(current_precision_bits()));
    if (out.hermiticity_correction > 10 * eps + floor)
        throw NonHermitianInput("build_choi: hermiticity defect exceeds 10x the error budget");
    return out;
}

SpectralData spectral(const ChoiMatrix& choi) {
    Mat4 m = choi.chi;
    Mat4 v{};
    for (int i = 0; i < 4; ++i) v[i][i] = Complex{Real(1), Real(0)};

    const Real tol = pow2(8 - static_cast<int>(current_precision_bits()));
    for (int sweep = 0; sweep < 128 && off_diagonal_norm(m) > tol; ++sweep)
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) jacobi_rotate(m, v, p, q);

    std::array<int, 4> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return m[i][i].re > m[j][j].re; });

    SpectralData out;
    for (int k = 0; k < 4; ++k) {
        const int c = order[k];
        out.lambda[k] = m[c][c].re;
        Vec4 vec;
        for (int i = 0; i < 4; ++i) vec[i] = v[i][c];
        int imax = 0;
        for (int i = 1; i < 4; ++i)
            if (vec[i].abs() > vec[imax].abs()) imax = i;
        const Real mag = vec[imax].abs();
        if (mag > 0) {
            const Complex rot = vec[imax].conj() * (1 / mag);
            for (int i = 0; i < 4; ++i) vec[i] = vec[i] * rot;
            vec[imax].im = 0;
        }
        out.vectors[k] = vec;
    }
    const Real root = sqrt(clamp_nonneg(out.lambda[0]));
    out.a1 = Mat42{};
    for (int i = 0; i < 4; ++i) out.a1[kOut[i]][kIn[i]] = root * out.vectors[0][i];
    return out;
}

Real leakage_lower_bound(const AmplitudeTensor& amps, const Real& eps) {
    check_coverage(amps);
    const Real raw = (amps.at(0, 0, 2, 2).abs() + amps.at(1, 1, 3, 3).abs()) / 2 - 2 * eps;
    return clamp_nonneg(raw);
}

FidelityPair fidelity_no_recovery(const AmplitudeTensor& amps, const Real& eps) {
    check_coverage(amps);
    Complex full{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) {
                    const Complex& z = amps.at(a, b, c, d);
                    full += z * z;
                }
    Complex diag{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const Complex& z = amps.at(a, b, a, b);
            diag += z * z;
        }
    FidelityPair out;
    out.exact = full.re / 4;
    out.lower_bound = diag.re / 4 - 8 * (2 * eps + eps * eps);
    return out;
}

Real bk_recovery_fidelity(const SpectralData& spec, const Real& eps) {
    // Eigenvalues of the unnormalized CJ stacking sum to the qubit dimension
    // for a trace-preserving channel; dividing by 2 puts the bound in [0, 1].
    const Real l1 = spec.lambda[0] / 2;
    const Real rest = (abs(spec.lambda[1]) + abs(spec.lambda[2]) + abs(spec.lambda[3])) / 2;
    return l1 * l1 - rest / 4 - (2 * eps + eps * eps) / 4;
}

Real bk_recovery_fidelity_exact(const SpectralData& spec) {
    // M = A1 A1^dag is block diagonal over the even/odd level pairs (0,2) and
    // (1,3); its pseudo-inverse square root follows per rank-1 block.
    const Real thresh = clamp_nonneg(spec.lambda[0]) * pow2(-static_cast<int>(current_precision_bits()) / 2);
    // R1 = A1^dag (A1 A1^dag)^{-1/2+}, a 2x4 matrix.
    std::array<std::array<Complex, 4>, 2> r1{};
    for (int col = 0; col < 2; ++col) {
        Real n2 = 0;
        for (int row = 0; row < 4; ++row) n2 += spec.a1[row][col].norm();
        const Real n = sqrt(n2);
        if (n <= thresh) continue;
        for (int row = 0; row < 4; ++row) r1[col][row] = spec.a1[row][col].conj() * (1 / n);
    }
    Real f = 0;
    for (int k = 0; k < 4; ++k) {
        const Real lam = clamp_nonneg(spec.lambda[k]);
        if (lam == 0) continue;
        const Real root = sqrt(lam);
        Complex tr{};
        for (int i = 0; i < 4; ++i)  // trace of R1 * unstack(v_k) over the qubit space
            tr += r1[kIn[i]][kOut[i]] * (root * spec.vectors[k][i]);
        f += tr.norm() / 4;
    }
    return f;
}

Mat4 apply_truncated_channel(const AmplitudeTensor& amps, const Mat2& rho) {
    check_coverage(amps);
    const Real tol = parse_real("1e-30");
    if ((rho[0][1] - rho[1][0].conj()).abs() > tol || abs(rho[0][0].im) > tol ||
        abs(rho[1][1].im) > tol)
        throw InvalidState("apply_truncated_channel: rho is not Hermitian");
    if (abs(rho[0][0].re + rho[1][1].re - 1) > tol)
        throw InvalidState("apply_truncated_channel: rho trace differs from 1");
    const Real det = rho[0][0].re * rho[1][1].re - rho[0][1].norm();
    if (rho[0][0].re < -tol || rho[1][1].re < -tol || det < -tol)
        throw InvalidState("apply_truncated_channel: rho is not positive semidefinite");

    Mat4 out{};
    for (int ap = 0; ap < 4; ++ap)
        for (int bp = 0; bp < 4; ++bp) {
            Complex acc{};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) acc += amps.at(a, b, ap, bp) * rho[a][b];
            out[ap][bp] = acc;
        }
    return out;
}

ChannelSummary summarize_channel(const AmplitudeTensor& amps, const Real& eps) {
    ChannelSummary row;
    row.t = amps.t;
    const SpectralData spec = spectral(build_choi(amps, eps));
    row.lambda = spec.lambda;
    row.leakage_lb = leakage_lower_bound(amps, eps);
    const FidelityPair f = fidelity_no_recovery(amps, eps);
    row.f_i_exact = f.exact;
    row.f_i_lb = f.lower_bound;
    row.f_bk_lb = bk_recovery_fidelity(spec, eps);
    return row;
}

std::string channel_csv_header() {
    return "t,lambda_1,lambda_2,lambda_3,lambda_4,leakage_lb,f_I_exact,f_I_lb,f_BK_lb\r\n";
}

std::string channel_csv_row(const ChannelSummary& row, unsigned precision_bits) {
    const int digits = csv_digits(precision_bits);
    std::ostringstream os;
    os << real_to_fixed(row.t, digits);
    for (int i = 0; i < 4; ++i) os << ',' << real_to_fixed(row.lambda[i], digits);
    os << ',' << real_to_fixed(row.leakage_lb, digits) << ','
       << real_to_fixed(row.f_i_exact, digits) << ',' << real_to_fixed(row.f_i_lb, digits) << ','
       << real_to_fixed(row.f_bk_lb, digits) << "\r\n";
    return os.str();
}

}  // namespace qho
