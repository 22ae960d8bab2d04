#include "qho/channel.hpp"

#include "test_util.hpp"

using namespace qho;
using testutil::case_params;
using testutil::check_close;
using testutil::identity_params;

namespace {

GroupedSums build_sums(const OscillatorParams& params) {
    TruncationSpec spec;  // D=3, L=2, N=6
    const DecoupledFrame frame = derive_frame(params);
    IntegralEngine engine(frame);
    const Real tail_tol = parse_real("1e-40");
    const int ell_max = std::max(spec.L, mehler_series_cutoff(frame, Real(0), tail_tol, spec.L));
    const IntegralTable table =
        IntegralTable::build(engine, IndexBounds{spec.D, ell_max, spec.N, spec.N});
    return GroupedSums::build(spec, table, Real(0), tail_tol);
}

const GroupedSums& identity_sums() {
    static const GroupedSums s = build_sums(identity_params());
    return s;
}

const GroupedSums& case_sums() {
    static const GroupedSums s = build_sums(case_params());
    return s;
}

// Refined budget of the default case-study pipeline, frozen.
Real case_epsilon() { return parse_real("0.0008368914690412633731798"); }

}  // namespace

TEST_SUITE_BEGIN("channel");

TEST_CASE("identity channel: spectrum, fidelities, leakage") {
    const Real t = parse_real("7e-7");
    const AmplitudeTensor amps = amplitudes_at(t, identity_sums());
    const Real eps = 0;
    const ChoiMatrix choi = build_choi(amps, eps);
    CHECK(choi.hermiticity_correction <= pow2(-200));
    const SpectralData spec = spectral(choi);
    const Real tol = pow2(-100);
    check_close(spec.lambda[0], Real(2), tol);
    for (int i = 1; i < 4; ++i) check_close(spec.lambda[i], Real(0), tol);

    check_close(bk_recovery_fidelity(spec, eps), Real(1), tol);
    check_close(bk_recovery_fidelity_exact(spec), Real(1), tol);
    CHECK(leakage_lower_bound(amps, eps) == 0);

    // f_I exact = |1 + z_u^2|^2 / 4 with z_u = e^{-i omega t}.
    const Complex zu = unit_phase(identity_sums().frame().omega_x * t);
    const Complex one{Real(1), Real(0)};
    const Real expected = (one + zu * zu).norm() / 4;
    const FidelityPair f = fidelity_no_recovery(amps, eps);
    check_close(f.exact, expected, tol);
    check_close(f.lower_bound, expected, tol);
}

TEST_CASE("identity channel fixes the ground state") {
    const AmplitudeTensor amps = amplitudes_at(parse_real("3e-7"), identity_sums());
    Mat2 rho{};
    rho[0][0] = Complex{Real(1), Real(0)};
    const Mat4 out = apply_truncated_channel(amps, rho);
    check_close((out[0][0] - Complex{Real(1), Real(0)}).abs(), Real(0), pow2(-100));
    Real rest = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i || j) rest += out[i][j].norm();
    check_close(rest, Real(0), pow2(-200));
}

TEST_CASE("state validation gates the channel application") {
    const AmplitudeTensor amps = amplitudes_at(Real(0), identity_sums());
    Mat2 rho{};
    rho[0][0] = Complex{Real(1), Real(0)};
    rho[1][1] = Complex{Real(1), Real(0)};  // trace 2
    CHECK_THROWS_AS(apply_truncated_channel(amps, rho), InvalidState);
    rho[1][1] = Complex{Real(0), Real(0)};
    rho[0][1] = Complex{Real(1), Real(0)};  // not Hermitian vs rho[1][0] = 0
    CHECK_THROWS_AS(apply_truncated_channel(amps, rho), InvalidState);
    rho[0][1] = Complex{};
    rho[0][0] = Complex{Real(2), Real(0)};
    rho[1][1] = Complex{Real(-1), Real(0)};  // trace 1, not PSD
    CHECK_THROWS_AS(apply_truncated_channel(amps, rho), InvalidState);
}

TEST_CASE("hermiticity gate rejects asymmetric tensors") {
    AmplitudeTensor amps = amplitudes_at(Real(0), identity_sums());
    amps.at(0, 0, 0, 2) = Complex{Real(1), Real(0)};  // break A[b,a,b',a'] symmetry
    CHECK_THROWS_AS(build_choi(amps, Real(0)), NonHermitianInput);
    // A large budget absorbs the defect instead.
    CHECK_NOTHROW(build_choi(amps, Real(1)));
}

TEST_CASE("case-study channel at t = 5e-6") {
    const Real eps = case_epsilon();
    const AmplitudeTensor amps = amplitudes_at(parse_real("5e-6"), case_sums());
    const ChannelSummary row = summarize_channel(amps, eps);
    check_close(row.leakage_lb, "0.20366328263813008857", parse_real("1e-15"));
    check_close(row.f_bk_lb, "0.77112588576136088361", parse_real("1e-15"));
    check_close(row.f_i_exact, "0.04320457173777169761", parse_real("1e-15"));
    check_close(row.lambda[0], "1.75675212433936080763", parse_real("1e-15"));
    CHECK(row.f_bk_lb > parse_real("0.6"));
    // Eigenvector phase convention: largest component real positive.
    const SpectralData spec = spectral(build_choi(amps, eps));
    int imax = 0;
    for (int i = 1; i < 4; ++i)
        if (spec.vectors[0][i].abs() > spec.vectors[0][imax].abs()) imax = i;
    CHECK(spec.vectors[0][imax].im == 0);
    CHECK(spec.vectors[0][imax].re > 0);
}

TEST_CASE("trace never increases beyond the certified budget") {
    const Real eps = case_epsilon();
    Mat2 mixed{};
    mixed[0][0] = Complex{Real(1) / 2, Real(0)};
    mixed[1][1] = Complex{Real(1) / 2, Real(0)};
    for (const char* t_text : {"0", "1e-6", "2.5e-6", "5e-6"}) {
        const AmplitudeTensor amps = amplitudes_at(parse_real(t_text), case_sums());
        const Mat4 out = apply_truncated_channel(amps, mixed);
        Real trace = 0;
        for (int i = 0; i < 4; ++i) trace += out[i][i].re;
        CHECK(trace <= 1 + 4 * eps);
    }
}

TEST_CASE("eigendecomposition reconstructs the Choi matrix") {
    const AmplitudeTensor amps = amplitudes_at(parse_real("2e-6"), case_sums());
    const ChoiMatrix choi = build_choi(amps, case_epsilon());
    const SpectralData spec = spectral(choi);
    Real dev2 = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Complex acc{};
            for (int k = 0; k < 4; ++k)
                acc += spec.vectors[k][i] * spec.vectors[k][j].conj() * spec.lambda[k];
            dev2 += (acc - choi.chi[i][j]).norm();
        }
    check_close(sqrt(dev2), Real(0), pow2(-200));
    // Unnormalized CJ eigenvalues sum to the partial trace of chi.
    Real trace = 0, lsum = 0;
    for (int i = 0; i < 4; ++i) {
        trace += choi.chi[i][i].re;
        lsum += spec.lambda[i];
    }
    check_close(lsum, trace, pow2(-200));
}

TEST_CASE("CSV row shape") {
    const AmplitudeTensor amps = amplitudes_at(Real(0), identity_sums());
    const ChannelSummary row = summarize_channel(amps, Real(0));
    CHECK(channel_csv_header() ==
          "t,lambda_1,lambda_2,lambda_3,lambda_4,leakage_lb,f_I_exact,f_I_lb,f_BK_lb\r\n");
    const std::string line = channel_csv_row(row, 64);
    CHECK(line.rfind("0.00000000000000,", 0) == 0);
    CHECK(line.find("\r\n") == line.size() - 2);
}

TEST_SUITE_END();
