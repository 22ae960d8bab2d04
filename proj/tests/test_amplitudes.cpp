#include "qho/amplitudes.hpp"

#include "test_util.hpp"

#include <random>

using namespace qho;
using testutil::case_params;
using testutil::check_close;
using testutil::identity_params;

namespace {

GroupedSums make_sums(const OscillatorParams& params, const TruncationSpec& spec, const Real& r,
                      const Real& tail_tol) {
    const DecoupledFrame frame = derive_frame(params);
    IntegralEngine engine(frame);
    const int ell_max =
        std::max(spec.L, mehler_series_cutoff(frame, r, tail_tol, spec.L));
    const IntegralTable table =
        IntegralTable::build(engine, IndexBounds{spec.D, ell_max, spec.N, spec.N});
    return GroupedSums::build(spec, table, r, tail_tol);
}

}  // namespace

TEST_SUITE_BEGIN("amplitudes");

TEST_CASE("prefactor closed form") {
    const DecoupledFrame id = derive_frame(identity_params());
    check_close(amplitude_prefactor(id, Real(0)), 1 / sqrt(pi_value()), parse_real("1e-70"));
    // r > 0 scales by sqrt((1-r)/(1+r)).
    const Real r = parse_real("0.5");
    check_close(amplitude_prefactor(id, r),
                sqrt((1 - r) / (1 + r)) / sqrt(pi_value()), parse_real("1e-70"));
}

TEST_CASE("identity frame gives pure phases on the diagonal") {
    TruncationSpec spec;
    spec.D = 3;
    spec.L = 2;
    spec.N = 6;
    const GroupedSums sums = make_sums(identity_params(), spec, Real(0), parse_real("1e-40"));
    const Real omega = sums.frame().omega_x;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ud(0.0, 5e-6);
    const Real tol = pow2(-100);
    for (int s = 0; s < 5; ++s) {
        const Real t = parse_real(std::to_string(ud(rng)));
        const AmplitudeTensor amps = amplitudes_at(t, sums);
        for (int a = 0; a <= 3; ++a)
            for (int b = 0; b <= 3; ++b)
                for (int ap = 0; ap <= 3; ++ap)
                    for (int bp = 0; bp <= 3; ++bp) {
                        const Complex& v = amps.at(a, b, ap, bp);
                        if (a == ap && b == bp) {
                            const Complex expected = unit_phase(omega * (b - a) * t);
                            check_close((v - expected).abs(), Real(0), tol);
                        } else {
                            CHECK(v.re == 0);
                            CHECK(v.im == 0);
                        }
                    }
    }
}

TEST_CASE("case frame: parity selection and Hermitian symmetry") {
    TruncationSpec spec;  // defaults D=3, L=2, N=6
    const GroupedSums sums = make_sums(case_params(), spec, Real(0), parse_real("1e-40"));
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ud(0.0, 5e-6);
    const Real herm_tol = pow2(-128);
    for (int s = 0; s < 4; ++s) {
        const AmplitudeTensor amps = amplitudes_at(parse_real(std::to_string(ud(rng))), sums);
        for (int a = 0; a <= 3; ++a)
            for (int b = 0; b <= 3; ++b)
                for (int ap = 0; ap <= 3; ++ap)
                    for (int bp = 0; bp <= 3; ++bp) {
                        const Complex& v = amps.at(a, b, ap, bp);
                        if (((a + b + ap + bp) % 2) != 0) {
                            // Parity-mismatched entries vanish exactly.
                            CHECK(v.re == 0);
                            CHECK(v.im == 0);
                        }
                        const Complex mirror = amps.at(b, a, bp, ap).conj();
                        check_close((v - mirror).abs(), Real(0), herm_tol);
                    }
    }
}

TEST_CASE("case frame regression at t = 5e-6") {
    TruncationSpec spec;
    const GroupedSums sums = make_sums(case_params(), spec, Real(0), parse_real("1e-40"));
    const AmplitudeTensor amps = amplitudes_at(parse_real("5e-6"), sums);
    check_close(amps.at(0, 0, 2, 2).abs(), "0.13801084176901996442", parse_real("1e-18"));
    check_close(amps.at(1, 1, 3, 3).abs(), "0.27266328938340526621", parse_real("1e-18"));
}

TEST_CASE("amplitudes are deterministic across rebuilds") {
    TruncationSpec spec;
    spec.N = 4;
    const Real t = parse_real("1.25e-6");
    const GroupedSums s1 = make_sums(case_params(), spec, Real(0), parse_real("1e-40"));
    const GroupedSums s2 = make_sums(case_params(), spec, Real(0), parse_real("1e-40"));
    const AmplitudeTensor a1 = amplitudes_at(t, s1);
    const AmplitudeTensor a2 = amplitudes_at(t, s2);
    for (size_t i = 0; i < a1.values.size(); ++i) {
        CHECK(real_to_hex(a1.values[i].re) == real_to_hex(a2.values[i].re));
        CHECK(real_to_hex(a1.values[i].im) == real_to_hex(a2.values[i].im));
    }
    CHECK(a1.to_csv(256) == a2.to_csv(256));
}

TEST_CASE("CSV rendering") {
    CHECK(csv_digits(256) == 72);
    CHECK(csv_digits(64) == 14);
    CHECK(csv_digits(32) == 6);  // floored at 6
    AmplitudeTensor amps;
    amps.D = 1;
    amps.t = 0;
    amps.values.assign(16, Complex{});
    amps.at(0, 1, 1, 0) = Complex{Real(1), Real(-2)};
    const std::string csv = amps.to_csv(64);
    CHECK(csv.rfind("a,b,a_p,b_p,re,im\r\n", 0) == 0);
    CHECK(csv.find("0,1,1,0,1.00000000000000,-2.00000000000000\r\n") != std::string::npos);
}

TEST_CASE("truncation spec validation") {
    TruncationSpec spec;
    spec.N = -1;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec = TruncationSpec{};
    spec.L = -1;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec = TruncationSpec{};
    spec.N_prime = 5;  // refinement must exceed N
    CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_SUITE_END();
