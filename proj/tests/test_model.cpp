#include "qho/model.hpp"

#include "test_util.hpp"

using namespace qho;
using testutil::case_params;
using testutil::check_close;
using testutil::identity_params;

TEST_SUITE_BEGIN("model");

TEST_CASE("renormalized frequencies reproduce the reference frame") {
    const DecoupledFrame f = derive_frame(case_params());
    // sqrt(1e12 + 1e9) and sqrt(1e14 + 5e8) at 10 printed decimals.
    check_close(f.omega_x, "1000499.8750624610", parse_real("5e-11"));
    check_close(f.omega_y, "10000024.9999687501", parse_real("5e-11"));
    check_close(f.omega_u, "1000499.8725384574", parse_real("5e-11"));
    check_close(f.omega_v, "10000025.0002212760", parse_real("5e-11"));
    check_close(f.u1, "1.4142135606", parse_real("5e-11"));
    check_close(f.u2, "0.0000015975", parse_real("5e-11"));
    check_close(f.v1, "-0.0000319344", parse_real("5e-11"));
    check_close(f.v2, "0.7071067812", parse_real("5e-11"));
}

TEST_CASE("frame invariants are exact at working precision") {
    const OscillatorParams p = case_params();
    const DecoupledFrame f = derive_frame(p);
    // The rotation preserves trace and determinant of the coupled quadratic form.
    CHECK(f.omega_u * f.omega_u + f.omega_v * f.omega_v ==
          f.omega_x * f.omega_x + f.omega_y * f.omega_y);
    CHECK(f.omega_u * f.omega_u * f.omega_v * f.omega_v ==
          f.omega_x * f.omega_x * f.omega_y * f.omega_y - p.k * p.k / (p.m_x * p.m_y));
    CHECK(f.cos_theta * f.cos_theta + f.sin_theta * f.sin_theta == 1);
    CHECK(f.m == sqrt(p.m_x * p.m_y));
}

TEST_CASE("uncoupled equal-mass frame is the identity map") {
    const DecoupledFrame f = derive_frame(identity_params());
    CHECK(f.u1 == 1);
    CHECK(f.u2 == 0);
    CHECK(f.v1 == 0);
    CHECK(f.v2 == 1);
    CHECK(f.omega_u == f.omega_x);
    CHECK(f.omega_v == f.omega_y);
    CHECK(f.sin_theta == 0);
}

TEST_CASE("renormalize closed form") {
    check_close(renormalize(Real(1), Real(2), Real(5)), Real(3), parse_real("1e-70"));
    CHECK(renormalize(parse_real("1e-6"), parse_real("1e6"), Real(0)) == parse_real("1e6"));
}

TEST_CASE("validation rejects unphysical inputs") {
    OscillatorParams p = case_params();
    p.m_x = 0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = case_params();
    p.r = 1;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = case_params();
    p.k = -1;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("degenerate resonance is rejected") {
    OscillatorParams p = case_params();
    p.m_y = p.m_x;
    p.omega_y_bare = p.omega_x_bare;
    CHECK_THROWS_AS(derive_frame(p), DegenerateResonance);
}

TEST_CASE("bath parameter from temperature") {
    const DecoupledFrame f = derive_frame(case_params());
    CHECK(bath_r_from_temperature(f.omega_y, Real(0)) == 0);
    const Real r300 = bath_r_from_temperature(f.omega_y, Real(300));
    check_close(r300, "0.999999745391643152202", parse_real("1e-18"));
    // Monotone in temperature, always in [0, 1).
    CHECK(bath_r_from_temperature(f.omega_y, Real(1)) < r300);
    CHECK(r300 < 1);
    // Consistency with the definition r = exp(-hbar omega / (kB T)).
    const Real direct = exp(-planck_hbar() * f.omega_y / (boltzmann_kB() * 300));
    CHECK(r300 == direct);
}

TEST_CASE("key material round-trips the frame exactly") {
    const DecoupledFrame f = derive_frame(case_params());
    CHECK(f.key_material() == derive_frame(case_params()).key_material());
    CHECK(f.key_material() != derive_frame(identity_params()).key_material());
}

TEST_SUITE_END();
