#include "qho/gauss_integrals.hpp"

#include "test_util.hpp"

#include <cstdio>
#include <random>
#include <string>

using namespace qho;
using testutil::case_params;
using testutil::check_close;
using testutil::identity_params;

TEST_SUITE_BEGIN("gauss_integrals");

TEST_CASE("quadratic form factorization and normalization") {
    // Q = [[2, 1], [1, 3]], det = 5.
    QuadraticForm f = QuadraticForm::from_matrix(2, {Real(2), Real(1), Real(1), Real(3)});
    check_close(f.det, Real(5), parse_real("1e-70"));
    check_close(f.normalization, 2 * pi_value() / sqrt(Real(5)), parse_real("1e-70"));
    // Sigma = Q^{-1} = [[3, -1], [-1, 2]] / 5.
    check_close(f.Sigma(0, 0), Real(3) / 5, parse_real("1e-70"));
    check_close(f.Sigma(0, 1), Real(-1) / 5, parse_real("1e-70"));
    // Cholesky reproduces Q.
    check_close(f.L(0, 0) * f.L(0, 0), Real(2), parse_real("1e-70"));
    check_close(f.L(1, 0) * f.L(0, 0), Real(1), parse_real("1e-70"));
    CHECK_THROWS_AS(QuadraticForm::from_matrix(2, {Real(1), Real(2), Real(2), Real(1)}),
                    SingularForm);
}

TEST_CASE("Gaussian moments satisfy the Wick recursion") {
    QuadraticForm id = QuadraticForm::from_matrix(2, {Real(1), Real(0), Real(0), Real(1)});
    // Standard 2-d Gaussian: odd moments vanish, E[x^2] = 1, E[x^4] = 3,
    // E[x^2 y^2] = 1; gaussian_moment carries the normalization 2 pi.
    const Real n = 2 * pi_value();
    check_close(gaussian_moment(id, {1, 0}), Real(0), parse_real("1e-70"));
    check_close(gaussian_moment(id, {2, 0}), n, parse_real("1e-65"));
    check_close(gaussian_moment(id, {4, 0}), 3 * n, parse_real("1e-65"));
    check_close(gaussian_moment(id, {2, 2}), n, parse_real("1e-65"));
    QuadraticForm f = QuadraticForm::from_matrix(2, {Real(2), Real(1), Real(1), Real(3)});
    // E[x y] = Sigma_01.
    check_close(gaussian_moment(f, {1, 1}), f.normalization * f.Sigma(0, 1), parse_real("1e-65"));
    BivariateMoments mom(f, 6);
    check_close(mom(1, 1), f.Sigma(0, 1), parse_real("1e-65"));
    check_close(mom(4, 0), 3 * f.Sigma(0, 0) * f.Sigma(0, 0), parse_real("1e-65"));
}

TEST_CASE("identity frame reduces I to Kronecker deltas") {
    IntegralEngine engine(derive_frame(identity_params()));
    for (int a = 0; a <= 8; ++a)
        for (int ell = 0; ell <= 3; ++ell)
            for (int kappa = 0; kappa <= 8; ++kappa) {
                const Real v = engine.integral_I(a, ell, kappa, ell);
                check_close(v, Real(a == kappa ? 1 : 0), parse_real("1e-60"));
            }
}

TEST_CASE("exact I agrees with the quadrature oracle") {
    IntegralEngine engine(derive_frame(case_params()));
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> low(0, 6), high(0, 10);
    for (int s = 0; s < 12; ++s) {
        const int a = low(rng), ell = low(rng), kappa = high(rng), chi = high(rng);
        const Real exact = engine.integral_I(a, ell, kappa, chi);
        const Real direct = engine.integral_I_direct(a, ell, kappa, chi);
        check_close(exact, direct, parse_real("1e-20"));
    }
}

TEST_CASE("Mehler-resummed J agrees with the direct 4-d quadrature") {
    IntegralEngine engine(derive_frame(case_params()));
    const Real tail_tol = parse_real("1e-40");
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> idx(0, 4);
    for (const char* r_text : {"0", "0.3"}) {
        const Real r = parse_real(r_text);
        for (int s = 0; s < 3; ++s) {
            const int b = idx(rng), a = idx(rng), kappa = idx(rng), chi = idx(rng);
            const int kappa_p = idx(rng), chi_p = idx(rng);
            const auto j = engine.integral_J(b, a, kappa, chi, kappa_p, chi_p, r, tail_tol, 2);
            const Real direct = engine.integral_J_direct(b, a, kappa, chi, kappa_p, chi_p, r);
            Real tol = parse_real("1e-18");
            if (j.tail_bound > tol) tol = j.tail_bound;
            check_close(j.value, direct, tol);
        }
    }
}

TEST_CASE("|I| cap is the frame's Jacobian bound") {
    const DecoupledFrame f = derive_frame(case_params());
    IntegralEngine engine(f);
    const Real expected = pow(f.omega_x * f.omega_y / (f.omega_u * f.omega_v), Real(1) / 4);
    CHECK(engine.i_cap() == expected);
    CHECK(abs(engine.integral_I(0, 0, 0, 0)) <= engine.i_cap());
}

TEST_CASE("integral table round-trips bit-identically through the cache") {
    IntegralEngine engine(derive_frame(case_params()));
    const IndexBounds bounds{2, 2, 4, 4};
    const IntegralTable table = IntegralTable::build(engine, bounds);
    CHECK(table.max_abs() > 0);
    const std::string path = std::string("/tmp/qho-test-table-") +
                             std::to_string(table.cache_key()) + ".itbl";
    REQUIRE(table.save(path));
    const auto loaded = IntegralTable::load(path, table.cache_key());
    REQUIRE(loaded.has_value());
    for (int a = 0; a <= 2; ++a)
        for (int ell = 0; ell <= 2; ++ell)
            for (int kappa = 0; kappa <= 4; ++kappa)
                for (int chi = 0; chi <= 4; ++chi)
                    CHECK(real_to_hex(loaded->at(a, ell, kappa, chi)) ==
                          real_to_hex(table.at(a, ell, kappa, chi)));
    CHECK_FALSE(IntegralTable::load(path, table.cache_key() + 1).has_value());
    std::remove(path.c_str());
}

TEST_CASE("cache key tracks frame, precision and bounds") {
    const DecoupledFrame f1 = derive_frame(case_params());
    const DecoupledFrame f2 = derive_frame(identity_params());
    const IndexBounds b1{2, 2, 4, 4}, b2{2, 2, 5, 4};
    CHECK(table_cache_key(f1, 256, b1) != table_cache_key(f2, 256, b1));
    CHECK(table_cache_key(f1, 256, b1) != table_cache_key(f1, 320, b1));
    CHECK(table_cache_key(f1, 256, b1) != table_cache_key(f1, 256, b2));
    CHECK(table_cache_key(f1, 256, b1) == table_cache_key(f1, 256, b1));
}

TEST_SUITE_END();
