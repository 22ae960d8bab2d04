#pragma once

#include <doctest.h>

#include "qho/model.hpp"
#include "qho/real.hpp"

#include <string>

namespace qho::testutil {

inline void check_close(const Real& value, const Real& expected, const Real& tol) {
    const Real dev = abs(value - expected);
    INFO("value    = " << value.str(30));
    INFO("expected = " << expected.str(30));
    INFO("|dev|    = " << dev.str(6) << "  tol = " << tol.str(6));
    CHECK(dev <= tol);
}

inline void check_close(const Real& value, const std::string& expected, const Real& tol) {
    check_close(value, parse_real(expected), tol);
}

// Case-study physical inputs (SI units).
inline OscillatorParams case_params() {
    OscillatorParams p;
    p.m_x = parse_real("1e-6");
    p.m_y = parse_real("2e-6");
    p.omega_x_bare = parse_real("1e6");
    p.omega_y_bare = parse_real("1e7");
    p.k = parse_real("1000");
    p.r = 0;
    p.precision_bits = 256;
    return p;
}

// Uncoupled equal-mass inputs whose frame is the exact identity map.
inline OscillatorParams identity_params() {
    OscillatorParams p = case_params();
    p.m_y = p.m_x;
    p.k = 0;
    return p;
}

}  // namespace qho::testutil
