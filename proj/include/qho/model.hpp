#pragma once

#include "qho/errors.hpp"
#include "qho/real.hpp"

#include <string>

namespace qho {

// Raw physical inputs of the two-oscillator model (SI units).
struct OscillatorParams {
    Real m_x;           // kg, > 0
    Real m_y;           // kg, > 0
    Real omega_x_bare;  // rad/s, > 0
    Real omega_y_bare;  // rad/s, > 0
    Real k;             // N/m, >= 0
    Real r;             // dimensionless bath parameter, [0, 1)
    unsigned precision_bits = 256;

    void validate() const;
};

// Normal-mode frame derived from OscillatorParams. The coordinate map is
//   u(x,y) = u1*x + u2*y,  v(x,y) = v1*x + v2*y
// in the dimensionless oscillator coordinates.
struct DecoupledFrame {
    Real omega_x, omega_y;  // renormalized frequencies
    Real theta;
    Real cos_theta, sin_theta;
    Real omega_u, omega_v;
    Real u1, u2, v1, v2;
    Real m;   // sqrt(m_x m_y)
    Real mu;  // (m_x/m_y)^(1/4)

    // Serialization used for cache keys; exact hex, order fixed.
    std::string key_material() const;
};

Real renormalize(const Real& m, const Real& omega_bare, const Real& k);

// Relative floor on |omega_y^2 - omega_x^2| below which the rotation angle
// formula is rejected.
inline Real resonance_floor() { return Real(1e-30); }

DecoupledFrame derive_frame(const OscillatorParams& params);

// r = exp(-hbar omega_y / (kB T)); r = 0 at T = 0.
Real bath_r_from_temperature(const Real& omega_y, const Real& temperature_K);

Real planck_hbar();
Real boltzmann_kB();

}  // namespace qho
