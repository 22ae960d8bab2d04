#include "qho/model.hpp"

#include <sstream>

namespace qho {

void OscillatorParams::validate() const {
    if (!(m_x > 0)) throw ValidationError("m_x must be positive");
    if (!(m_y > 0)) throw ValidationError("m_y must be positive");
    if (!(omega_x_bare > 0)) throw ValidationError("omega_x_bare must be positive");
    if (!(omega_y_bare > 0)) throw ValidationError("omega_y_bare must be positive");
    if (!(k >= 0)) throw ValidationError("k must be nonnegative");
    if (!(r >= 0 && r < 1)) throw ValidationError("r must lie in [0, 1)");
    if (precision_bits == 0) throw ValidationError("precision_bits must be positive");
}

Real renormalize(const Real& m, const Real& omega_bare, const Real& k) {
    return sqrt(omega_bare * omega_bare + k / m);
}

DecoupledFrame derive_frame(const OscillatorParams& params) {
    params.validate();
    DecoupledFrame f;
    f.omega_x = renormalize(params.m_x, params.omega_x_bare, params.k);
    f.omega_y = renormalize(params.m_y, params.omega_y_bare, params.k);
    f.m = sqrt(params.m_x * params.m_y);
    f.mu = pow(params.m_x / params.m_y, Real(1) / 4);

    Real wx2 = f.omega_x * f.omega_x;
    Real wy2 = f.omega_y * f.omega_y;
    Real delta = wy2 - wx2;
    if (abs(delta) < resonance_floor() * (wx2 + wy2))
        throw DegenerateResonance("renormalized frequencies are (near) resonant");

    Real g = params.k / f.m;  // coupling in mass-weighted form
    f.theta = atan(2 * g / delta) / 2;

    // cos/sin from the closed form; both nonnegative on the principal branch.
    Real q = 1 / sqrt(1 + 4 * g * g / (delta * delta));
    f.cos_theta = sqrt((1 + q) / 2);
    f.sin_theta = sqrt((1 - q) / 2);
    if (f.theta < 0) f.sin_theta = -f.sin_theta;  // delta < 0 case; case study has delta > 0

    Real c2 = f.cos_theta * f.cos_theta;
    Real s2 = f.sin_theta * f.sin_theta;
    Real sin2t = 2 * f.sin_theta * f.cos_theta;
    f.omega_u = sqrt(wx2 * c2 + wy2 * s2 - g * sin2t);
    f.omega_v = sqrt(wx2 * s2 + wy2 * c2 + g * sin2t);

    f.u1 = sqrt(params.m_y * f.omega_u / (params.m_x * f.omega_x)) * f.cos_theta;
    f.u2 = sqrt(params.m_x * f.omega_u / (params.m_y * f.omega_y)) * f.sin_theta;
    f.v1 = -sqrt(params.m_y * f.omega_v / (params.m_x * f.omega_x)) * f.sin_theta;
    f.v2 = sqrt(params.m_x * f.omega_v / (params.m_y * f.omega_y)) * f.cos_theta;
    return f;
}

Real bath_r_from_temperature(const Real& omega_y, const Real& temperature_K) {
    if (!(omega_y > 0)) throw ValidationError("omega_y must be positive");
    if (!(temperature_K >= 0)) throw ValidationError("temperature must be nonnegative");
    if (temperature_K == 0) return Real(0);
    return exp(-planck_hbar() * omega_y / (boltzmann_kB() * temperature_K));
}

Real planck_hbar() {
    // h is exact by the 2019 SI redefinition; hbar = h / (2 pi) at working precision.
    Real h = parse_real("6.62607015e-34");
    return h / (2 * pi_value());
}

Real boltzmann_kB() { return parse_real("1.380649e-23"); }

std::string DecoupledFrame::key_material() const {
    std::ostringstream os;
    for (const Real* v : {&omega_x, &omega_y, &omega_u, &omega_v, &u1, &u2, &v1, &v2})
        os << real_to_hex(*v) << '|';
    return os.str();
}

}  // namespace qho
