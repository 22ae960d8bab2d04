#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qho {

namespace mp = boost::multiprecision;

// Extended-precision real. Precision is taken from the thread default at
// construction time; set_precision_bits() must run before any values are made.
using Real = mp::number<mp::mpfr_float_backend<0, mp::allocate_dynamic>, mp::et_off>;

inline unsigned bits_to_digits10(unsigned bits) {
    return static_cast<unsigned>((static_cast<std::uint64_t>(bits) * 30103u) / 100000u) + 3u;
}

inline void set_precision_bits(unsigned bits) {
    Real::default_precision(bits_to_digits10(bits));
}

inline unsigned current_precision_bits() {
    Real probe = 0;
    return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

// Temporarily raises the working precision (guard digits for the integral
// engine); restores the previous default on scope exit.
class PrecisionGuard {
  public:
    explicit PrecisionGuard(unsigned bits) : saved_digits10_(Real::default_precision()) {
        Real::default_precision(bits_to_digits10(bits));
    }
    ~PrecisionGuard() { Real::default_precision(saved_digits10_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

  private:
    unsigned saved_digits10_;
};

// Rounds a value into the current default precision. Goes through mpfr_set so
// the result precision never follows the source (boost's variable-precision
// propagation would otherwise copy it).
inline Real round_to_default(const Real& x) {
    Real out = 0;
    mpfr_set(out.backend().data(), x.backend().data(), MPFR_RNDN);
    return out;
}

inline Real pi_value() {
    Real p = 0;
    mpfr_const_pi(p.backend().data(), MPFR_RNDN);
    return p;
}

inline Real pow2(int e) {
    Real r = 1;
    mpfr_mul_2si(r.backend().data(), r.backend().data(), e, MPFR_RNDN);
    return r;
}

// Parses a decimal/scientific numeral directly at working precision.
inline Real parse_real(std::string_view text) {
    Real r = 0;
    std::string s(text);
    if (s.empty() || mpfr_set_str(r.backend().data(), s.c_str(), 10, MPFR_RNDN) != 0)
        throw std::invalid_argument("not a number: '" + s + "'");
    return r;
}

// Exact hexadecimal serialization; round-trips bit-identically at equal precision.
inline std::string real_to_hex(const Real& x) {
    char* s = nullptr;
    mpfr_asprintf(&s, "%Ra", x.backend().data());
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

inline Real real_from_hex(const std::string& s) {
    Real r = 0;
    if (mpfr_set_str(r.backend().data(), s.c_str(), 0, MPFR_RNDN) != 0)
        throw std::invalid_argument("bad hex float: '" + s + "'");
    return r;
}

// Fixed-point decimal rendering for CSV output.
inline std::string real_to_fixed(const Real& x, int digits) {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rf", digits, x.backend().data());
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

struct Complex {
    Real re{0};
    Real im{0};

    Complex() = default;
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    explicit Complex(Real r) : re(std::move(r)), im(0) {}

    Complex operator+(const Complex& o) const { return {re + o.re, im + o.im}; }
    Complex operator-(const Complex& o) const { return {re - o.re, im - o.im}; }
    Complex operator*(const Complex& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    Complex operator*(const Real& s) const { return {re * s, im * s}; }
    Complex& operator+=(const Complex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Complex operator-() const { return {-re, -im}; }
    Complex conj() const { return {re, -im}; }
    Real abs() const { return hypot(re, im); }
    Real norm() const { return re * re + im * im; }
};

inline Complex operator*(const Real& s, const Complex& z) { return z * s; }

inline Complex complex_exp(const Complex& z) {
    Real m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

// exp(-i phi)
inline Complex unit_phase(const Real& phi) { return {cos(phi), -sin(phi)}; }

inline Complex complex_sqrt(const Complex& z) {
    Real m = z.abs();
    if (m == 0) return {Real(0), Real(0)};
    Real a = atan2(z.im, z.re) / 2;
    Real s = sqrt(m);
    return {s * cos(a), s * sin(a)};
}

// FNV-1a, used to key integral-table cache files.
inline std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace qho
