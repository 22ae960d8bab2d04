#include "qho/gauss_integrals.hpp"

#include "qho/quad.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qho {

namespace {

// Integer log2, floor; ilog2(1) = 0.
int ilog2(int n) {
    int b = 0;
    while (n > 1) {
        n >>= 1;
        ++b;
    }
    return b;
}

// Orthonormal Hermite polynomial H_n(x)/sqrt(2^n n! sqrt(pi)); pim4 = pi^{-1/4}.
Real orth_poly(int n, const Real& x, const Real& pim4) {
    Real p0 = pim4;
    if (n == 0) return p0;
    Real p1 = x * sqrt(Real(2)) * p0;
    for (int j = 2; j <= n; ++j) {
        Real p2 = x * sqrt(Real(2) / j) * p1 - sqrt(Real(j - 1) / j) * p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// Inverse of a lower-triangular matrix, then transposed: returns S = L^{-T},
// row-major d x d. With Q = L L^T this gives S^T Q S = I.
std::vector<Real> whitening_map(const QuadraticForm& form) {
    const int d = form.dim;
    std::vector<Real> linv(static_cast<size_t>(d) * d, Real(0));
    for (int i = 0; i < d; ++i) {
        linv[static_cast<size_t>(i) * d + i] = 1 / form.L(i, i);
        for (int j = 0; j < i; ++j) {
            Real s = 0;
            for (int k = j; k < i; ++k) s += form.L(i, k) * linv[static_cast<size_t>(k) * d + j];
            linv[static_cast<size_t>(i) * d + j] = -s / form.L(i, i);
        }
    }
    std::vector<Real> s(static_cast<size_t>(d) * d, Real(0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) s[static_cast<size_t>(i) * d + j] = linv[static_cast<size_t>(j) * d + i];
    return s;
}

}  // namespace

QuadraticForm QuadraticForm::from_matrix(int dim, std::vector<Real> entries) {
    if (dim < 1 || entries.size() != static_cast<size_t>(dim) * dim)
        throw std::invalid_argument("QuadraticForm: bad dimensions");
    QuadraticForm f;
    f.dim = dim;
    f.q = std::move(entries);
    f.chol.assign(static_cast<size_t>(dim) * dim, Real(0));
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j <= i; ++j) {
            Real s = f.Q(i, j);
            for (int k = 0; k < j; ++k) s -= f.L(i, k) * f.L(j, k);
            if (i == j) {
                if (!(s > 0)) throw SingularForm("QuadraticForm: matrix not positive definite");
                f.chol[static_cast<size_t>(i) * dim + i] = sqrt(s);
            } else {
                f.chol[static_cast<size_t>(i) * dim + j] = s / f.L(j, j);
            }
        }
    }
    f.det = 1;
    for (int i = 0; i < dim; ++i) f.det *= f.L(i, i) * f.L(i, i);
    // Sigma = L^{-T} L^{-1}
    std::vector<Real> s = whitening_map(f);  // S = L^{-T}
    f.sigma.assign(static_cast<size_t>(dim) * dim, Real(0));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            Real acc = 0;
            for (int k = 0; k < dim; ++k)
                acc += s[static_cast<size_t>(i) * dim + k] * s[static_cast<size_t>(j) * dim + k];
            f.sigma[static_cast<size_t>(i) * dim + j] = acc;
        }
    f.normalization = sqrt(pow(2 * pi_value(), dim) / f.det);
    return f;
}

namespace {

Real central_moment(const QuadraticForm& form, std::vector<int>& alpha,
                    std::map<std::vector<int>, Real>& memo) {
    int total = 0, first = -1;
    for (int i = 0; i < form.dim; ++i) {
        total += alpha[i];
        if (first < 0 && alpha[i] > 0) first = i;
    }
    if (total == 0) return Real(1);
    if (total % 2 == 1) return Real(0);
    auto it = memo.find(alpha);
    if (it != memo.end()) return it->second;
    // Stein identity: E[x_i x^beta] = sum_j Sigma_ij beta_j E[x^{beta - e_j}]
    std::vector<int> beta = alpha;
    --beta[first];
    Real acc = 0;
    for (int j = 0; j < form.dim; ++j) {
        if (beta[j] == 0) continue;
        int bj = beta[j];
        --beta[j];
        acc += form.Sigma(first, j) * bj * central_moment(form, beta, memo);
        ++beta[j];
    }
    memo.emplace(alpha, acc);
    return acc;
}

}  // namespace

Real gaussian_moment(const QuadraticForm& form, const std::vector<int>& alpha) {
    if (alpha.size() != static_cast<size_t>(form.dim))
        throw std::invalid_argument("gaussian_moment: index rank mismatch");
    for (int a : alpha)
        if (a < 0) throw std::invalid_argument("gaussian_moment: negative exponent");
    std::map<std::vector<int>, Real> memo;
    std::vector<int> idx = alpha;
    return form.normalization * central_moment(form, idx, memo);
}

BivariateMoments::BivariateMoments(const QuadraticForm& form, int max_degree)
    : max_degree_(max_degree) {
    if (form.dim != 2) throw std::invalid_argument("BivariateMoments: 2-d form required");
    if (max_degree < 0) throw std::invalid_argument("BivariateMoments: negative degree");
    const size_t n = static_cast<size_t>(max_degree) + 1;
    table_.assign(n * n, Real(0));
    const Real& s00 = form.Sigma(0, 0);
    const Real& s01 = form.Sigma(0, 1);
    const Real& s11 = form.Sigma(1, 1);
    for (int i = 0; i <= max_degree; ++i)
        for (int j = 0; j <= max_degree; ++j) {
            if ((i + j) % 2 == 1) continue;
            Real& m = table_[static_cast<size_t>(i) * n + j];
            if (i == 0 && j == 0) {
                m = 1;
            } else if (i == 0) {
                m = (j - 1) * s11 * table_[static_cast<size_t>(j - 2)];
            } else {
                if (i >= 2) m = (i - 1) * s00 * table_[static_cast<size_t>(i - 2) * n + j];
                if (j >= 1) m += j * s01 * table_[static_cast<size_t>(i - 1) * n + j - 1];
            }
        }
}

const Real& BivariateMoments::operator()(int i, int j) const {
    if (i < 0 || j < 0 || i > max_degree_ || j > max_degree_)
        throw std::out_of_range("BivariateMoments: index out of range");
    return table_[static_cast<size_t>(i) * (max_degree_ + 1) + j];
}

IntegralEngine::IntegralEngine(DecoupledFrame frame)
    : frame_(std::move(frame)), base_bits_(current_precision_bits()) {}

unsigned IntegralEngine::guard_bits(int total_degree) const {
    // Terms of the contraction reach ~2^{d log2 d} while the result is O(1);
    // quantized to 256-bit buckets so context reuse stays deterministic.
    const int d = total_degree < 2 ? 2 : total_degree;
    unsigned extra = 64u + static_cast<unsigned>(d) * static_cast<unsigned>(ilog2(d) + 2);
    extra = ((extra + 255u) / 256u) * 256u;
    return base_bits_ + extra;
}

QuadraticForm IntegralEngine::make_form2() const {
    const Real u1 = round_to_default(frame_.u1), u2 = round_to_default(frame_.u2);
    const Real v1 = round_to_default(frame_.v1), v2 = round_to_default(frame_.v2);
    Real q11 = 1 + u1 * u1 + v1 * v1;
    Real q12 = u1 * u2 + v1 * v2;
    Real q22 = 1 + u2 * u2 + v2 * v2;
    return QuadraticForm::from_matrix(2, {q11, q12, q12, q22});
}

IntegralEngine::Context& IntegralEngine::ensure_context(int max_degree, unsigned bits) {
    Context& ctx = contexts_[bits];
    if (ctx.degree >= max_degree) return ctx;
    PrecisionGuard guard(bits);
    if (ctx.degree < 0) ctx.form = make_form2();
    ctx.moments = std::make_unique<BivariateMoments>(ctx.form, max_degree);
    ctx.degree = max_degree;
    return ctx;
}

const std::vector<BigInt>& IntegralEngine::hcoeffs(int n) {
    auto it = hcoeff_.find(n);
    if (it == hcoeff_.end()) it = hcoeff_.emplace(n, hermite_coefficients(n)).first;
    return it->second;
}

Real IntegralEngine::integral_I(int a, int ell, int kappa, int chi) {
    if (a < 0 || ell < 0 || kappa < 0 || chi < 0)
        throw std::invalid_argument("integral_I: indices must be nonnegative");
    if ((a + ell + kappa + chi) % 2 == 1) return Real(0);  // odd integrand
    // Identity coordinate map: orthonormality gives exact Kronecker deltas.
    if (frame_.u1 == 1 && frame_.u2 == 0 && frame_.v1 == 0 && frame_.v2 == 1)
        return Real(a == kappa && ell == chi ? 1 : 0);
    std::array<int, 4> key{a, ell, kappa, chi};
    auto hit = i_cache_.find(key);
    if (hit != i_cache_.end()) return hit->second;
    const int deg = a + ell + kappa + chi;
    const unsigned bits = guard_bits(deg);
    Context& ctx = ensure_context(deg, bits);
    Real val;
    {
        PrecisionGuard guard(bits);
        const auto& mom = *ctx.moments;
        const Real u1 = round_to_default(frame_.u1), u2 = round_to_default(frame_.u2);
        const Real v1 = round_to_default(frame_.v1), v2 = round_to_default(frame_.v2);

        // Bivariate expansion of H_n(c1 x + c2 y), normalized.
        auto expand2 = [&](int n, const Real& c1, const Real& c2) {
            const auto& hc = hcoeffs(n);
            std::vector<Real> p1(static_cast<size_t>(n) + 1), p2(static_cast<size_t>(n) + 1);
            p1[0] = 1;
            p2[0] = 1;
            for (int i = 1; i <= n; ++i) {
                p1[static_cast<size_t>(i)] = p1[static_cast<size_t>(i) - 1] * c1;
                p2[static_cast<size_t>(i)] = p2[static_cast<size_t>(i) - 1] * c2;
            }
            const Real nrm = psi_normalization(n);
            std::vector<std::vector<Real>> out(static_cast<size_t>(n) + 1,
                                               std::vector<Real>(static_cast<size_t>(n) + 1, Real(0)));
            for (int k = n % 2; k <= n; k += 2) {
                Real ck = nrm * bigint_to_real(hc[static_cast<size_t>(k)]);
                BigInt binom = 1;
                for (int m = 0; m <= k; ++m) {
                    out[static_cast<size_t>(m)][static_cast<size_t>(k - m)] +=
                        ck * bigint_to_real(binom) * p1[static_cast<size_t>(m)] *
                        p2[static_cast<size_t>(k - m)];
                    binom = binom * (k - m) / (m + 1);
                }
            }
            return out;
        };

        auto pu = expand2(kappa, u1, u2);
        auto pv = expand2(chi, v1, v2);
        // uv = pu * pv (dense bivariate convolution)
        const int du = kappa + chi;
        std::vector<std::vector<Real>> uv(static_cast<size_t>(du) + 1,
                                          std::vector<Real>(static_cast<size_t>(du) + 1, Real(0)));
        for (int i1 = 0; i1 <= kappa; ++i1)
            for (int j1 = 0; j1 + i1 <= kappa; ++j1) {
                const Real& c1 = pu[static_cast<size_t>(i1)][static_cast<size_t>(j1)];
                if (c1 == 0) continue;
                for (int i2 = 0; i2 <= chi; ++i2)
                    for (int j2 = 0; j2 + i2 <= chi; ++j2) {
                        const Real& c2 = pv[static_cast<size_t>(i2)][static_cast<size_t>(j2)];
                        if (c2 == 0) continue;
                        uv[static_cast<size_t>(i1 + i2)][static_cast<size_t>(j1 + j2)] += c1 * c2;
                    }
            }

        const auto& ha = hcoeffs(a);
        const auto& hl = hcoeffs(ell);
        const Real na = psi_normalization(a), nl = psi_normalization(ell);
        Real sum = 0;
        for (int ix = a % 2; ix <= a; ix += 2) {
            Real ca = na * bigint_to_real(ha[static_cast<size_t>(ix)]);
            for (int iy = ell % 2; iy <= ell; iy += 2) {
                Real cal = ca * nl * bigint_to_real(hl[static_cast<size_t>(iy)]);
                for (int i = 0; i <= du; ++i)
                    for (int j = 0; i + j <= du; ++j) {
                        const Real& cuv = uv[static_cast<size_t>(i)][static_cast<size_t>(j)];
                        if (cuv == 0) continue;
                        if ((ix + i + iy + j) % 2 == 1) continue;
                        sum += cal * cuv * mom(ix + i, iy + j);
                    }
            }
        }
        val = sum * ctx.form.normalization;
    }
    Real out = round_to_default(val);
    i_cache_.emplace(key, out);
    return out;
}

Real IntegralEngine::i_cap() const {
    return pow(frame_.omega_x * frame_.omega_y / (frame_.omega_u * frame_.omega_v), Real(1) / 4);
}

int IntegralEngine::mehler_cutoff(const Real& r, const Real& tail_tol, int min_terms) const {
    if (!(r > 0)) return min_terms > 0 ? min_terms : 0;
    const Real cap = i_cap();
    const Real pref = sqrt(pi_value() * (1 - r * r));
    // pref * cap^2 * r^{M+1} / (1-r) <= tail_tol
    Real q = log(tail_tol * (1 - r) / (pref * cap * cap)) / log(r);
    long m = 0;
    if (q > 0) m = ceil(q).convert_to<long>();
    if (m < min_terms) m = min_terms;
    if (m < 0) m = 0;
    while (pref * cap * cap * pow(r, m + 1) / (1 - r) > tail_tol) ++m;
    return static_cast<int>(m);
}

IntegralEngine::JResult IntegralEngine::integral_J(int b, int a, int kappa, int chi, int kappa_p,
                                                   int chi_p, const Real& r, const Real& tail_tol,
                                                   int min_terms) {
    if (b < 0 || a < 0 || kappa < 0 || chi < 0 || kappa_p < 0 || chi_p < 0)
        throw std::invalid_argument("integral_J: indices must be nonnegative");
    if (r < 0 || !(r < 1)) throw DomainError("integral_J: r in [0, 1) required");
    if (!(tail_tol > 0)) throw DomainError("integral_J: tail tolerance must be positive");
    // Both I factors share the bath index; parity kills the sum entirely when
    // the two parities disagree.
    const int par1 = (b + kappa + chi) % 2, par2 = (a + kappa_p + chi_p) % 2;
    if (par1 != par2) return {Real(0), Real(0)};
    if (r == 0) {
        if (par1 == 1) return {Real(0), Real(0)};
        Real v = sqrt(pi_value()) * integral_I(b, 0, kappa, chi) * integral_I(a, 0, kappa_p, chi_p);
        return {v, Real(0)};
    }
    const int cutoff = mehler_cutoff(r, tail_tol, min_terms);
    const Real pref = sqrt(pi_value() * (1 - r * r));
    Real sum = 0;
    Real rl = par1 == 0 ? Real(1) : r;
    const Real r2 = r * r;
    for (int l = par1; l <= cutoff; l += 2) {
        sum += rl * integral_I(b, l, kappa, chi) * integral_I(a, l, kappa_p, chi_p);
        rl *= r2;
    }
    const Real cap = i_cap();
    Real tail = pref * cap * cap * pow(r, cutoff + 1) / (1 - r);
    return {pref * sum, tail};
}

Real IntegralEngine::integral_I_direct(int a, int ell, int kappa, int chi) {
    if (a < 0 || ell < 0 || kappa < 0 || chi < 0)
        throw std::invalid_argument("integral_I_direct: indices must be nonnegative");
    const int deg = a + ell + kappa + chi;
    const unsigned bits = guard_bits(deg);
    Real val;
    {
        PrecisionGuard guard(bits);
        QuadraticForm form = make_form2();
        const std::vector<Real> s = whitening_map(form);
        const Real u1 = round_to_default(frame_.u1), u2 = round_to_default(frame_.u2);
        const Real v1 = round_to_default(frame_.v1), v2 = round_to_default(frame_.v2);
        const Real pim4 = 1 / pow(pi_value(), Real(1) / 4);
        const Real rt2 = sqrt(Real(2));
        QuadRule gh = gauss_hermite(deg / 2 + 2);
        Real acc = 0;
        for (size_t i = 0; i < gh.nodes.size(); ++i)
            for (size_t j = 0; j < gh.nodes.size(); ++j) {
                Real x = rt2 * (s[0] * gh.nodes[i] + s[1] * gh.nodes[j]);
                Real y = rt2 * (s[2] * gh.nodes[i] + s[3] * gh.nodes[j]);
                Real p = orth_poly(a, x, pim4) * orth_poly(ell, y, pim4) *
                         orth_poly(kappa, u1 * x + u2 * y, pim4) *
                         orth_poly(chi, v1 * x + v2 * y, pim4);
                acc += gh.weights[i] * gh.weights[j] * p;
            }
        val = 2 * acc / sqrt(form.det);  // 2 = 2^{d/2} from the sqrt(2) substitution
    }
    return round_to_default(val);
}

Real IntegralEngine::integral_J_direct(int b, int a, int kappa, int chi, int kappa_p, int chi_p,
                                       const Real& r) {
    if (b < 0 || a < 0 || kappa < 0 || chi < 0 || kappa_p < 0 || chi_p < 0)
        throw std::invalid_argument("integral_J_direct: indices must be nonnegative");
    if (r < 0 || !(r < 1)) throw DomainError("integral_J_direct: r in [0, 1) required");
    const int deg = b + a + kappa + chi + kappa_p + chi_p;
    const unsigned bits = guard_bits(deg);
    Real val;
    {
        PrecisionGuard guard(bits);
        const Real u1 = round_to_default(frame_.u1), u2 = round_to_default(frame_.u2);
        const Real v1 = round_to_default(frame_.v1), v2 = round_to_default(frame_.v2);
        const Real rr = round_to_default(r);
        // Variables (w, x, y, z): system pair (w, x), bath pair (y, z) tied by
        // the resummed kernel; exponent matrix assembled from all six factors.
        const Real duu = 1 + u1 * u1 + v1 * v1;
        const Real dux = u1 * u2 + v1 * v2;
        const Real kyy = u2 * u2 + v2 * v2 + (1 + rr * rr) / (1 - rr * rr);
        const Real kyz = -2 * rr / (1 - rr * rr);
        const Real z0 = 0;
        std::vector<Real> q{duu, z0, dux, z0,   //
                            z0, duu, z0, dux,   //
                            dux, z0, kyy, kyz,  //
                            z0, dux, kyz, kyy};
        QuadraticForm form = QuadraticForm::from_matrix(4, std::move(q));
        const std::vector<Real> s = whitening_map(form);
        const Real pim4 = 1 / pow(pi_value(), Real(1) / 4);
        const Real rt2 = sqrt(Real(2));
        const int n = deg / 2 + 2;
        QuadRule gh = gauss_hermite(n);
        Real acc = 0;
        std::array<Real, 4> pt;
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1)
                for (int i2 = 0; i2 < n; ++i2)
                    for (int i3 = 0; i3 < n; ++i3) {
                        const std::array<const Real*, 4> tau{&gh.nodes[static_cast<size_t>(i0)],
                                                             &gh.nodes[static_cast<size_t>(i1)],
                                                             &gh.nodes[static_cast<size_t>(i2)],
                                                             &gh.nodes[static_cast<size_t>(i3)]};
                        for (int row = 0; row < 4; ++row) {
                            Real c = 0;
                            for (int k = 0; k < 4; ++k) c += s[static_cast<size_t>(row) * 4 + k] * *tau[static_cast<size_t>(k)];
                            pt[static_cast<size_t>(row)] = rt2 * c;
                        }
                        const Real& w = pt[0];
                        const Real& x = pt[1];
                        const Real& y = pt[2];
                        const Real& z = pt[3];
                        Real p = orth_poly(b, w, pim4) * orth_poly(a, x, pim4) *
                                 orth_poly(kappa, u1 * w + u2 * y, pim4) *
                                 orth_poly(chi, v1 * w + v2 * y, pim4) *
                                 orth_poly(kappa_p, u1 * x + u2 * z, pim4) *
                                 orth_poly(chi_p, v1 * x + v2 * z, pim4);
                        acc += gh.weights[static_cast<size_t>(i0)] * gh.weights[static_cast<size_t>(i1)] *
                               gh.weights[static_cast<size_t>(i2)] * gh.weights[static_cast<size_t>(i3)] * p;
                    }
        val = 4 * acc / sqrt(form.det);  // 4 = 2^{d/2}
    }
    return round_to_default(val);
}

size_t IntegralTable::index(int a, int ell, int kappa, int chi) const {
    if (a < 0 || a > bounds_.max_a || ell < 0 || ell > bounds_.max_ell || kappa < 0 ||
        kappa > bounds_.max_kappa || chi < 0 || chi > bounds_.max_chi)
        throw std::out_of_range("IntegralTable: index out of bounds");
    size_t idx = static_cast<size_t>(a);
    idx = idx * (bounds_.max_ell + 1) + static_cast<size_t>(ell);
    idx = idx * (bounds_.max_kappa + 1) + static_cast<size_t>(kappa);
    idx = idx * (bounds_.max_chi + 1) + static_cast<size_t>(chi);
    return idx;
}

IntegralTable IntegralTable::build(IntegralEngine& engine, const IndexBounds& bounds) {
    if (bounds.max_a < 0 || bounds.max_ell < 0 || bounds.max_kappa < 0 || bounds.max_chi < 0)
        throw std::invalid_argument("IntegralTable: negative bounds");
    IntegralTable t;
    t.bounds_ = bounds;
    t.frame_ = engine.frame();
    t.precision_bits_ = current_precision_bits();
    t.values_.reserve(static_cast<size_t>(bounds.max_a + 1) * (bounds.max_ell + 1) *
                      (bounds.max_kappa + 1) * (bounds.max_chi + 1));
    for (int a = 0; a <= bounds.max_a; ++a)
        for (int ell = 0; ell <= bounds.max_ell; ++ell)
            for (int kappa = 0; kappa <= bounds.max_kappa; ++kappa)
                for (int chi = 0; chi <= bounds.max_chi; ++chi)
                    t.values_.push_back(engine.integral_I(a, ell, kappa, chi));
    return t;
}

const Real& IntegralTable::at(int a, int ell, int kappa, int chi) const {
    return values_[index(a, ell, kappa, chi)];
}

Real IntegralTable::max_abs() const {
    Real m = 0;
    for (const Real& v : values_)
        if (abs(v) > m) m = abs(v);
    return m;
}

std::uint64_t table_cache_key(const DecoupledFrame& frame, unsigned precision_bits,
                              const IndexBounds& bounds) {
    std::ostringstream os;
    os << "itbl-v1|" << frame.key_material() << '|' << precision_bits << '|' << bounds.max_a << ','
       << bounds.max_ell << ',' << bounds.max_kappa << ',' << bounds.max_chi;
    return fnv1a(os.str());
}

std::uint64_t IntegralTable::cache_key() const {
    return table_cache_key(frame_, precision_bits_, bounds_);
}

bool IntegralTable::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) return false;
    out << "QHO-ITBL 1\n";
    out << "key " << cache_key() << '\n';
    out << "bounds " << bounds_.max_a << ' ' << bounds_.max_ell << ' ' << bounds_.max_kappa << ' '
        << bounds_.max_chi << '\n';
    out << "prec " << precision_bits_ << '\n';
    out << "frame " << frame_.key_material() << '\n';
    out << "count " << values_.size() << '\n';
    for (const Real& v : values_) out << real_to_hex(v) << '\n';
    return static_cast<bool>(out);
}

std::optional<IntegralTable> IntegralTable::load(const std::string& path,
                                                 std::uint64_t expected_key) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "QHO-ITBL" || version != 1) return std::nullopt;
    std::string tag;
    std::uint64_t key = 0;
    IntegralTable t;
    size_t count = 0;
    std::string frame_material;
    if (!(in >> tag >> key) || tag != "key") return std::nullopt;
    if (!(in >> tag >> t.bounds_.max_a >> t.bounds_.max_ell >> t.bounds_.max_kappa >>
          t.bounds_.max_chi) ||
        tag != "bounds")
        return std::nullopt;
    if (!(in >> tag >> t.precision_bits_) || tag != "prec") return std::nullopt;
    if (!(in >> tag >> frame_material) || tag != "frame") return std::nullopt;
    if (!(in >> tag >> count) || tag != "count") return std::nullopt;
    if (key != expected_key) return std::nullopt;
    if (t.precision_bits_ != current_precision_bits()) return std::nullopt;
    const size_t expect = static_cast<size_t>(t.bounds_.max_a + 1) * (t.bounds_.max_ell + 1) *
                          (t.bounds_.max_kappa + 1) * (t.bounds_.max_chi + 1);
    if (count != expect) return std::nullopt;
    t.values_.reserve(count);
    std::string word;
    for (size_t i = 0; i < count; ++i) {
        if (!(in >> word)) return std::nullopt;
        try {
            t.values_.push_back(real_from_hex(word));
        } catch (const std::invalid_argument&) {
            return std::nullopt;
        }
    }
    // Frame fields are reconstructed from the key material so at() consumers
    // see the exact frame the table was built for.
    std::vector<std::string> parts;
    std::string cur;
    for (char c : frame_material) {
        if (c == '|') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (parts.size() != 8) return std::nullopt;
    try {
        t.frame_.omega_x = real_from_hex(parts[0]);
        t.frame_.omega_y = real_from_hex(parts[1]);
        t.frame_.omega_u = real_from_hex(parts[2]);
        t.frame_.omega_v = real_from_hex(parts[3]);
        t.frame_.u1 = real_from_hex(parts[4]);
        t.frame_.u2 = real_from_hex(parts[5]);
        t.frame_.v1 = real_from_hex(parts[6]);
        t.frame_.v2 = real_from_hex(parts[7]);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
    if (t.cache_key() != expected_key) return std::nullopt;
    return t;
}

}  // namespace qho
