#include "qho/cli.hpp"

#include "qho/errors.hpp"
#include "qho/hermite.hpp"
#include "qho/quad.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

namespace qho {

namespace {

// Renders with full round-trip precision in scientific form (reports only).
std::string sci(const Real& x) {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.24Re", x.backend().data());
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

std::string trim(std::string s) {
    const char* ws = " \t";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

long long parse_int_strict(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer");
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

RunConfig make_defaults() {
    RunConfig c;
    c.m_x = parse_real("1e-6");
    c.m_y = parse_real("2e-6");
    c.omega_x_bare = parse_real("1e6");
    c.omega_y_bare = parse_real("1e7");
    c.k = parse_real("1000");
    c.r = 0;
    c.temperature_K = 0;
    c.t_start = 0;
    c.t_end = parse_real("5e-6");
    return c;
}

const char* const kKeys[] = {"m_x",     "m_y",   "omega_x_bare", "omega_y_bare",  "k",
                             "r",       "temperature_K", "D",    "L",             "N",
                             "N_prime", "t_start", "t_end",      "steps",         "precision_bits",
                             "cache_dir", "output"};

bool known_key(const std::string& k) {
    for (const char* key : kKeys)
        if (k == key) return true;
    return false;
}

}  // namespace

OscillatorParams RunConfig::params() const {
    OscillatorParams p;
    p.m_x = m_x;
    p.m_y = m_y;
    p.omega_x_bare = omega_x_bare;
    p.omega_y_bare = omega_y_bare;
    p.k = k;
    p.r = r_from_temperature ? Real(0) : r;
    p.precision_bits = precision_bits;
    return p;
}

TruncationSpec RunConfig::truncation() const {
    TruncationSpec s;
    s.D = D;
    s.L = L;
    s.N = N;
    s.N_prime = N_prime;
    return s;
}

void RunConfig::validate() const {
    if (!(m_x > 0)) throw ValidationError("m_x must be positive");
    if (!(m_y > 0)) throw ValidationError("m_y must be positive");
    if (!(omega_x_bare > 0)) throw ValidationError("omega_x_bare must be positive");
    if (!(omega_y_bare > 0)) throw ValidationError("omega_y_bare must be positive");
    if (k < 0) throw ValidationError("k must be nonnegative");
    if (r_from_temperature) {
        if (temperature_K < 0) throw ValidationError("temperature_K must be nonnegative");
    } else if (r < 0 || !(r < 1)) {
        throw ValidationError("r must be in [0, 1)");
    }
    if (D < 0) throw ValidationError("D must be nonnegative");
    if (L < 0) throw ValidationError("L must be nonnegative");
    if (N < 1) throw ValidationError("N must be at least 1");
    if (N_prime >= 0 && N_prime <= N) throw ValidationError("N_prime must exceed N");
    if (t_start < 0) throw ValidationError("t_start must be nonnegative");
    if (t_start > t_end) throw ValidationError("t_start must not exceed t_end");
    if (steps < 1) throw ValidationError("steps must be at least 1");
    if (precision_bits < 16) throw ValidationError("precision_bits must be at least 16");
    if (output != "csv" && output != "csv+svg")
        throw ValidationError("output must be 'csv' or 'csv+svg'");
}

RunConfig default_config() {
    set_precision_bits(256);
    return make_defaults();
}

RunConfig parse_config(const std::string& text) {
    struct Pair {
        int line;
        std::string key, value;
    };
    std::vector<Pair> pairs;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_key(key))
            throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (value.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
        // Later occurrences win so command-line overrides can be appended.
        std::erase_if(pairs, [&](const Pair& p) { return p.key == key; });
        pairs.push_back({lineno, key, value});
    }

    // Precision first: every numeral must be parsed at the target precision.
    unsigned precision = 256;
    for (const Pair& p : pairs)
        if (p.key == "precision_bits") {
            long long v;
            try {
                v = parse_int_strict(p.value);
            } catch (const std::invalid_argument&) {
                throw ParseError("line " + std::to_string(p.line) + ": bad integer for '" +
                                 p.key + "'");
            }
            if (v < 1 || v > 1 << 20)
                throw ValidationError("precision_bits must be a small positive integer");
            precision = static_cast<unsigned>(v);
        }
    set_precision_bits(precision);

    RunConfig cfg = make_defaults();
    cfg.precision_bits = precision;
    bool saw_r = false, saw_temp = false;
    for (const Pair& p : pairs) {
        try {
            if (p.key == "m_x") cfg.m_x = parse_real(p.value);
            else if (p.key == "m_y") cfg.m_y = parse_real(p.value);
            else if (p.key == "omega_x_bare") cfg.omega_x_bare = parse_real(p.value);
            else if (p.key == "omega_y_bare") cfg.omega_y_bare = parse_real(p.value);
            else if (p.key == "k") cfg.k = parse_real(p.value);
            else if (p.key == "r") { cfg.r = parse_real(p.value); saw_r = true; }
            else if (p.key == "temperature_K") {
                cfg.temperature_K = parse_real(p.value);
                cfg.r_from_temperature = true;
                saw_temp = true;
            } else if (p.key == "D") cfg.D = static_cast<int>(parse_int_strict(p.value));
            else if (p.key == "L") cfg.L = static_cast<int>(parse_int_strict(p.value));
            else if (p.key == "N") cfg.N = static_cast<int>(parse_int_strict(p.value));
            else if (p.key == "N_prime") cfg.N_prime = static_cast<int>(parse_int_strict(p.value));
            else if (p.key == "t_start") cfg.t_start = parse_real(p.value);
            else if (p.key == "t_end") cfg.t_end = parse_real(p.value);
            else if (p.key == "steps") cfg.steps = static_cast<int>(parse_int_strict(p.value));
            else if (p.key == "precision_bits") { /* handled above */ }
            else if (p.key == "cache_dir") cfg.cache_dir = p.value;
            else if (p.key == "output") cfg.output = p.value;
        } catch (const std::invalid_argument&) {
            throw ParseError("line " + std::to_string(p.line) + ": bad value for '" + p.key +
                             "'");
        }
    }
    if (saw_r && saw_temp)
        throw ValidationError("r and temperature_K are mutually exclusive");
    cfg.validate();
    return cfg;
}

Pipeline build_pipeline(const RunConfig& config) {
    config.validate();
    set_precision_bits(config.precision_bits);

    Pipeline pl;
    pl.config = config;
    pl.frame = derive_frame(config.params());
    pl.r = config.r_from_temperature
               ? bath_r_from_temperature(pl.frame.omega_y, config.temperature_K)
               : config.r;
    pl.norms = NormTable::build(std::max(config.D, config.L));
    pl.consts = compute_constants(pl.frame, pl.norms, config.D, config.L,
                                  /*allow_decoupled=*/true);

    const Real tail_tol = pow2(-static_cast<int>(config.precision_bits) / 2);
    const int np = config.N_prime >= 0 ? config.N_prime : config.N;
    const int cutoff = pl.r > 0 ? mehler_series_cutoff(pl.frame, pl.r, tail_tol, 0) : 0;
    // The bath resummation truncates a geometric series in r; r near 1 (hot
    // bath) pushes the certified cutoff beyond any tractable integral table.
    if (cutoff > 20000)
        throw ValidationError("bath parameter r too close to 1: resummation needs " +
                              std::to_string(cutoff) + " terms");
    const IndexBounds bounds{config.D, std::max(config.L, cutoff), np, np};

    const std::uint64_t key = table_cache_key(pl.frame, config.precision_bits, bounds);
    std::string cache_path;
    if (!config.cache_dir.empty()) {
        std::filesystem::create_directories(config.cache_dir);
        char name[32];
        std::snprintf(name, sizeof name, "qho-%016llx.itbl",
                      static_cast<unsigned long long>(key));
        cache_path = (std::filesystem::path(config.cache_dir) / name).string();
        if (std::filesystem::exists(cache_path)) {
            if (auto t = IntegralTable::load(cache_path, key)) {
                pl.table = std::move(*t);
                pl.table_from_cache = true;
            }
        }
    }
    if (!pl.table_from_cache) {
        IntegralEngine engine(pl.frame);
        pl.table = IntegralTable::build(engine, bounds);
        if (!cache_path.empty()) pl.table.save(cache_path);
    }

    // Identity coordinate map with a ground bath: every dropped term carries a
    // vanishing overlap (I = delta * delta), so the truncation is exact.
    const bool exact_limit = pl.frame.u1 == 1 && pl.frame.u2 == 0 && pl.frame.v1 == 0 &&
                             pl.frame.v2 == 1 && pl.r == 0;
    pl.epsilon = exact_limit ? Real(0)
                             : theorem1_bound(pl.consts, config.N, config.L, pl.r, pl.frame);
    pl.epsilon_refined =
        !exact_limit && config.N_prime >= 0
            ? remark3_bound(pl.consts, config.N, np, pl.table, config.truncation(), pl.r, pl.frame)
            : pl.epsilon;
    pl.sums = GroupedSums::build(config.truncation(), pl.table, pl.r, tail_tol);
    return pl;
}

std::string derive_report(const RunConfig& config) {
    config.validate();
    set_precision_bits(config.precision_bits);
    const DecoupledFrame f = derive_frame(config.params());
    std::ostringstream os;
    const auto line = [&](const char* name, const Real& v) {
        os << name << " = " << real_to_fixed(v, 10) << "\n";
    };
    line("omega_x", f.omega_x);
    line("omega_y", f.omega_y);
    line("theta", f.theta);
    line("cos_theta", f.cos_theta);
    line("sin_theta", f.sin_theta);
    line("omega_u", f.omega_u);
    line("omega_v", f.omega_v);
    line("u1", f.u1);
    line("u2", f.u2);
    line("v1", f.v1);
    line("v2", f.v2);
    line("m", f.m);
    line("mu", f.mu);
    return os.str();
}

AmplitudesOutput run_amplitudes(const RunConfig& config, const Real& t) {
    const Pipeline pl = build_pipeline(config);
    const AmplitudeTensor amps = amplitudes_at(t, pl.sums);
    return {amps.to_csv(config.precision_bits), pl.epsilon_refined};
}

SweepOutput run_sweep(const RunConfig& config) {
    const Pipeline pl = build_pipeline(config);
    const int digits = csv_digits(config.precision_bits);

    // Non-negligible tensor entries: parity-allowed transitions out of the
    // qubit levels, a' in {a, a+2}, b' in {b, b+2}.
    struct Entry {
        int a, b, ap, bp;
    };
    std::vector<Entry> entries;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int da = 0; da < 2; ++da)
                for (int db = 0; db < 2; ++db) entries.push_back({a, b, a + 2 * da, b + 2 * db});

    std::ostringstream csv;
    csv << "t";
    for (const Entry& e : entries)
        csv << ",absA_" << e.a << '_' << e.b << '_' << e.ap << '_' << e.bp;
    csv << ",lambda_1,lambda_2,lambda_3,lambda_4,leakage_lb,f_I_exact,f_I_lb,f_BK_lb\r\n";

    const bool want_svg = config.output == "csv+svg";
    std::vector<double> times;
    std::vector<std::vector<double>> amp_series(entries.size());
    std::vector<std::vector<double>> fid_series(3);

    const Real span = pl.config.t_end - pl.config.t_start;
    for (int i = 0; i <= config.steps; ++i) {
        const Real t = pl.config.t_start + span * i / config.steps;
        const AmplitudeTensor amps = amplitudes_at(t, pl.sums);
        const ChannelSummary row = summarize_channel(amps, pl.epsilon_refined);
        csv << real_to_fixed(t, digits);
        for (size_t e = 0; e < entries.size(); ++e) {
            const Real mag = amps.at(entries[e].a, entries[e].b, entries[e].ap, entries[e].bp).abs();
            csv << ',' << real_to_fixed(mag, digits);
            if (want_svg) amp_series[e].push_back(static_cast<double>(mag));
        }
        for (int j = 0; j < 4; ++j) csv << ',' << real_to_fixed(row.lambda[j], digits);
        csv << ',' << real_to_fixed(row.leakage_lb, digits) << ','
            << real_to_fixed(row.f_i_exact, digits) << ',' << real_to_fixed(row.f_i_lb, digits)
            << ',' << real_to_fixed(row.f_bk_lb, digits) << "\r\n";
        if (want_svg) {
            times.push_back(static_cast<double>(t));
            fid_series[0].push_back(static_cast<double>(row.leakage_lb));
            fid_series[1].push_back(static_cast<double>(row.f_i_lb));
            fid_series[2].push_back(static_cast<double>(row.f_bk_lb));
        }
    }

    SweepOutput out;
    out.csv = csv.str();
    if (want_svg) {
        std::vector<std::string> amp_names;
        for (const Entry& e : entries) {
            std::ostringstream n;
            n << "|A " << e.a << e.b << "->" << e.ap << e.bp << "|";
            amp_names.push_back(n.str());
        }
        out.svg_amplitudes =
            svg_line_chart("truncated transition amplitudes", amp_names, times, amp_series);
        out.svg_fidelity = svg_line_chart("leakage and fidelity bounds",
                                          {"leakage_lb", "f_I_lb", "f_BK_lb"}, times, fid_series);
    }
    return out;
}

std::string bounds_report(const RunConfig& config) {
    const Pipeline pl = build_pipeline(config);
    std::ostringstream os;
    const auto line = [&](const char* name, const Real& v) { os << name << " = " << sci(v) << "\n"; };
    line("c1", pl.consts.c1);
    line("c2", pl.consts.c2);
    if (pl.consts.exponential_zero)
        os << "C = inf (uncoupled frame; exponential terms identically zero)\n";
    else
        line("C", pl.consts.C);
    line("n_D", pl.consts.n_D);
    line("n_L", pl.consts.n_L);
    line("A", pl.consts.A);
    line("A_tilde", pl.consts.A_tilde);
    line("B", pl.consts.B);
    line("B_tilde", pl.consts.B_tilde);
    line("theorem1_bound", pl.epsilon);
    line("remark1_dominant", remark1_dominant(pl.consts, config.N, config.L, pl.r, pl.frame));
    line("remark1_cap", remark1_cap(pl.consts, config.N, config.L, pl.r, pl.frame));
    if (config.N_prime >= 0) line("remark3_bound", pl.epsilon_refined);
    return os.str();
}

VerifyReport run_verify(const RunConfig& config) {
    nlohmann::json checks = nlohmann::json::array();
    const auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        checks.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
    };

    const Pipeline pl = build_pipeline(config);
    const Real half_tol = pow2(-static_cast<int>(config.precision_bits) / 2);

    {  // Orthonormality of psi_n under the Gauss-Hermite rule.
        const QuadRule rule = gauss_hermite(48);
        Real worst = 0;
        for (int i = 0; i <= 8; ++i)
            for (int j = i; j <= 8; ++j) {
                Real acc = 0;
                for (size_t q = 0; q < rule.nodes.size(); ++q) {
                    const Real& x = rule.nodes[q];
                    acc += rule.weights[q] * exp(x * x) * eval_psi(i, x) * eval_psi(j, x);
                }
                const Real dev = abs(acc - (i == j ? 1 : 0));
                if (dev > worst) worst = dev;
            }
        add("psi_orthonormality", worst < parse_real("1e-40"), "max deviation " + sci(worst));
    }
    {  // Mehler kernel vs its defining series.
        const Real x = parse_real("0.3"), y = parse_real("-0.7");
        const Complex z{parse_real("0.5"), Real(0)};
        Complex partial{};
        Real zp = 1;
        for (int l = 0; l <= 140; ++l, zp *= z.re) partial += Complex{zp * eval_psi(l, x) * eval_psi(l, y), Real(0)};
        const Real dev = (partial - mehler_kernel(z, x, y)).abs();
        add("mehler_convergence", dev < parse_real("1e-30"), "series deviation " + sci(dev));
    }
    {  // Hermite-function bound lemmas on uniform grids.
        bool ok = true;
        for (int n = 1; n <= 20 && ok; ++n) {
            const Real edge = sqrt(Real(n));
            std::vector<Real> osc(2001), outer, full(2001);
            for (int i = 0; i <= 2000; ++i) {
                osc[i] = edge * (2 * Real(i) / 2000 - 1);
                full[i] = 4 * edge * (2 * Real(i) / 2000 - 1);
                // Monotonic-region bound only claims |x| > 1.
                const Real xo = 1 + (4 * edge - 1) * (Real(i) + 1) / 2001;
                outer.push_back(xo);
                outer.push_back(-xo);
            }
            ok = check_lemma1(n, osc) && check_lemma2(n, outer) && check_charlier_cramer(n, full);
        }
        add("hermite_bound_lemmas", ok, "n <= 20, 2001-point grids");
    }
    {  // Exact I contraction vs quadrature oracle.
        IntegralEngine engine(pl.frame);
        std::mt19937_64 rng(42);
        std::uniform_int_distribution<int> da(0, 3), dl(0, 4), dk(0, 10);
        Real worst = 0;
        for (int s = 0; s < 5; ++s) {
            const int a = da(rng), l = dl(rng), kk = dk(rng), x = dk(rng);
            const Real dev = abs(engine.integral_I(a, l, kk, x) - engine.integral_I_direct(a, l, kk, x));
            if (dev > worst) worst = dev;
        }
        add("oracle_I", worst < parse_real("1e-20"), "max deviation " + sci(worst));
        std::uniform_int_distribution<int> dj(0, 5);
        bool ok = true;
        Real jworst = 0;
        for (const char* rs : {"0", "0.3"}) {
            const Real r = parse_real(rs);
            for (int s = 0; s < 3; ++s) {
                const int b = da(rng) % 2, a = da(rng) % 2;
                const int kk = dj(rng), x = dj(rng), kp = dj(rng), xp = dj(rng);
                const auto jr = engine.integral_J(b, a, kk, x, kp, xp, r, parse_real("1e-30"));
                const Real dev = abs(jr.value - engine.integral_J_direct(b, a, kk, x, kp, xp, r));
                const Real tol = std::max(parse_real("1e-18"), jr.tail_bound);
                if (!(dev <= tol)) ok = false;
                if (dev > jworst) jworst = dev;
            }
        }
        add("oracle_J", ok, "max deviation " + sci(jworst));
    }
    {  // Parity zeros and Hermitian symmetry of the tensor.
        Real parity_worst = 0, herm_worst = 0;
        for (const char* ts : {"1.3e-6", "2.9e-6"}) {
            const AmplitudeTensor amps = amplitudes_at(parse_real(ts), pl.sums);
            for (int a = 0; a <= config.D; ++a)
                for (int b = 0; b <= config.D; ++b)
                    for (int c = 0; c <= config.D; ++c)
                        for (int d = 0; d <= config.D; ++d) {
                            if ((a + b + c + d) % 2 == 1) {
                                const Real m = amps.at(a, b, c, d).abs();
                                if (m > parity_worst) parity_worst = m;
                            }
                            const Real dev =
                                (amps.at(a, b, c, d) - amps.at(b, a, d, c).conj()).abs();
                            if (dev > herm_worst) herm_worst = dev;
                        }
        }
        add("parity_zeros", parity_worst == 0, "max parity-violating magnitude " + sci(parity_worst));
        add("hermitian_symmetry", herm_worst <= half_tol, "max asymmetry " + sci(herm_worst));
    }
    {  // Trace non-increase for the maximally mixed qubit input.
        Mat2 rho{};
        rho[0][0] = Complex{Real(1) / 2, Real(0)};
        rho[1][1] = rho[0][0];
        const Real cap = 1 + (config.D + 1) * pl.epsilon_refined;
        bool ok = true;
        Real worst = 0;
        for (int i = 0; i <= 4; ++i) {
            const Real t = pl.config.t_start + (pl.config.t_end - pl.config.t_start) * i / 4;
            const Mat4 out = apply_truncated_channel(amplitudes_at(t, pl.sums), rho);
            Real tr = 0;
            for (int j = 0; j < 4; ++j) tr += out[j][j].re;
            if (tr > worst) worst = tr;
            if (!(tr <= cap)) ok = false;
        }
        add("trace_non_increase", ok, "max trace " + sci(worst));
    }

    int failed = 0;
    for (const auto& c : checks)
        if (!c["pass"].get<bool>()) ++failed;
    nlohmann::json summary = {{"checks", checks},
                              {"passed", static_cast<int>(checks.size()) - failed},
                              {"failed", failed},
                              {"ok", failed == 0}};
    return {summary.dump(2) + "\n", failed == 0};
}

std::string svg_line_chart(const std::string& title, const std::vector<std::string>& names,
                           const std::vector<double>& x,
                           const std::vector<std::vector<double>>& series) {
    static const char* const palette[] = {
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
        "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
        "#8c6d31", "#843c39", "#7b4173", "#3182bd", "#e6550d", "#31a354"};
    constexpr int W = 960, H = 540, ML = 70, MR = 190, MT = 40, MB = 50;
    const double pw = W - ML - MR, ph = H - MT - MB;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (!x.empty()) {
        xmin = *std::min_element(x.begin(), x.end());
        xmax = *std::max_element(x.begin(), x.end());
        ymin = 1e300;
        ymax = -1e300;
        for (const auto& s : series)
            for (double v : s) {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
    }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    const auto px = [&](double v) { return ML + (v - xmin) / (xmax - xmin) * pw; };
    const auto py = [&](double v) { return MT + ph - (v - ymin) / (ymax - ymin) * ph; };
    const auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << ' ' << H
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << ML << "\" y=\"24\" font-size=\"16\">" << title << "</text>\n";
    os << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << num(pw) << "\" height=\""
       << num(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 5; ++i) {  // axis ticks
        const double xv = xmin + (xmax - xmin) * i / 5, yv = ymin + (ymax - ymin) * i / 5;
        os << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << MT + ph << "\" x2=\"" << num(px(xv))
           << "\" y2=\"" << MT + ph + 5 << "\" stroke=\"#444\"/>"
           << "<text x=\"" << num(px(xv)) << "\" y=\"" << MT + ph + 20
           << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
        os << "<line x1=\"" << ML - 5 << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << ML
           << "\" y2=\"" << num(py(yv)) << "\" stroke=\"#444\"/>"
           << "<text x=\"" << ML - 8 << "\" y=\"" << num(py(yv) + 4)
           << "\" text-anchor=\"end\">" << num(yv) << "</text>\n";
    }
    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = palette[s % (sizeof palette / sizeof *palette)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < x.size() && i < series[s].size(); ++i)
            os << num(px(x[i])) << ',' << num(py(series[s][i])) << ' ';
        os << "\"/>\n";
        const int ly = MT + 14 + static_cast<int>(s) * 16;
        os << "<line x1=\"" << W - MR + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - MR + 34
           << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>"
           << "<text x=\"" << W - MR + 40 << "\" y=\"" << ly << "\">"
           << (s < names.size() ? names[s] : "") << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace qho
