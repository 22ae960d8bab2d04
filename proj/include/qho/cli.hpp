#pragma once

#include "qho/amplitudes.hpp"
#include "qho/bounds.hpp"
#include "qho/channel.hpp"
#include "qho/gauss_integrals.hpp"
#include "qho/model.hpp"

#include <string>
#include <vector>

namespace qho {

// Full run description: physics inputs, truncation orders, time grid, output
// and caching knobs. Defaults are the case-study parameters.
struct RunConfig {
    Real m_x, m_y;
    Real omega_x_bare, omega_y_bare;
    Real k;
    Real r;
    bool r_from_temperature = false;
    Real temperature_K;
    int D = 3, L = 2, N = 6, N_prime = 15;  // N_prime = -1 disables refinement
    Real t_start, t_end;
    int steps = 200;
    unsigned precision_bits = 256;
    std::string cache_dir;   // empty = no integral-table cache
    std::string output = "csv";  // csv | csv+svg

    OscillatorParams params() const;
    TruncationSpec truncation() const;
    void validate() const;
};

// Case-study defaults at the current precision.
RunConfig default_config();

// Parses a key=value document ('#' comments). Sets the working precision from
// the config before parsing numerals so no value passes through a double.
// Throws ParseError (with line number) or ValidationError.
RunConfig parse_config(const std::string& text);

// Everything the subcommands share, built once per run.
struct Pipeline {
    RunConfig config;
    DecoupledFrame frame;
    Real r;  // resolved bath parameter (from temperature_K when requested)
    NormTable norms;
    BoundConstants consts;
    IntegralTable table;
    GroupedSums sums;
    Real epsilon;          // theorem bound at N
    Real epsilon_refined;  // refined bound at (N, N'), or epsilon
    bool table_from_cache = false;
};

Pipeline build_pipeline(const RunConfig& config);

// `derive`: frame fields at 10 decimal places, one per line.
std::string derive_report(const RunConfig& config);

struct AmplitudesOutput {
    std::string csv;
    Real epsilon;  // refined error budget reported alongside the tensor
};
AmplitudesOutput run_amplitudes(const RunConfig& config, const Real& t);

struct SweepOutput {
    std::string csv;
    std::string svg_amplitudes;  // empty unless output = csv+svg
    std::string svg_fidelity;
};
SweepOutput run_sweep(const RunConfig& config);

// `bounds`: constants and bound values, one `name = value` per line.
std::string bounds_report(const RunConfig& config);

struct VerifyReport {
    std::string json;
    bool passed = false;
};
VerifyReport run_verify(const RunConfig& config);

// Minimal hand-rolled SVG line chart (one polyline per series, legend from
// series names).
std::string svg_line_chart(const std::string& title, const std::vector<std::string>& names,
                           const std::vector<double>& x,
                           const std::vector<std::vector<double>>& series);

}  // namespace qho
