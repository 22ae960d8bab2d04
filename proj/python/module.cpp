#include "qho/channel.hpp"
#include "qho/cli.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace qho;

namespace {

// One pipeline per distinct config text; rebuilt lazily.
Pipeline& pipeline_for(const std::string& config_text) {
    static std::map<std::string, Pipeline> cache;
    auto it = cache.find(config_text);
    if (it == cache.end())
        it = cache.emplace(config_text, build_pipeline(parse_config(config_text))).first;
    return it->second;
}

using PyTensor = std::vector<std::vector<std::vector<std::vector<std::complex<double>>>>>;

PyTensor tensor_at(const std::string& config_text, const std::string& t_text) {
    const Pipeline& pl = pipeline_for(config_text);
    const AmplitudeTensor amps = amplitudes_at(parse_real(t_text), pl.sums);
    const size_t n = static_cast<size_t>(amps.D) + 1;
    PyTensor out(
        n, std::vector<std::vector<std::vector<std::complex<double>>>>(
               n, std::vector<std::vector<std::complex<double>>>(
                      n, std::vector<std::complex<double>>(n))));
    const int d = amps.D;
    for (int a = 0; a <= d; ++a)
        for (int b = 0; b <= d; ++b)
            for (int ap = 0; ap <= d; ++ap)
                for (int bp = 0; bp <= d; ++bp) {
                    const Complex& v = amps.at(a, b, ap, bp);
                    out[a][b][ap][bp] = {v.re.convert_to<double>(), v.im.convert_to<double>()};
                }
    return out;
}

py::dict summary_at(const std::string& config_text, const std::string& t_text) {
    const Pipeline& pl = pipeline_for(config_text);
    const AmplitudeTensor amps = amplitudes_at(parse_real(t_text), pl.sums);
    const ChannelSummary row = summarize_channel(amps, pl.epsilon_refined);
    py::dict d;
    d["t"] = row.t.convert_to<double>();
    py::list lambdas;
    for (const Real& l : row.lambda) lambdas.append(l.convert_to<double>());
    d["lambda"] = lambdas;
    d["leakage_lb"] = row.leakage_lb.convert_to<double>();
    d["f_I_exact"] = row.f_i_exact.convert_to<double>();
    d["f_I_lb"] = row.f_i_lb.convert_to<double>();
    d["f_BK_lb"] = row.f_bk_lb.convert_to<double>();
    d["epsilon"] = pl.epsilon_refined.convert_to<double>();
    return d;
}

}  // namespace

PYBIND11_MODULE(_qho, m) {
    m.doc() = "coupled-oscillator truncated-channel calculator";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

    m.def("set_precision_bits", &set_precision_bits, py::arg("bits"),
          "Set the working precision for subsequent constructions.");
    m.def("derive", [](const std::string& cfg) { return derive_report(parse_config(cfg)); },
          py::arg("config") = "", "Decoupled-frame report for a key=value config document.");
    m.def("bounds", [](const std::string& cfg) { return bounds_report(parse_config(cfg)); },
          py::arg("config") = "", "Bound constants and error budgets.");
    m.def("amplitudes_csv",
          [](const std::string& cfg, const std::string& t) {
              return run_amplitudes(parse_config(cfg), parse_real(t)).csv;
          },
          py::arg("config"), py::arg("t"), "Amplitude tensor at one time as CSV text.");
    m.def("amplitudes", &tensor_at, py::arg("config"), py::arg("t"),
          "Amplitude tensor at one time as nested lists of complex (double precision view).");
    m.def("channel_summary", &summary_at, py::arg("config"), py::arg("t"),
          "Spectral data, leakage and fidelity bounds of the channel at one time.");
    m.def("sweep",
          [](const std::string& cfg) {
              const SweepOutput out = run_sweep(parse_config(cfg));
              py::dict d;
              d["csv"] = out.csv;
              d["svg_amplitudes"] = out.svg_amplitudes;
              d["svg_fidelity"] = out.svg_fidelity;
              return d;
          },
          py::arg("config") = "", "Time sweep: CSV table plus optional SVG charts.");
    m.def("verify",
          [](const std::string& cfg) {
              const VerifyReport rep = run_verify(parse_config(cfg));
              return py::make_tuple(rep.passed, rep.json);
          },
          py::arg("config") = "", "Invariant suite; returns (passed, json_summary).");
    m.def("eval_psi",
          [](int n, double x) { return eval_psi(n, Real(x)).convert_to<double>(); },
          py::arg("n"), py::arg("x"), "Hermite function psi_n(x) (double precision view).");
    m.def("one_norm", [](int n) { return one_norm(n).convert_to<double>(); }, py::arg("n"),
          "Integral of |psi_n| over the line (double precision view).");
}
