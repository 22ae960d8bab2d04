#include "qho/cli.hpp"
#include "qho/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qho::ValidationError("cannot open config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

qho::RunConfig load_config(const std::string& config_path,
                           const std::vector<std::string>& overrides) {
    std::string text = config_path.empty() ? std::string() : slurp(config_path);
    for (const std::string& kv : overrides) text += "\n" + kv;
    return qho::parse_config(text);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw qho::ValidationError("cannot write '" + path + "'");
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled-oscillator truncated-channel calculator"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("-c,--config", config_path, "key=value config file");
    app.add_option("-s,--set", overrides, "override a config key (key=value), repeatable");

    auto* derive = app.add_subcommand("derive", "print the decoupled-frame parameters");
    auto* amplitudes = app.add_subcommand("amplitudes", "amplitude tensor at one time, CSV");
    std::string t_text = "0";
    amplitudes->add_option("-t,--time", t_text, "evaluation time in seconds")->required();
    std::string amp_out;
    amplitudes->add_option("-o,--out", amp_out, "output CSV path (default: stdout)");
    auto* sweep = app.add_subcommand("sweep", "time sweep: amplitudes, spectrum, bounds");
    std::string sweep_out;
    sweep->add_option("-o,--out", sweep_out, "output base path (writes <base>.csv [+ SVGs])");
    auto* bounds = app.add_subcommand("bounds", "print bound constants and error budgets");
    auto* verify = app.add_subcommand("verify", "run the invariant suite, JSON summary");

    CLI11_PARSE(app, argc, argv);

    try {
        const qho::RunConfig config = load_config(config_path, overrides);
        if (derive->parsed()) {
            std::cout << qho::derive_report(config);
        } else if (amplitudes->parsed()) {
            const qho::AmplitudesOutput out = qho::run_amplitudes(config, qho::parse_real(t_text));
            if (amp_out.empty())
                std::cout << out.csv;
            else
                write_file(amp_out, out.csv);
            std::cerr << "epsilon_refined = " << out.epsilon << "\n";
        } else if (sweep->parsed()) {
            const qho::SweepOutput out = qho::run_sweep(config);
            if (sweep_out.empty()) {
                if (config.output != "csv")
                    throw qho::ValidationError("output=csv+svg requires --out");
                std::cout << out.csv;
            } else {
                write_file(sweep_out + ".csv", out.csv);
                if (!out.svg_amplitudes.empty()) {
                    write_file(sweep_out + "_amplitudes.svg", out.svg_amplitudes);
                    write_file(sweep_out + "_fidelity.svg", out.svg_fidelity);
                }
            }
        } else if (bounds->parsed()) {
            std::cout << qho::bounds_report(config);
        } else if (verify->parsed()) {
            const qho::VerifyReport report = qho::run_verify(config);
            std::cout << report.json;
            return report.passed ? 0 : 3;
        }
    } catch (const qho::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const qho::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
