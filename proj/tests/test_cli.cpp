#include "qho/cli.hpp"

#include "test_util.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

using namespace qho;
using testutil::check_close;

TEST_SUITE_BEGIN("cli");

TEST_CASE("empty document yields the case-study defaults") {
    const RunConfig cfg = parse_config("");
    CHECK(cfg.m_x == parse_real("1e-6"));
    CHECK(cfg.m_y == parse_real("2e-6"));
    CHECK(cfg.omega_x_bare == parse_real("1e6"));
    CHECK(cfg.omega_y_bare == parse_real("1e7"));
    CHECK(cfg.k == 1000);
    CHECK(cfg.r == 0);
    CHECK(cfg.D == 3);
    CHECK(cfg.L == 2);
    CHECK(cfg.N == 6);
    CHECK(cfg.N_prime == 15);
    CHECK(cfg.t_start == 0);
    CHECK(cfg.t_end == parse_real("5e-6"));
    CHECK(cfg.steps == 200);
    CHECK(cfg.precision_bits == 256);
    CHECK(cfg.output == "csv");
}

TEST_CASE("numerals parse at full precision") {
    CHECK(parse_config("k = 1e3").k == 1000);
    // A 40-digit literal survives without double rounding.
    const std::string digits = "1.2345678901234567890123456789012345678901e-6";
    const RunConfig cfg = parse_config("m_x = " + digits);
    CHECK(cfg.m_x == parse_real(digits));
    CHECK(cfg.m_x != Real(1.2345678901234567e-6));
}

TEST_CASE("parse and validation failures") {
    CHECK_THROWS_AS(parse_config("bogus = 1"), ParseError);
    CHECK_THROWS_AS(parse_config("k"), ParseError);
    CHECK_THROWS_AS(parse_config("r = 1.0"), ValidationError);
    CHECK_THROWS_AS(parse_config("steps = 0"), ValidationError);
    CHECK_THROWS_AS(parse_config("output = png"), ValidationError);
    CHECK_THROWS_AS(parse_config("r = 0.1\ntemperature_K = 300"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_config("# ok\nbogus = 1"), doctest::Contains("line 2"),
                         ParseError);
}

TEST_CASE("comments, blanks and duplicate keys (last wins)") {
    const RunConfig cfg = parse_config("# comment\n\nk = 5\nk = 7\n");
    CHECK(cfg.k == 7);
}

TEST_CASE("temperature resolves the bath parameter") {
    // ~30 microkelvin: hbar omega_y / (kB T) ~ 2.5, a tractable bath.
    RunConfig cfg = parse_config("temperature_K = 3e-5\nN_prime = -1");
    CHECK(cfg.r_from_temperature);
    const Pipeline pl = build_pipeline(cfg);
    const Real expected =
        exp(-planck_hbar() * pl.frame.omega_y / (boltzmann_kB() * parse_real("3e-5")));
    CHECK(pl.r == expected);
    CHECK(pl.r > 0);
    CHECK(pl.r < parse_real("0.1"));
    // A hot bath (r -> 1) needs an intractable resummation and is rejected.
    CHECK_THROWS_AS(build_pipeline(parse_config("temperature_K = 300")), ValidationError);
}

TEST_CASE("derive report reproduces the reference frame lines") {
    const std::string report = derive_report(parse_config(""));
    CHECK(report.find("omega_x = 1000499.8750624610") != std::string::npos);
    CHECK(report.find("omega_y = 10000024.9999687501") != std::string::npos);
    CHECK(report.find("omega_u = 1000499.8725384574") != std::string::npos);
    CHECK(report.find("omega_v = 10000025.0002212760") != std::string::npos);
    CHECK(report.find("u1 = 1.4142135606") != std::string::npos);
    CHECK(report.find("v2 = 0.7071067812") != std::string::npos);
}

TEST_CASE("bounds report carries the refined budget") {
    const std::string report = bounds_report(parse_config("N_prime = 15"));
    CHECK(report.find("remark3_bound = 8.368914690412633731797531e-04") != std::string::npos);
    CHECK(report.find("theorem1_bound = 2.809957938266609669129757e-01") != std::string::npos);
}

TEST_CASE("sweep is deterministic and cache-transparent") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qho-cli-test-cache";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string base =
        "steps = 6\nN_prime = -1\ncache_dir = " + dir.string() + "\n";
    const SweepOutput cold = run_sweep(parse_config(base));
    CHECK(fs::directory_iterator(dir) != fs::directory_iterator());  // cache written
    const SweepOutput warm = run_sweep(parse_config(base));
    CHECK(cold.csv == warm.csv);
    const SweepOutput nocache = run_sweep(parse_config("steps = 6\nN_prime = -1\n"));
    CHECK(cold.csv == nocache.csv);
    fs::remove_all(dir);
}

TEST_CASE("sweep CSV shape") {
    const SweepOutput out = run_sweep(parse_config("steps = 4\nN_prime = -1\n"));
    REQUIRE(!out.csv.empty());
    const std::string header = out.csv.substr(0, out.csv.find("\r\n"));
    CHECK(header.rfind("t,", 0) == 0);
    CHECK(header.find("absA_0_0_2_2") != std::string::npos);
    CHECK(header.find("lambda_1") != std::string::npos);
    CHECK(header.find("leakage_lb") != std::string::npos);
    CHECK(header.find("f_BK_lb") != std::string::npos);
    // Header + 5 data rows (t_start..t_end inclusive).
    size_t rows = 0;
    for (size_t pos = 0; (pos = out.csv.find("\r\n", pos)) != std::string::npos; pos += 2) ++rows;
    CHECK(rows == 6);
    CHECK(out.svg_amplitudes.empty());  // output = csv
}

TEST_CASE("uncoupled sweep is lossless") {
    const SweepOutput out =
        run_sweep(parse_config("k = 0\nm_y = 1e-6\nN_prime = -1\nsteps = 4\n"));
    // leakage_lb column identically 0, f_BK column identically 1.
    std::istringstream in(out.csv);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.size() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const size_t last = line.rfind(',');
        const std::string f_bk = line.substr(last + 1);
        CHECK(parse_real(f_bk) == 1);
        std::string rest = line.substr(0, last);  // drop f_I_lb and f_I_exact
        for (int i = 0; i < 2; ++i) rest = rest.substr(0, rest.rfind(','));
        const size_t cut = rest.rfind(',');
        CHECK(parse_real(rest.substr(cut + 1)) == 0);  // leakage_lb
    }
}

TEST_CASE("SVG output renders one polyline per series") {
    const std::string svg = svg_line_chart("demo", {"s1", "s2"}, {0.0, 1.0, 2.0},
                                           {{0.0, 1.0, 0.5}, {1.0, 0.0, 0.25}});
    CHECK(svg.rfind("<svg", 0) == 0);
    size_t count = 0;
    for (size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++count;
    CHECK(count == 2);
    CHECK(svg.find("s1") != std::string::npos);
    CHECK(svg.find("s2") != std::string::npos);
    const SweepOutput out = run_sweep(parse_config("steps = 3\nN_prime = -1\noutput = csv+svg\n"));
    CHECK(out.svg_amplitudes.rfind("<svg", 0) == 0);
    CHECK(out.svg_fidelity.rfind("<svg", 0) == 0);
}

TEST_CASE("amplitudes subcommand output") {
    const AmplitudesOutput out = run_amplitudes(parse_config("N_prime = -1\n"), parse_real("1e-6"));
    CHECK(out.csv.rfind("a,b,a_p,b_p,re,im\r\n", 0) == 0);
    CHECK(out.epsilon > 0);
    CHECK(out.epsilon < 1);
}

TEST_SUITE_END();
