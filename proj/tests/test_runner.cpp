#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "heatctl/runner.hpp"

using namespace heatctl;
using R = mpreal;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig<R> small_cfg(const std::string& out) {
    set_working_precision(20);
    RunConfig<R> cfg = RunConfig<R>::paper_defaults();
    cfg.quad = QuadConfig<R>::defaults(20);
    cfg.basis.N = 3;
    cfg.basis.d = real_traits<R>::from_string("0.1");
    cfg.out_dir = out;
    return cfg;
}

}  // namespace

TEST_CASE("config round-trip is the identity", "[runner]") {
    set_working_precision(30);
    RunConfig<R> cfg = RunConfig<R>::paper_defaults();
    cfg.problem.L = real_traits<R>::from_string("1.0");
    cfg.problem.T = real_traits<R>::from_string("0.75");
    cfg.problem.datum = DatumSpec<R>::cosine({{1u, real_traits<R>::from_string("0.25")},
                                              {4u, real_traits<R>::from_string("-1.5e-2")}});
    cfg.basis.N = 6;
    cfg.basis.d = real_traits<R>::from_string("0.2");
    cfg.scheme = CollocationScheme<R>::graded(real_traits<R>::from_string("1.3"));
    cfg.quad.rel_tol = real_traits<R>::from_string("1e-22");
    cfg.out_dir = "some/dir";

    const auto again = parse_config<R>(serialize_config(cfg));
    REQUIRE(again.problem.L == cfg.problem.L);
    REQUIRE(again.problem.T == cfg.problem.T);
    REQUIRE(again.problem.datum.kind == cfg.problem.datum.kind);
    REQUIRE(again.problem.datum.cosine_coeffs.size() == 2);
    REQUIRE(again.problem.datum.cosine_coeffs[0].first == 1);
    REQUIRE(again.problem.datum.cosine_coeffs[0].second == cfg.problem.datum.cosine_coeffs[0].second);
    REQUIRE(again.problem.datum.cosine_coeffs[1].second == cfg.problem.datum.cosine_coeffs[1].second);
    REQUIRE(again.basis.N == cfg.basis.N);
    REQUIRE(again.basis.d == cfg.basis.d);
    REQUIRE(again.scheme.kind == cfg.scheme.kind);
    REQUIRE(again.scheme.exponent == cfg.scheme.exponent);
    REQUIRE(again.quad.precision_digits == cfg.quad.precision_digits);
    REQUIRE(again.quad.rel_tol == cfg.quad.rel_tol);
    REQUIRE(again.quad.abs_tol == cfg.quad.abs_tol);
    REQUIRE(again.out_dir == cfg.out_dir);

    // serialize(parse(serialize)) is byte-stable too
    REQUIRE(serialize_config(again) == serialize_config(cfg));
}

TEST_CASE("config parser rejects malformed input", "[runner]") {
    set_working_precision(30);
    REQUIRE_THROWS_AS(parse_config<R>("no_equals_sign\n"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_config<R>("mystery=1\n"), std::invalid_argument);
    REQUIRE_THROWS_AS(cfgio::datum_from_string<R>("triangle"), std::invalid_argument);
    REQUIRE_THROWS_AS(cfgio::datum_from_string<R>("cos:"), std::invalid_argument);
    REQUIRE_THROWS_AS(cfgio::datum_from_string<R>("cos:1"), std::invalid_argument);
    REQUIRE_THROWS_AS(cfgio::scheme_from_string<R>("random"), std::invalid_argument);
    REQUIRE_NOTHROW(cfgio::scheme_from_string<R>("graded"));
}

TEST_CASE("solve outputs are byte-identical across runs", "[runner][slow]") {
    const fs::path dir1 = fs::temp_directory_path() / "heatctl_det_1";
    const fs::path dir2 = fs::temp_directory_path() / "heatctl_det_2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    auto cfg1 = small_cfg(dir1.string());
    run_solve(cfg1);
    auto cfg2 = small_cfg(dir2.string());
    run_solve(cfg2);
    REQUIRE(slurp(dir1 / "controller.csv") == slurp(dir2 / "controller.csv"));
    REQUIRE(!slurp(dir1 / "controller.csv").empty());
}

TEST_CASE("controller file round trip and verify shape guard", "[runner][slow]") {
    const fs::path dir = fs::temp_directory_path() / "heatctl_ctrl_rt";
    fs::remove_all(dir);
    auto cfg = small_cfg(dir.string());
    const auto out = run_solve(cfg);
    const auto [loaded, meta] = load_controller_csv<R>(dir / "controller.csv");
    REQUIRE(loaded.alpha.size() == out.ctrl.alpha.size());
    for (std::size_t i = 0; i < loaded.alpha.size(); ++i)
        REQUIRE(loaded.alpha[i] == out.ctrl.alpha[i]);
    REQUIRE(loaded.basis.d == cfg.basis.d);
    REQUIRE(loaded.T == cfg.problem.T);
    REQUIRE(meta.at("datum") == "step");

    auto other = cfg;
    other.basis.N = 5;
    REQUIRE_THROWS_AS(run_verify(other, loaded, false), RunError);
    try {
        run_verify(other, loaded, false);
    } catch (const RunError& e) {
        REQUIRE(e.category() == ErrorCategory::config);
    }
}

TEST_CASE("solve warns about trivial data and the datum discontinuity", "[runner][slow]") {
    const fs::path dir = fs::temp_directory_path() / "heatctl_warn";
    fs::remove_all(dir);
    auto cfg = small_cfg(dir.string());
    cfg.problem.datum = DatumSpec<R>::cosine({{1u, R(0)}});
    const auto out = run_solve(cfg, false);
    bool trivial = false;
    for (const auto& w : out.warnings)
        if (w.find("trivial datum") != std::string::npos) trivial = true;
    REQUIRE(trivial);
    for (const R& a : out.ctrl.alpha) REQUIRE(a == 0);

    auto cfg2 = small_cfg(dir.string());
    cfg2.basis.N = 4;  // uniform N = 4 puts x_2 = 1/2 on the jump
    const auto out2 = run_solve(cfg2, false);
    bool jump = false;
    for (const auto& w : out2.warnings)
        if (w.find("discontinuity") != std::string::npos) jump = true;
    REQUIRE(jump);
}

TEST_CASE("invalid configuration is a config-category error", "[runner]") {
    auto cfg = small_cfg("unused");
    cfg.problem.T = R(-1);
    REQUIRE_THROWS_AS(run_solve(cfg, false), RunError);
    try {
        run_solve(cfg, false);
    } catch (const RunError& e) {
        REQUIRE(e.category() == ErrorCategory::config);
    }
}

TEST_CASE("sweep cell equals the standalone pipeline", "[runner][slow]") {
    const fs::path dir = fs::temp_directory_path() / "heatctl_sweep_eq";
    fs::remove_all(dir);
    auto cfg = small_cfg(dir.string());
    const auto sweep = run_sweep(cfg, {4u}, {real_traits<R>::from_string("0.1")});
    REQUIRE(sweep.rows.size() == 1);
    REQUIRE(sweep.log.empty());

    auto cell = cfg;
    cell.basis.N = 4;
    cell.basis.d = real_traits<R>::from_string("0.1");
    const auto solved = run_solve(cell, false);
    const R norm = controller_l2_norm(solved.ctrl);
    const R err = terminal_error_norm(solved.ctrl, cell.problem, cell.quad, cell.threads);
    REQUIRE(sweep.rows[0].controller_norm == norm);   // same code path, identical arithmetic
    REQUIRE(sweep.rows[0].terminal_error == err);

    // table files exist with the paper layout and no runtime column
    const std::string t1 = slurp(dir / "table1.csv");
    REQUIRE(t1.rfind("N/d,", 0) == 0);
    REQUIRE(t1.find("runtime") == std::string::npos);
    const std::string runs = slurp(dir / "sweep_runs.csv");
    REQUIRE(runs.rfind("N,d,terminal_error,controller_norm,runtime_seconds", 0) == 0);
}

TEST_CASE("sweep validates its grid", "[runner]") {
    auto cfg = small_cfg("unused");
    REQUIRE_THROWS_AS(run_sweep(cfg, {}, {R(0)}, false), RunError);
    REQUIRE_THROWS_AS(run_sweep(cfg, {4u}, {R(1)}, false), RunError);  // d >= T
}

TEST_CASE("plot data invariants", "[runner][slow]") {
    const fs::path dir = fs::temp_directory_path() / "heatctl_plot";
    fs::remove_all(dir);
    auto cfg = small_cfg(dir.string());
    const auto solved = run_solve(cfg, false);
    run_plot_data(cfg, solved.ctrl);

    // h.csv: header and zero rows up to the activation delay
    std::ifstream hfile(dir / "h.csv");
    std::string line;
    std::getline(hfile, line);
    REQUIRE(line == "t,h");
    std::vector<std::pair<R, R>> h_rows;
    while (std::getline(hfile, line)) {
        const auto comma = line.find(',');
        h_rows.emplace_back(real_traits<R>::from_string(line.substr(0, comma)),
                            real_traits<R>::from_string(line.substr(comma + 1)));
    }
    REQUIRE(h_rows.size() == kCurvePoints);
    for (const auto& [t, h] : h_rows)
        if (t <= cfg.basis.d) REQUIRE(h == 0);

    // running norm: nondecreasing, final value equals the closed-form norm
    std::ifstream nfile(dir / "running_norm.csv");
    std::getline(nfile, line);
    REQUIRE(line == "t,norm");
    R prev(0), last(0);
    std::size_t n_rows = 0;
    while (std::getline(nfile, line)) {
        const auto comma = line.find(',');
        const R v = real_traits<R>::from_string(line.substr(comma + 1));
        REQUIRE(v >= prev);
        prev = v;
        last = v;
        ++n_rows;
    }
    REQUIRE(n_rows == kCurvePoints);
    const R closed = controller_l2_norm(solved.ctrl);
    REQUIRE(fabs(last - closed) <= R("1e-12") * (1 + closed));

    // column orders of the surface and slice files
    std::ifstream sfile(dir / "surface.csv");
    std::getline(sfile, line);
    REQUIRE(line == "x,t,u");
    std::ifstream tfile(dir / "terminal.csv");
    std::getline(tfile, line);
    REQUIRE(line == "x,u");
}
