// heatctl: computes Neumann null controllers for the heat equation on a
// finite interval by collocation of the unified-transform integral equation,
// verifies the controlled solution, and emits table/figure data as CSV.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "heatctl/runner.hpp"

namespace {

using R = heatctl::mpreal;
using heatctl::RunConfig;

struct CommonFlags {
    std::string config_path;
    std::string L, T, d, datum, scheme, rel_tol, abs_tol, out;
    unsigned N = 0;
    unsigned precision = 0;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "key=value configuration file");
    cmd->add_option("--L", f.L, "interval length (default 1)");
    cmd->add_option("--T", f.T, "control horizon (default 0.5)");
    cmd->add_option("--N", f.N, "basis size parameter; N+1 basis functions");
    cmd->add_option("--d", f.d, "controller activation delay");
    cmd->add_option("--datum", f.datum, "initial datum: step | cos:m1=c1,m2=c2,...");
    cmd->add_option("--scheme", f.scheme, "collocation points: uniform | graded[:exponent]");
    cmd->add_option("--precision", f.precision, "working precision in decimal digits (default 30)");
    cmd->add_option("--rel-tol", f.rel_tol, "quadrature relative tolerance");
    cmd->add_option("--abs-tol", f.abs_tol, "quadrature absolute tolerance");
    cmd->add_option("--out", f.out, "output directory (default 'out')");
    cmd->add_option("--threads", f.threads, "worker threads (default: hardware)");
}

RunConfig<R> materialize(const CommonFlags& f) {
    std::string text;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in)
            throw heatctl::RunError(heatctl::ErrorCategory::io,
                                    "cannot read config file '" + f.config_path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    std::optional<unsigned> prec;
    if (f.precision != 0) prec = f.precision;
    RunConfig<R> cfg;
    try {
        cfg = heatctl::parse_config<R>(text, prec);
        using heatctl::real_traits;
        if (!f.L.empty()) cfg.problem.L = real_traits<R>::from_string(f.L);
        if (!f.T.empty()) cfg.problem.T = real_traits<R>::from_string(f.T);
        if (f.N != 0) cfg.basis.N = f.N;
        if (!f.d.empty()) cfg.basis.d = real_traits<R>::from_string(f.d);
        if (!f.datum.empty()) cfg.problem.datum = heatctl::cfgio::datum_from_string<R>(f.datum);
        if (!f.scheme.empty()) cfg.scheme = heatctl::cfgio::scheme_from_string<R>(f.scheme);
        if (!f.rel_tol.empty()) cfg.quad.rel_tol = real_traits<R>::from_string(f.rel_tol);
        if (!f.abs_tol.empty()) cfg.quad.abs_tol = real_traits<R>::from_string(f.abs_tol);
        if (!f.out.empty()) cfg.out_dir = f.out;
        cfg.threads = f.threads;
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw heatctl::RunError(heatctl::ErrorCategory::config, e.what());
    }
    return cfg;
}

std::vector<R> parse_d_list(const std::string& s) {
    std::vector<R> out;
    std::stringstream body(s);
    std::string item;
    while (std::getline(body, item, ','))
        out.push_back(heatctl::real_traits<R>::from_string(item));
    return out;
}

std::vector<unsigned> parse_n_list(const std::string& s) {
    std::vector<unsigned> out;
    std::stringstream body(s);
    std::string item;
    while (std::getline(body, item, ',')) out.push_back(std::stoul(item));
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Neumann null controllers for the heat equation via the unified transform"};
    app.require_subcommand(1);

    CommonFlags fs, fv, fw, fp;
    auto* solve = app.add_subcommand("solve", "assemble and solve the collocation system");
    add_common(solve, fs);

    auto* verify = app.add_subcommand("verify", "evolve the controlled solution and measure u(.,T)");
    add_common(verify, fv);
    std::string verify_ctrl;
    verify->add_option("--controller", verify_ctrl, "controller.csv from a previous solve")
        ->required();

    auto* sweep = app.add_subcommand("sweep", "run a full (N, d) grid and emit table CSVs");
    add_common(sweep, fw);
    std::string n_list = "4,5,6,7,8,9,10";
    std::string d_list = "0,0.1,0.15,0.2,0.3,0.35";
    sweep->add_option("--N-list", n_list, "comma-separated N values");
    sweep->add_option("--d-list", d_list, "comma-separated d values");

    auto* plot = app.add_subcommand("plot-data", "emit h(t), running norm, surface and slice CSVs");
    add_common(plot, fp);
    std::string plot_ctrl;
    plot->add_option("--controller", plot_ctrl, "reuse a stored controller (otherwise solve)");

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) {
        auto cfg = materialize(fs);
        const auto out = heatctl::run_solve(cfg);
        for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
        const unsigned p = cfg.quad.precision_digits;
        std::cout << "n,a_n\n";
        for (std::size_t n = 1; n <= out.ctrl.alpha.size(); ++n)
            std::cout << n << "," << heatctl::fmt_real(out.ctrl.alpha[n - 1], p) << "\n";
        std::cout << "residual_norm=" << heatctl::fmt_real(out.ctrl.diagnostics.residual_norm, 3)
                  << "\ncondition_estimate="
                  << heatctl::fmt_real(out.ctrl.diagnostics.condition_estimate, 3)
                  << "\ncontroller_l2_norm="
                  << heatctl::fmt_real(controller_l2_norm(out.ctrl), p) << "\n";
        std::cout << "wrote " << cfg.out_dir << "/controller.csv\n";
    } else if (verify->parsed()) {
        auto cfg = materialize(fv);
        auto [ctrl, meta] = heatctl::load_controller_csv<R>(verify_ctrl);
        const auto out = heatctl::run_verify(cfg, ctrl);
        std::cout << "terminal_error_norm="
                  << heatctl::fmt_real(out.terminal_norm, cfg.quad.precision_digits) << "\n";
        std::cout << "wrote " << cfg.out_dir << "/surface.csv and terminal.csv\n";
    } else if (sweep->parsed()) {
        auto cfg = materialize(fw);
        const auto result = heatctl::run_sweep(cfg, parse_n_list(n_list), parse_d_list(d_list));
        for (const auto& line : result.log) std::cerr << "warning: " << line << "\n";
        for (const auto& row : result.rows)
            std::cout << "N=" << row.N << " d=" << heatctl::fmt_real(row.d, 3)
                      << " terminal_error=" << heatctl::fmt_real(row.terminal_error, 3)
                      << " controller_norm=" << heatctl::fmt_real(row.controller_norm, 7)
                      << " runtime_s=" << heatctl::fmt_real(row.runtime_seconds, 3) << "\n";
        std::cout << "wrote table CSVs to " << cfg.out_dir << "\n";
    } else if (plot->parsed()) {
        auto cfg = materialize(fp);
        heatctl::Controller<R> ctrl;
        if (!plot_ctrl.empty()) {
            ctrl = heatctl::load_controller_csv<R>(plot_ctrl).first;
        } else {
            ctrl = heatctl::run_solve(cfg, /*write_files=*/false).ctrl;
        }
        heatctl::run_plot_data(cfg, ctrl);
        std::cout << "wrote h.csv, running_norm.csv, surface.csv, terminal.csv to "
                  << cfg.out_dir << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const heatctl::RunError& e) {
        std::cerr << "error[";
        switch (e.category()) {
            case heatctl::ErrorCategory::config: std::cerr << "config"; break;
            case heatctl::ErrorCategory::solver: std::cerr << "solver"; break;
            case heatctl::ErrorCategory::quadrature: std::cerr << "quadrature"; break;
            case heatctl::ErrorCategory::io: std::cerr << "io"; break;
        }
        std::cerr << "]: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::invalid_argument& e) {
        std::cerr << "error[config]: " << e.what() << "\n";
        return static_cast<int>(heatctl::ErrorCategory::config);
    } catch (const heatctl::SingularMatrixError& e) {
        std::cerr << "error[solver]: " << e.what() << "\n";
        return static_cast<int>(heatctl::ErrorCategory::solver);
    } catch (const heatctl::QuadratureError& e) {
        std::cerr << "error[quadrature]: " << e.what() << "\n";
        return static_cast<int>(heatctl::ErrorCategory::quadrature);
    } catch (const std::exception& e) {
        std::cerr << "error[io]: " << e.what() << "\n";
        return static_cast<int>(heatctl::ErrorCategory::io);
    }
}
