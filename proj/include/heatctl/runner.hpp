#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "heatctl/assembly.hpp"
#include "heatctl/verifier.hpp"

namespace heatctl {

// ---------------------------------------------------------------------------
// error categories for the CLI (exit codes)
// ---------------------------------------------------------------------------

enum class ErrorCategory : int { config = 2, solver = 3, quadrature = 4, io = 5 };

class RunError : public std::runtime_error {
  public:
    RunError(ErrorCategory cat, const std::string& what) : std::runtime_error(what), cat_(cat) {}
    ErrorCategory category() const { return cat_; }

  private:
    ErrorCategory cat_;
};

// ---------------------------------------------------------------------------
// number formatting: scientific, precision_digits significant digits
// ---------------------------------------------------------------------------

inline std::string fmt_real(const mpreal& x, unsigned digits) {
    return x.str(digits, std::ios_base::scientific);
}

inline std::string fmt_real(double x, unsigned digits) {
    std::ostringstream os;
    os.precision(digits > 17 ? 17 : digits);
    os << std::scientific << x;
    return os.str();
}

// ---------------------------------------------------------------------------
// run configuration
// ---------------------------------------------------------------------------

template <class R>
struct RunConfig {
    ProblemSpec<R> problem;
    BasisConfig<R> basis;
    CollocationScheme<R> scheme = CollocationScheme<R>::uniform();
    QuadConfig<R> quad = QuadConfig<R>::defaults();
    std::string out_dir = "out";
    unsigned threads = 0;  // 0 = hardware; not serialized

    static RunConfig paper_defaults() {
        RunConfig cfg;
        cfg.problem.L = R(1);
        cfg.problem.T = R(1) / 2;
        cfg.problem.datum = DatumSpec<R>::step();
        cfg.basis.N = 8;
        cfg.basis.d = real_traits<R>::from_string("0.3");
        return cfg;
    }

    void validate() const {
        problem.validate();
        basis.validate(problem.T);
        quad.validate();
        if (scheme.kind == SchemeKind::Graded && !(scheme.exponent > 0))
            throw std::invalid_argument("RunConfig: graded exponent must be positive");
    }
};

namespace cfgio {

template <class R>
std::string datum_to_string(const DatumSpec<R>& d, unsigned digits) {
    if (d.kind == DatumKind::StepPaper) return "step";
    std::string s = "cos:";
    bool first = true;
    for (const auto& [m, c] : d.cosine_coeffs) {
        if (!first) s += ",";
        s += std::to_string(m) + "=" + fmt_real(c, digits);
        first = false;
    }
    return s;
}

template <class R>
DatumSpec<R> datum_from_string(const std::string& s) {
    if (s == "step") return DatumSpec<R>::step();
    if (s.rfind("cos:", 0) != 0)
        throw std::invalid_argument("datum must be 'step' or 'cos:m1=c1,m2=c2,...'");
    std::vector<std::pair<unsigned, R>> coeffs;
    std::stringstream body(s.substr(4));
    std::string item;
    while (std::getline(body, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("datum cosine term must look like m=c");
        const int m = std::stoi(item.substr(0, eq));
        if (m < 1) throw std::invalid_argument("datum cosine mode indices start at 1");
        coeffs.emplace_back(static_cast<unsigned>(m),
                            real_traits<R>::from_string(item.substr(eq + 1)));
    }
    if (coeffs.empty()) throw std::invalid_argument("datum cosine list is empty");
    return DatumSpec<R>::cosine(std::move(coeffs));
}

template <class R>
std::string scheme_to_string(const CollocationScheme<R>& s, unsigned digits) {
    if (s.kind == SchemeKind::Uniform) return "uniform";
    return "graded:" + fmt_real(s.exponent, digits);
}

template <class R>
CollocationScheme<R> scheme_from_string(const std::string& s) {
    if (s == "uniform") return CollocationScheme<R>::uniform();
    if (s == "graded") return CollocationScheme<R>::graded();
    if (s.rfind("graded:", 0) == 0)
        return CollocationScheme<R>::graded(real_traits<R>::from_string(s.substr(7)));
    throw std::invalid_argument("scheme must be 'uniform' or 'graded:<exponent>'");
}

}  // namespace cfgio

// Key=value text form. Every paper experiment is one short file (or a flag
// set); parse(serialize(cfg)) reproduces the configuration exactly.
template <class R>
std::string serialize_config(const RunConfig<R>& cfg) {
    const unsigned p = cfg.quad.precision_digits;
    std::ostringstream os;
    os << "precision=" << p << "\n";
    os << "L=" << fmt_real(cfg.problem.L, p) << "\n";
    os << "T=" << fmt_real(cfg.problem.T, p) << "\n";
    os << "N=" << cfg.basis.N << "\n";
    os << "d=" << fmt_real(cfg.basis.d, p) << "\n";
    os << "datum=" << cfgio::datum_to_string(cfg.problem.datum, p) << "\n";
    os << "scheme=" << cfgio::scheme_to_string(cfg.scheme, p) << "\n";
    os << "rel_tol=" << fmt_real(cfg.quad.rel_tol, p) << "\n";
    os << "abs_tol=" << fmt_real(cfg.quad.abs_tol, p) << "\n";
    os << "max_radius=" << fmt_real(cfg.quad.max_radius, p) << "\n";
    os << "max_refinements=" << cfg.quad.max_refinements << "\n";
    os << "out=" << cfg.out_dir << "\n";
    return os.str();
}

template <class R>
RunConfig<R> parse_config(const std::string& text,
                          std::optional<unsigned> precision_override = std::nullopt) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line is not key=value: '" + line + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    unsigned digits = 30;
    if (auto it = kv.find("precision"); it != kv.end()) digits = std::stoul(it->second);
    if (precision_override) digits = *precision_override;
    if constexpr (real_traits<R>::variable_precision) set_working_precision(digits);

    RunConfig<R> cfg = RunConfig<R>::paper_defaults();
    cfg.quad = QuadConfig<R>::defaults(digits);
    static const std::vector<std::string> known = {"precision", "L", "T", "N", "d", "datum",
                                                   "scheme", "rel_tol", "abs_tol", "max_radius",
                                                   "max_refinements", "out"};
    for (const auto& [k, v] : kv) {
        if (std::find(known.begin(), known.end(), k) == known.end())
            throw std::invalid_argument("unknown config key '" + k + "'");
    }
    if (auto it = kv.find("L"); it != kv.end()) cfg.problem.L = real_traits<R>::from_string(it->second);
    if (auto it = kv.find("T"); it != kv.end()) cfg.problem.T = real_traits<R>::from_string(it->second);
    if (auto it = kv.find("N"); it != kv.end()) cfg.basis.N = std::stoul(it->second);
    if (auto it = kv.find("d"); it != kv.end()) cfg.basis.d = real_traits<R>::from_string(it->second);
    if (auto it = kv.find("datum"); it != kv.end()) cfg.problem.datum = cfgio::datum_from_string<R>(it->second);
    if (auto it = kv.find("scheme"); it != kv.end()) cfg.scheme = cfgio::scheme_from_string<R>(it->second);
    if (auto it = kv.find("rel_tol"); it != kv.end()) cfg.quad.rel_tol = real_traits<R>::from_string(it->second);
    if (auto it = kv.find("abs_tol"); it != kv.end()) cfg.quad.abs_tol = real_traits<R>::from_string(it->second);
    if (auto it = kv.find("max_radius"); it != kv.end()) cfg.quad.max_radius = real_traits<R>::from_string(it->second);
    if (auto it = kv.find("max_refinements"); it != kv.end()) cfg.quad.max_refinements = std::stoul(it->second);
    if (auto it = kv.find("out"); it != kv.end()) cfg.out_dir = it->second;
    return cfg;
}

// ---------------------------------------------------------------------------
// outputs
// ---------------------------------------------------------------------------

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path);
    if (!out) throw RunError(ErrorCategory::io, "cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace detail

template <class R>
struct SolveOutputs {
    Controller<R> ctrl;
    LinearSystem<R> sys;
    std::vector<std::string> warnings;
};

template <class R>
void write_controller_csv(const std::filesystem::path& path, const RunConfig<R>& cfg,
                          const Controller<R>& ctrl) {
    const unsigned p = cfg.quad.precision_digits;
    auto out = detail::open_out(path);
    out << "# heatctl controller\n";
    out << "# L=" << fmt_real(cfg.problem.L, p) << "\n";
    out << "# T=" << fmt_real(cfg.problem.T, p) << "\n";
    out << "# N=" << cfg.basis.N << "\n";
    out << "# d=" << fmt_real(cfg.basis.d, p) << "\n";
    out << "# datum=" << cfgio::datum_to_string(cfg.problem.datum, p) << "\n";
    out << "# scheme=" << cfgio::scheme_to_string(cfg.scheme, p) << "\n";
    out << "# precision=" << p << "\n";
    out << "# residual=" << fmt_real(ctrl.diagnostics.residual_norm, p) << "\n";
    out << "# condition=" << fmt_real(ctrl.diagnostics.condition_estimate, p) << "\n";
    out << "# l2_norm=" << fmt_real(controller_l2_norm(ctrl), p) << "\n";
    out << "n,a_n\n";
    for (std::size_t n = 1; n <= ctrl.alpha.size(); ++n)
        out << n << "," << fmt_real(ctrl.alpha[n - 1], p) << "\n";
}

template <class R>
std::pair<Controller<R>, std::map<std::string, std::string>> load_controller_csv(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw RunError(ErrorCategory::io, "cannot read controller file '" + path.string() + "'");
    std::map<std::string, std::string> meta;
    Controller<R> ctrl;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq != std::string::npos) meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
            continue;
        }
        if (line.empty() || line == "n,a_n") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw RunError(ErrorCategory::io, "malformed controller row: '" + line + "'");
        ctrl.alpha.push_back(real_traits<R>::from_string(line.substr(comma + 1)));
    }
    if (ctrl.alpha.empty())
        throw RunError(ErrorCategory::io, "controller file has no coefficients");
    if (!meta.count("T") || !meta.count("d") || !meta.count("N"))
        throw RunError(ErrorCategory::io, "controller file is missing metadata");
    ctrl.T = real_traits<R>::from_string(meta.at("T"));
    ctrl.basis.d = real_traits<R>::from_string(meta.at("d"));
    ctrl.basis.N = std::stoul(meta.at("N"));
    return {ctrl, meta};
}

// ---------------------------------------------------------------------------
// workflows
// ---------------------------------------------------------------------------

template <class R>
SolveOutputs<R> run_solve(const RunConfig<R>& cfg, bool write_files = true) {
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw RunError(ErrorCategory::config, e.what());
    }
    SolveOutputs<R> out;
    if (cfg.problem.datum.is_trivial())
        out.warnings.push_back("trivial datum: the controller is identically zero");
    if (cfg.problem.datum.kind == DatumKind::StepPaper) {
        for (const R& x : cfg.scheme.points(cfg.basis.N, cfg.problem.L))
            if (x == cfg.problem.L / 2)
                out.warnings.push_back(
                    "a collocation point lies on the datum discontinuity x = 1/2; "
                    "the left (U) branch is used there");
    }
    try {
        out.sys = build_system(cfg.problem, cfg.basis, cfg.scheme, cfg.quad, cfg.threads);
        out.ctrl = solve(out.sys, cfg.basis, cfg.problem.T, cfg.quad);
    } catch (const SingularMatrixError& e) {
        throw RunError(ErrorCategory::solver, e.what());
    } catch (const QuadratureError& e) {
        throw RunError(ErrorCategory::quadrature, e.what());
    } catch (const IntegrandError& e) {
        throw RunError(ErrorCategory::quadrature, e.what());
    }
    if (write_files)
        write_controller_csv(std::filesystem::path(cfg.out_dir) / "controller.csv", cfg, out.ctrl);
    return out;
}

template <class R>
struct VerifyOutputs {
    R terminal_norm{};
    SolutionSample<R> surface;
    std::vector<R> terminal_xs;
    std::vector<R> terminal_us;
};

inline constexpr unsigned kTerminalSlicePoints = 101;
inline constexpr unsigned kSurfacePoints = 21;

template <class R>
VerifyOutputs<R> run_verify(const RunConfig<R>& cfg, const Controller<R>& ctrl,
                            bool write_files = true, const R& t_min = R(0)) {
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw RunError(ErrorCategory::config, e.what());
    }
    if (ctrl.alpha.size() != cfg.basis.N + 1 || !(ctrl.basis.d == cfg.basis.d) ||
        !(ctrl.T == cfg.problem.T))
        throw RunError(ErrorCategory::config,
                       "controller shape (N, d, T) does not match the configuration");
    const R tmin = t_min > 0 ? t_min : real_traits<R>::from_string("1e-3");
    VerifyOutputs<R> out;
    try {
        out.terminal_norm = terminal_error_norm(ctrl, cfg.problem, cfg.quad, cfg.threads);
        out.surface = surface_sample(ctrl, cfg.problem, kSurfacePoints, kSurfacePoints, cfg.quad,
                                     tmin, cfg.threads);
        out.terminal_xs.resize(kTerminalSlicePoints);
        out.terminal_us.resize(kTerminalSlicePoints);
        parallel_for(kTerminalSlicePoints, [&](std::size_t j) {
            out.terminal_xs[j] = cfg.problem.L * static_cast<int>(j) / (kTerminalSlicePoints - 1);
            out.terminal_us[j] =
                solution_value(out.terminal_xs[j], cfg.problem.T, ctrl, cfg.problem, cfg.quad);
        }, cfg.threads);
    } catch (const QuadratureError& e) {
        throw RunError(ErrorCategory::quadrature, e.what());
    } catch (const IntegrandError& e) {
        throw RunError(ErrorCategory::quadrature, e.what());
    }
    if (write_files) {
        const unsigned p = cfg.quad.precision_digits;
        auto surf = detail::open_out(std::filesystem::path(cfg.out_dir) / "surface.csv");
        surf << "x,t,u\n";
        for (std::size_t i = 0; i < out.surface.ts.size(); ++i)
            for (std::size_t j = 0; j < out.surface.xs.size(); ++j)
                surf << fmt_real(out.surface.xs[j], p) << "," << fmt_real(out.surface.ts[i], p)
                     << "," << fmt_real(out.surface.values(i, j), p) << "\n";
        auto term = detail::open_out(std::filesystem::path(cfg.out_dir) / "terminal.csv");
        term << "x,u\n";
        for (std::size_t j = 0; j < out.terminal_xs.size(); ++j)
            term << fmt_real(out.terminal_xs[j], p) << "," << fmt_real(out.terminal_us[j], p) << "\n";
    }
    return out;
}

template <class R>
struct SweepRow {
    unsigned N = 0;
    R d{};
    R terminal_error{};
    R controller_norm{};
    double runtime_seconds = 0;
    bool failed = false;
};

template <class R>
struct SweepResult {
    std::vector<SweepRow<R>> rows;
    std::vector<std::string> log;
};

// Full (N, d) grid. Table CSVs mirror the paper's N/d layout; runtimes go to
// a separate sweep_runs.csv so the table files stay byte-stable across runs.
template <class R>
SweepResult<R> run_sweep(const RunConfig<R>& cfg, const std::vector<unsigned>& n_values,
                         const std::vector<R>& d_values, bool write_files = true) {
    try {
        cfg.validate();
        if (n_values.empty() || d_values.empty())
            throw std::invalid_argument("sweep: N and d lists must be nonempty");
        for (const R& d : d_values)
            if (!(d >= 0 && d < cfg.problem.T))
                throw std::invalid_argument("sweep: every d must satisfy 0 <= d < T");
    } catch (const std::invalid_argument& e) {
        throw RunError(ErrorCategory::config, e.what());
    }
    SweepResult<R> result;
    for (const unsigned n : n_values) {
        for (const R& d : d_values) {
            SweepRow<R> row;
            row.N = n;
            row.d = d;
            const auto start = std::chrono::steady_clock::now();
            try {
                RunConfig<R> cell = cfg;
                cell.basis.N = n;
                cell.basis.d = d;
                auto solved = run_solve(cell, /*write_files=*/false);
                row.controller_norm = controller_l2_norm(solved.ctrl);
                row.terminal_error =
                    terminal_error_norm(solved.ctrl, cell.problem, cell.quad, cell.threads);
            } catch (const std::exception& e) {
                row.failed = true;
                row.terminal_error = std::numeric_limits<double>::quiet_NaN();
                row.controller_norm = std::numeric_limits<double>::quiet_NaN();
                std::ostringstream os;
                os << "cell (N=" << n << ", d=" << static_cast<double>(d) << ") failed: " << e.what();
                result.log.push_back(os.str());
            }
            row.runtime_seconds = std::chrono::duration<double>(
                std::chrono::steady_clock::now() - start).count();
            result.rows.push_back(row);
        }
    }
    if (write_files) {
        const unsigned p = cfg.quad.precision_digits;
        const bool graded = cfg.scheme.kind == SchemeKind::Graded;
        auto write_table = [&](const std::string& name, bool errors) {
            auto out = detail::open_out(std::filesystem::path(cfg.out_dir) / name);
            out << "N/d";
            for (const R& d : d_values) out << "," << fmt_real(d, 6);
            out << "\n";
            for (const unsigned n : n_values) {
                out << n;
                for (const R& d : d_values) {
                    for (const auto& row : result.rows) {
                        if (row.N == n && row.d == d) {
                            const R v = errors ? row.terminal_error : row.controller_norm;
                            out << "," << (row.failed ? std::string("nan") : fmt_real(v, p));
                            break;
                        }
                    }
                }
                out << "\n";
            }
        };
        write_table(graded ? "table3.csv" : "table1.csv", /*errors=*/true);
        write_table(graded ? "table4.csv" : "table2.csv", /*errors=*/false);
        auto runs = detail::open_out(std::filesystem::path(cfg.out_dir) / "sweep_runs.csv");
        runs << "N,d,terminal_error,controller_norm,runtime_seconds\n";
        for (const auto& row : result.rows)
            runs << row.N << "," << fmt_real(row.d, 6) << ","
                 << (row.failed ? std::string("nan") : fmt_real(row.terminal_error, p)) << ","
                 << (row.failed ? std::string("nan") : fmt_real(row.controller_norm, p)) << ","
                 << fmt_real(row.runtime_seconds, 6) << "\n";
    }
    return result;
}

inline constexpr unsigned kCurvePoints = 201;

template <class R>
void run_plot_data(const RunConfig<R>& cfg, const Controller<R>& ctrl) {
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw RunError(ErrorCategory::config, e.what());
    }
    const unsigned p = cfg.quad.precision_digits;
    const R T = cfg.problem.T;

    auto hfile = detail::open_out(std::filesystem::path(cfg.out_dir) / "h.csv");
    hfile << "t,h\n";
    std::vector<R> tgrid(kCurvePoints);
    for (unsigned i = 0; i < kCurvePoints; ++i) {
        tgrid[i] = T * static_cast<int>(i) / (kCurvePoints - 1);
        hfile << fmt_real(tgrid[i], p) << "," << fmt_real(controller_value(ctrl, tgrid[i]), p) << "\n";
    }

    // running norm accumulated over consecutive grid segments
    auto nfile = detail::open_out(std::filesystem::path(cfg.out_dir) / "running_norm.csv");
    nfile << "t,norm\n";
    R acc{};
    using std::sqrt;
    for (unsigned i = 0; i < kCurvePoints; ++i) {
        if (i > 0 && tgrid[i] > ctrl.basis.d) {
            const R a = tgrid[i - 1] > ctrl.basis.d ? tgrid[i - 1] : ctrl.basis.d;
            if (a < tgrid[i]) {
                auto f = [&](const R& s) -> Cplx<R> {
                    const R h = controller_value(ctrl, s);
                    return Cplx<R>(h * h);
                };
                acc += segment_integral<R>(f, a, tgrid[i], cfg.quad).re;
            }
        }
        nfile << fmt_real(tgrid[i], p) << "," << fmt_real(R(sqrt(acc)), p) << "\n";
    }

    const R tmin = real_traits<R>::from_string("1e-3");
    const auto surface = surface_sample(ctrl, cfg.problem, kSurfacePoints, kSurfacePoints,
                                        cfg.quad, tmin, cfg.threads);
    auto surf = detail::open_out(std::filesystem::path(cfg.out_dir) / "surface.csv");
    surf << "x,t,u\n";
    for (std::size_t i = 0; i < surface.ts.size(); ++i)
        for (std::size_t j = 0; j < surface.xs.size(); ++j)
            surf << fmt_real(surface.xs[j], p) << "," << fmt_real(surface.ts[i], p) << ","
                 << fmt_real(surface.values(i, j), p) << "\n";

    auto term = detail::open_out(std::filesystem::path(cfg.out_dir) / "terminal.csv");
    term << "x,u\n";
    std::vector<R> us(kTerminalSlicePoints);
    parallel_for(kTerminalSlicePoints, [&](std::size_t j) {
        const R x = cfg.problem.L * static_cast<int>(j) / (kTerminalSlicePoints - 1);
        us[j] = solution_value(x, T, ctrl, cfg.problem, cfg.quad);
    }, cfg.threads);
    for (unsigned j = 0; j < kTerminalSlicePoints; ++j) {
        const R x = cfg.problem.L * static_cast<int>(j) / (kTerminalSlicePoints - 1);
        term << fmt_real(x, p) << "," << fmt_real(us[j], p) << "\n";
    }
}

}  // namespace heatctl
