#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatctl/basis.hpp"
#include "heatctl/linalg.hpp"
#include "heatctl/parallel.hpp"
#include "heatctl/quadrature.hpp"
#include "heatctl/transforms.hpp"

namespace heatctl {

// ---------------------------------------------------------------------------
// collocation points
// ---------------------------------------------------------------------------

enum class SchemeKind { Uniform, Graded };

// Uniform: x_k = L k / N. Graded: x_k = L (1 - (k/N)^p), denser near the
// controlled boundary x = L; p = 3/2 unless overridden.
template <class R>
struct CollocationScheme {
    SchemeKind kind = SchemeKind::Uniform;
    R exponent{};  // graded only

    static CollocationScheme uniform() { return {SchemeKind::Uniform, R(0)}; }
    static CollocationScheme graded(R p) { return {SchemeKind::Graded, std::move(p)}; }
    static CollocationScheme graded() { return graded(R(3) / 2); }

    std::vector<R> points(unsigned N, const R& L) const {
        using std::pow;
        std::vector<R> xs(N + 1);
        for (unsigned k = 0; k <= N; ++k) {
            const R frac = R(static_cast<int>(k)) / static_cast<int>(N);
            xs[k] = (kind == SchemeKind::Uniform) ? L * frac : L * (1 - pow(frac, exponent));
        }
        return xs;
    }
};

template <class R>
struct LinearSystem {
    Matrix<R> F;        // (K+1) x (N+1), rows follow the collocation points
    std::vector<R> g;   // length K+1
    std::vector<R> xs;  // the collocation points themselves
};

template <class R>
struct SolveDiagnostics {
    R residual_norm{};
    R condition_estimate{};
};

template <class R>
struct Controller {
    std::vector<R> alpha;  // a_1 .. a_{N+1}
    BasisConfig<R> basis;
    R T{};
    SolveDiagnostics<R> diagnostics;
};

// ---------------------------------------------------------------------------
// matrix and right-hand side
// ---------------------------------------------------------------------------

// F_{n,k} = -int_0^inf Re[...] dr with the damped B_n combination. The
// second (7 pi/8) ray term is the conjugate of the first through
// lambda -> -conj(lambda), so the bracket equals twice the real part of the
// r e^{i pi/8} term.
template <class R>
R matrix_entry(unsigned n, const R& xk, const ProblemSpec<R>& spec, const BasisConfig<R>& basis,
               const QuadConfig<R>& cfg) {
    const Cplx<R> dir = ContourRay<R>::main().direction();
    const Cplx<R> i{R(0), R(1)};
    const R t_eff = spec.T - basis.d;
    auto f = [&](const R& r) -> Cplx<R> {
        const Cplx<R> lambda = r * dir;
        return R(2) * (i * cos_over_sin(lambda, xk, spec.L) *
                       damped_B(n, lambda, basis.d, spec.T) * dir);
    };
    try {
        return -ray_integral<R>(f, t_eff, cfg);
    } catch (const QuadratureError& e) {
        std::ostringstream os;
        os << "matrix entry (n=" << n << ", x=" << static_cast<double>(xk) << "): " << e.what();
        throw QuadratureError(os.str(), e.best_estimate(), e.error_bound());
    }
}

// Builds F and g. F depends only on (L, T, N, d, scheme, quadrature); the
// datum enters through g alone, so sweeps over data can reuse the matrix.
template <class R>
LinearSystem<R> build_system(const ProblemSpec<R>& spec, const BasisConfig<R>& basis,
                             const CollocationScheme<R>& scheme, const QuadConfig<R>& cfg,
                             unsigned threads = 0) {
    spec.validate();
    basis.validate(spec.T);
    cfg.validate();
    const unsigned N = basis.N;
    LinearSystem<R> sys;
    sys.xs = scheme.points(N, spec.L);
    const std::size_t rows = sys.xs.size(), cols = N + 1;
    sys.F = Matrix<R>(rows, cols);
    sys.g.resize(rows);
    parallel_for(rows * cols + rows, [&](std::size_t idx) {
        if (idx < rows * cols) {
            const std::size_t k = idx / cols;
            const unsigned n = static_cast<unsigned>(idx % cols) + 1;
            sys.F(k, n - 1) = matrix_entry(n, sys.xs[k], spec, basis, cfg);
        } else {
            const std::size_t k = idx - rows * cols;
            sys.g[k] = G_datum(sys.xs[k], spec, cfg);
        }
    }, threads);
    return sys;
}

// Matrix cache for sweeps across data: keyed by everything F depends on.
template <class R>
class MatrixCache {
  public:
    std::shared_ptr<const LinearSystem<R>> get_or_build(const ProblemSpec<R>& spec,
                                                        const BasisConfig<R>& basis,
                                                        const CollocationScheme<R>& scheme,
                                                        const QuadConfig<R>& cfg,
                                                        unsigned threads = 0) {
        const std::string key = make_key(spec, basis, scheme, cfg);
        {
            std::lock_guard<std::mutex> lock(mtx_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        // cache only the datum-independent part: g is recomputed by callers
        ProblemSpec<R> matrix_spec = spec;
        auto sys = std::make_shared<LinearSystem<R>>();
        sys->xs = scheme.points(basis.N, spec.L);
        const std::size_t rows = sys->xs.size(), cols = basis.N + 1;
        sys->F = Matrix<R>(rows, cols);
        parallel_for(rows * cols, [&](std::size_t idx) {
            const std::size_t k = idx / cols;
            const unsigned n = static_cast<unsigned>(idx % cols) + 1;
            sys->F(k, n - 1) = matrix_entry(n, sys->xs[k], matrix_spec, basis, cfg);
        }, threads);
        std::lock_guard<std::mutex> lock(mtx_);
        auto [it, inserted] = cache_.emplace(key, sys);
        return it->second;
    }

  private:
    static std::string make_key(const ProblemSpec<R>& spec, const BasisConfig<R>& basis,
                                const CollocationScheme<R>& scheme, const QuadConfig<R>& cfg) {
        std::ostringstream os;
        os << spec.L << '|' << spec.T << '|' << basis.N << '|' << basis.d << '|'
           << static_cast<int>(scheme.kind) << '|' << scheme.exponent << '|'
           << cfg.precision_digits << '|' << cfg.rel_tol << '|' << cfg.abs_tol << '|'
           << cfg.max_radius;
        return os.str();
    }

    std::mutex mtx_;
    std::map<std::string, std::shared_ptr<const LinearSystem<R>>> cache_;
};

// ---------------------------------------------------------------------------
// solve and controller evaluation
// ---------------------------------------------------------------------------

// Solves the square collocation system F alpha = g. Only K = N is
// supported; the overdetermined case is deliberately rejected.
template <class R>
Controller<R> solve(const LinearSystem<R>& sys, const BasisConfig<R>& basis, const R& T,
                    const QuadConfig<R>& cfg) {
    if (sys.F.rows != sys.F.cols)
        throw std::invalid_argument("solve: only square systems (K = N) are supported");
    if (sys.F.cols != basis.N + 1 || sys.g.size() != sys.F.rows)
        throw std::invalid_argument("solve: system shape does not match the basis");
    const auto res = solve_dense(sys.F, sys.g, cfg.precision_digits);
    Controller<R> ctrl;
    ctrl.alpha = res.x;
    ctrl.basis = basis;
    ctrl.T = T;
    ctrl.diagnostics.condition_estimate = res.condition_estimate;
    ctrl.diagnostics.residual_norm = residual_norm2(sys.F, res.x, sys.g);
    return ctrl;
}

// h(t) = sum a_n phi_n(t); vanishes outside (d, T).
template <class R>
R controller_value(const Controller<R>& ctrl, const R& t) {
    using std::sin;
    if (t <= ctrl.basis.d || t >= ctrl.T) return R(0);
    const R theta = pi_v<R>() * (t - ctrl.basis.d) / (ctrl.T - ctrl.basis.d);
    R acc{};
    for (std::size_t n = 1; n <= ctrl.alpha.size(); ++n)
        acc += ctrl.alpha[n - 1] * sin(static_cast<int>(n) * theta);
    return acc;
}

// Full L2 norm via basis orthogonality: sqrt((T-d)/2 sum a_n^2).
template <class R>
R controller_l2_norm(const Controller<R>& ctrl) {
    using std::sqrt;
    R acc{};
    for (const R& a : ctrl.alpha) acc += a * a;
    return sqrt((ctrl.T - ctrl.basis.d) / 2 * acc);
}

// Running norm (int_0^t h^2)^{1/2} by quadrature over the active window.
template <class R>
R running_l2(const Controller<R>& ctrl, const R& t, const QuadConfig<R>& cfg) {
    using std::sqrt;
    if (t <= ctrl.basis.d) return R(0);
    const R upper = t < ctrl.T ? t : ctrl.T;
    auto f = [&](const R& s) -> Cplx<R> {
        const R h = controller_value(ctrl, s);
        return Cplx<R>(h * h);
    };
    return sqrt(segment_integral<R>(f, ctrl.basis.d, upper, cfg).re);
}

}  // namespace heatctl
