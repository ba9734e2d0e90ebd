#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "heatctl/assembly.hpp"
#include "heatctl/parallel.hpp"
#include "heatctl/quadrature.hpp"
#include "heatctl/transforms.hpp"

namespace heatctl {

template <class R>
struct SolutionSample {
    std::vector<R> xs;
    std::vector<R> ts;
    Matrix<R> values;  // values(i, j) = u(xs[j], ts[i])
};

// u(x, t) = (1/pi) P(x; L, t) + (1/pi) int_C+ cos(lambda x) i e^{-lambda^2 t}
// htilde(lambda^2, t) / sin(lambda L) dlambda, with htilde expanded over the
// basis so only the damped b_n combinations appear on the contour.
template <class R>
R solution_value(const R& x, const R& t, const Controller<R>& ctrl, const ProblemSpec<R>& spec,
                 const QuadConfig<R>& cfg) {
    if (!(t > 0))
        throw std::invalid_argument("solution_value: the representation requires t > 0");
    if (!(x >= 0 && x <= spec.L))
        throw std::invalid_argument("solution_value: x outside [0, L]");
    R value = P_datum(x, t, spec, cfg);
    if (t > ctrl.basis.d && !ctrl.alpha.empty()) {
        const Cplx<R> dir = ContourRay<R>::main().direction();
        const Cplx<R> i{R(0), R(1)};
        auto f = [&](const R& r) -> Cplx<R> {
            const Cplx<R> lambda = r * dir;
            Cplx<R> hb{};
            for (std::size_t n = 1; n <= ctrl.alpha.size(); ++n)
                hb += ctrl.alpha[n - 1] * damped_b(static_cast<unsigned>(n), lambda, t,
                                                   ctrl.basis.d, ctrl.T);
            return R(2) * (i * cos_over_sin(lambda, x, spec.L) * hb * dir);
        };
        value += ray_integral<R>(f, t - ctrl.basis.d, cfg);
    }
    return value / pi_v<R>();
}

// Classical separation-of-variables series for the pure-Neumann problem,
// valid while the controller is inactive (t <= d). For the step datum the
// Neumann-cosine coefficients are c_m = -4 sin(m pi / 2) / (m pi).
template <class R>
R free_evolution_oracle(const R& x, const R& t, const ProblemSpec<R>& spec, unsigned M = 2001) {
    using std::sin; using std::cos; using std::exp;
    const R pi = pi_v<R>();
    R acc{};
    if (spec.datum.kind == DatumKind::StepPaper) {
        for (unsigned m = 1; m <= M; m += 2) {  // even modes vanish
            const int mm = static_cast<int>(m);
            const R mu = mm * pi / spec.L;
            const R cm = -4 * sin(mm * pi / 2) / (mm * pi);
            acc += cm * cos(mu * x) * exp(-mu * mu * t);
        }
    } else {
        for (const auto& [m, c] : spec.datum.cosine_coeffs) {
            const R mu = static_cast<int>(m) * pi / spec.L;
            acc += -c * cos(mu * x) * exp(-mu * mu * t);
        }
    }
    return acc;
}

// ||u(., T)||_{L2(0,L)} via a fixed 64-node Gauss-Legendre rule at working
// precision; u(., T) is smooth, so the rule error is negligible against the
// quantities measured.
inline constexpr unsigned kNormNodes = 64;

template <class R>
R terminal_error_norm(const Controller<R>& ctrl, const ProblemSpec<R>& spec,
                      const QuadConfig<R>& cfg, unsigned threads = 0) {
    using std::sqrt;
    const auto& rule = gauss_rule<R>(kNormNodes);
    const R half = spec.L / 2;
    std::vector<R> contrib(rule.nodes.size());
    parallel_for(rule.nodes.size(), [&](std::size_t i) {
        const R x = half + half * rule.nodes[i];
        const R u = solution_value(x, spec.T, ctrl, spec, cfg);
        contrib[i] = rule.weights[i] * u * u;
    }, threads);
    R acc{};
    for (const R& c : contrib) acc += c;
    return sqrt(half * acc);
}

// Rectangular grid of u(x, t) samples for plot export. t starts at t_min
// (the representation is not evaluated at t = 0).
template <class R>
SolutionSample<R> surface_sample(const Controller<R>& ctrl, const ProblemSpec<R>& spec,
                                 unsigned x_count, unsigned t_count, const QuadConfig<R>& cfg,
                                 const R& t_min, unsigned threads = 0) {
    if (x_count < 2 || t_count < 2)
        throw std::invalid_argument("surface_sample: grid counts must be >= 2");
    if (!(t_min > 0 && t_min <= spec.T))
        throw std::invalid_argument("surface_sample: t range must lie within (0, T]");
    SolutionSample<R> out;
    out.xs.resize(x_count);
    out.ts.resize(t_count);
    for (unsigned j = 0; j < x_count; ++j)
        out.xs[j] = spec.L * static_cast<int>(j) / static_cast<int>(x_count - 1);
    for (unsigned i = 0; i < t_count; ++i)
        out.ts[i] = t_min + (spec.T - t_min) * static_cast<int>(i) / static_cast<int>(t_count - 1);
    out.values = Matrix<R>(t_count, x_count);
    parallel_for(static_cast<std::size_t>(t_count) * x_count, [&](std::size_t idx) {
        const unsigned i = static_cast<unsigned>(idx / x_count);
        const unsigned j = static_cast<unsigned>(idx % x_count);
        out.values(i, j) = solution_value(out.xs[j], out.ts[i], ctrl, spec, cfg);
    }, threads);
    return out;
}

}  // namespace heatctl
