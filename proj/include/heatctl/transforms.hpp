#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "heatctl/complex.hpp"
#include "heatctl/quadrature.hpp"
#include "heatctl/real.hpp"

namespace heatctl {

// ---------------------------------------------------------------------------
// problem description
// ---------------------------------------------------------------------------

enum class DatumKind { StepPaper, CosineSeries };

// Initial datum: either the reference step (-1 on (0,1/2), +1 on (1/2,1),
// requires L = 1) or a zero-mean cosine series u0(x) = sum c_m (-cos(m pi x / L)).
template <class R>
struct DatumSpec {
    DatumKind kind = DatumKind::StepPaper;
    std::vector<std::pair<unsigned, R>> cosine_coeffs;  // (m, c_m), m distinct

    static DatumSpec step() { return {DatumKind::StepPaper, {}}; }
    static DatumSpec cosine(std::vector<std::pair<unsigned, R>> coeffs) {
        DatumSpec s;
        s.kind = DatumKind::CosineSeries;
        s.cosine_coeffs = std::move(coeffs);
        return s;
    }

    void validate() const {
        if (kind != DatumKind::CosineSeries) return;
        for (std::size_t i = 0; i < cosine_coeffs.size(); ++i) {
            if (cosine_coeffs[i].first < 1)
                throw std::invalid_argument("DatumSpec: cosine mode indices start at 1");
            if (!is_finite(cosine_coeffs[i].second))
                throw std::invalid_argument("DatumSpec: cosine coefficients must be finite");
            for (std::size_t j = i + 1; j < cosine_coeffs.size(); ++j)
                if (cosine_coeffs[i].first == cosine_coeffs[j].first)
                    throw std::invalid_argument("DatumSpec: cosine mode indices must be distinct");
        }
    }

    bool is_trivial() const {
        if (kind != DatumKind::CosineSeries) return false;
        for (const auto& [m, c] : cosine_coeffs)
            if (!(c == 0)) return false;
        return true;
    }
};

template <class R>
struct ProblemSpec {
    R L{1};
    R T{};
    DatumSpec<R> datum;

    void validate() const {
        if (!(L > 0) || !(T > 0))
            throw std::invalid_argument("ProblemSpec: L and T must be positive");
        if (datum.kind == DatumKind::StepPaper && !(L == 1))
            throw std::invalid_argument(
                "ProblemSpec: the step datum closed forms are derived for L = 1");
        datum.validate();
    }
};

// ---------------------------------------------------------------------------
// half-interval Fourier transforms of the data
// ---------------------------------------------------------------------------

// u0hat(lambda) = int_0^1 e^{-i lambda x} u0(x) dx for the step datum:
//   i e^{-i lambda} (e^{i lambda / 2} - 1)^2 / lambda,
// entire, with value 0 at lambda = 0 (zero-mean datum).
template <class R>
Cplx<R> u0hat_step(const Cplx<R>& lambda) {
    if (lambda.re == 0 && lambda.im == 0) return Cplx<R>();
    const Cplx<R> i{R(0), R(1)};
    const Cplx<R> g = expm1(i * lambda / R(2));  // e^{i lambda/2} - 1
    return i * exp(-i * lambda) * sqr(g) / lambda;
}

// Transform of -cos(m pi x / L):
//   i lambda (1 - (-1)^m e^{-i lambda L}) / (lambda^2 - (m pi / L)^2).
// The numerator zero cancels each pole: with mu = m pi / L and
// h = lambda -+ mu,  1 - (-1)^m e^{-i lambda L} = -expm1(-i h L) exactly,
// so dividing expm1 by the nearer h is cancellation-free everywhere.
template <class R>
Cplx<R> u0hat_cosine(const Cplx<R>& lambda, unsigned m, const R& L) {
    if (m < 1) throw std::invalid_argument("u0hat_cosine: m starts at 1");
    const Cplx<R> i{R(0), R(1)};
    const R mu = static_cast<int>(m) * pi_v<R>() / L;
    const Cplx<R> hp = lambda - Cplx<R>(mu);
    const Cplx<R> hm = lambda + Cplx<R>(mu);
    const bool use_p = norm_sq(hp) <= norm_sq(hm);
    const Cplx<R> h = use_p ? hp : hm;
    const Cplx<R> other = use_p ? hm : hp;
    Cplx<R> ratio;  // -expm1(-i h L) / h, limit i L at h = 0
    if (h.re == 0 && h.im == 0)
        ratio = i * L;
    else
        ratio = -(expm1(-i * h * L) / h);
    return i * lambda * ratio / other;
}

// ---------------------------------------------------------------------------
// bounded kernel ratios on the upper rays
// ---------------------------------------------------------------------------

// cos(lambda x)/sin(lambda L) = i e^{i lambda (L-x)} (1 + e^{2 i lambda x}) / expm1(2 i lambda L).
// For Im lambda > 0 and 0 <= x <= L every exponential decays; no overflow at
// any radius. Near lambda = 0 this reduces to the expected 1/(lambda L) pole.
template <class R>
Cplx<R> cos_over_sin(const Cplx<R>& lambda, const R& x, const R& L) {
    const Cplx<R> i{R(0), R(1)};
    const Cplx<R> il = i * lambda;
    return i * exp(il * (L - x)) * (Cplx<R>(R(1)) + exp(il * (2 * x))) / expm1(il * (2 * L));
}

// cos(lambda x)/cos(lambda / 2) = e^{i lambda (1/2 - x)} (1 + e^{2 i lambda x}) / (1 + e^{i lambda}),
// bounded on the upper rays for 0 <= x <= 1/2 (step datum, L = 1).
template <class R>
Cplx<R> cos_over_cos_half(const Cplx<R>& lambda, const R& x) {
    const Cplx<R> i{R(0), R(1)};
    const Cplx<R> il = i * lambda;
    return exp(il * (R(1) / 2 - x)) * (Cplx<R>(R(1)) + exp(il * (2 * x))) /
           (Cplx<R>(R(1)) + exp(il));
}

// ---------------------------------------------------------------------------
// known right-hand-side functions (step datum, L = 1)
// ---------------------------------------------------------------------------

// Q(x, t) = int_C+ cos(lambda x) i e^{-lambda^2 t} / (lambda cos(lambda/2)) dlambda - pi/4
// for x in [0, 1/2]. The two rays of C+ are complex conjugates of each other
// through lambda -> -conj(lambda), so the integrand equals twice the real
// part of the r e^{i pi/8} ray term; the 1/lambda factor absorbs the ray
// measure, leaving the paper's 1/r.
template <class R>
R Q_step(const R& x, const R& t, const QuadConfig<R>& cfg) {
    if (!(x >= 0 && x <= R(1) / 2))
        throw std::invalid_argument("Q_step: requires 0 <= x <= 1/2");
    if (!(t > 0))
        throw std::invalid_argument("Q_step: the representation does not converge at t <= 0");
    const Cplx<R> dir = ContourRay<R>::main().direction();
    const Cplx<R> i{R(0), R(1)};
    auto f = [&](const R& r) -> Cplx<R> {
        const Cplx<R> lambda = r * dir;
        return R(2) * (i * exp(-sqr(lambda) * t) * cos_over_cos_half(lambda, x) / r);
    };
    return ray_integral<R>(f, t, cfg) - pi_v<R>() / 4;
}

// U(x) of the integral equation right-hand side: Q at the horizon.
template <class R>
R U_step(const R& x, const R& T, const QuadConfig<R>& cfg) {
    return Q_step(x, T, cfg);
}

// P(x; 1, t) assembled from Q with the antisymmetric reflection. x = 1/2
// takes the left branch.
template <class R>
R P_step(const R& x, const R& t, const QuadConfig<R>& cfg) {
    if (!(x >= 0 && x <= 1))
        throw std::invalid_argument("P_step: requires 0 <= x <= 1");
    if (x <= R(1) / 2) return Q_step(x, t, cfg);
    return -Q_step(1 - x, t, cfg);
}

// G(x) = P(x; L, T) for the step datum.
template <class R>
R G_step(const R& x, const R& T, const QuadConfig<R>& cfg) {
    return P_step(x, T, cfg);
}

// ---------------------------------------------------------------------------
// cosine modes (general L, T): closed form, no quadrature
// ---------------------------------------------------------------------------

// P for the single mode -cos(m pi x / L): -pi cos(m pi x / L) e^{-(m pi / L)^2 t}.
template <class R>
R G_cosine(const R& x, unsigned m, const R& L, const R& t) {
    using std::cos; using std::exp;
    if (m < 1) throw std::invalid_argument("G_cosine: m starts at 1");
    if (!(x >= 0 && x <= L)) throw std::invalid_argument("G_cosine: requires 0 <= x <= L");
    const R mu = static_cast<int>(m) * pi_v<R>() / L;
    return -pi_v<R>() * cos(mu * x) * exp(-mu * mu * t);
}

// ---------------------------------------------------------------------------
// datum dispatch
// ---------------------------------------------------------------------------

// P(x; L, t) for the configured datum; G(x) is this at t = T.
template <class R>
R P_datum(const R& x, const R& t, const ProblemSpec<R>& spec, const QuadConfig<R>& cfg) {
    if (spec.datum.kind == DatumKind::StepPaper) return P_step(x, t, cfg);
    R acc{};
    for (const auto& [m, c] : spec.datum.cosine_coeffs)
        acc += c * G_cosine(x, m, spec.L, t);
    return acc;
}

template <class R>
R G_datum(const R& x, const ProblemSpec<R>& spec, const QuadConfig<R>& cfg) {
    return P_datum(x, spec.T, spec, cfg);
}

}  // namespace heatctl
