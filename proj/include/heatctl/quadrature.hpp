#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heatctl/complex.hpp"
#include "heatctl/real.hpp"

namespace heatctl {

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

template <class R>
struct QuadConfig {
    unsigned precision_digits = 30;  // significant decimal digits of working arithmetic
    R rel_tol{};
    R abs_tol{};
    R max_radius{};                  // hard cap on the truncation radius
    unsigned max_refinements = 48;   // panel bisection depth limit

    // Defaults tie the tolerances to the working precision: the adaptive
    // engine targets five digits above roundoff.
    static QuadConfig defaults(unsigned digits = 30) {
        if (digits < 15)
            throw std::invalid_argument("QuadConfig: precision_digits must be >= 15");
        QuadConfig c;
        c.precision_digits = digits;
        c.rel_tol = pow10<R>(-(static_cast<int>(digits) - 5));
        c.abs_tol = c.rel_tol;
        c.max_radius = R(10000);
        return c;
    }

    void validate() const {
        if (precision_digits < 15)
            throw std::invalid_argument("QuadConfig: precision_digits must be >= 15");
        if (!(rel_tol > 0 && rel_tol < 1))
            throw std::invalid_argument("QuadConfig: rel_tol must be in (0,1)");
        if (!(abs_tol > 0 && abs_tol < 1))
            throw std::invalid_argument("QuadConfig: abs_tol must be in (0,1)");
        if (!(max_radius > 0))
            throw std::invalid_argument("QuadConfig: max_radius must be positive");
        if (max_refinements == 0)
            throw std::invalid_argument("QuadConfig: max_refinements must be positive");
    }

    // Exponential-bound tolerance used when picking the truncation radius.
    R truncation_tol() const { return abs_tol * pow10<R>(-6); }
};

// One ray of the deformed contour C+, lambda(r) = r e^{i angle}. The library
// fixes angle = pi/8 (and its mirror 7 pi/8); off the real axis both
// e^{-lambda^2 t} and the 1/sin(lambda L) ratios stay controlled.
template <class R>
struct ContourRay {
    R angle;

    Cplx<R> direction() const { return cis(angle); }
    Cplx<R> lambda(const R& r) const { return r * direction(); }

    static ContourRay main() { return {pi_v<R>() / 8}; }      // r e^{i pi/8}
    static ContourRay mirror() { return {7 * pi_v<R>() / 8}; }  // r e^{7 i pi/8}
};

// ---------------------------------------------------------------------------
// error reporting
// ---------------------------------------------------------------------------

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, std::string best, std::string bound)
        : std::runtime_error(what), best_estimate_(std::move(best)), error_bound_(std::move(bound)) {}
    const std::string& best_estimate() const { return best_estimate_; }
    const std::string& error_bound() const { return error_bound_; }

  private:
    std::string best_estimate_;
    std::string error_bound_;
};

class IntegrandError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class R>
std::string num_str(const R& x) {
    std::ostringstream os;
    os.precision(18);
    os << std::scientific << static_cast<double>(x);
    return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes at working precision
// ---------------------------------------------------------------------------

inline constexpr unsigned kGaussOrder = 30;

template <class R>
struct GaussRule {
    std::vector<R> nodes;    // on (-1, 1)
    std::vector<R> weights;
};

// Newton iteration on P_n; double-precision Chebyshev-like seeds converge in
// a handful of steps at any working precision.
template <class R>
GaussRule<R> compute_gauss_rule(unsigned n) {
    using std::cos; using std::fabs;
    GaussRule<R> rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const R one(1), two(2);
    const R tol = pow10<R>(-(static_cast<int>(real_traits<R>::current_digits()) + 2));
    for (unsigned k = 0; k < (n + 1) / 2; ++k) {
        R x(std::cos(3.141592653589793 * (k + 0.75) / (n + 0.5)));
        R pp{};
        for (int iter = 0; iter < 60; ++iter) {
            R p0(1), p1 = x;
            for (unsigned j = 2; j <= n; ++j) {
                R p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / static_cast<int>(j);
                p0 = p1;
                p1 = p2;
            }
            pp = static_cast<int>(n) * (x * p1 - p0) / (x * x - one);
            const R dx = p1 / pp;
            x -= dx;
            if (fabs(dx) < tol) break;
        }
        const R w = two / ((one - x * x) * pp * pp);
        rule.nodes[k] = -x;
        rule.weights[k] = w;
        rule.nodes[n - 1 - k] = x;
        rule.weights[n - 1 - k] = w;
    }
    return rule;
}

// Shared cache keyed by (order, decimal digits); worker threads running at
// the same precision reuse the same rule.
template <class R>
const GaussRule<R>& gauss_rule(unsigned n) {
    static std::map<std::pair<unsigned, unsigned>, GaussRule<R>> cache;
    static std::mutex mtx;
    const auto key = std::make_pair(n, real_traits<R>::current_digits());
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, compute_gauss_rule<R>(n)).first;
    return it->second;
}

// ---------------------------------------------------------------------------
// adaptive panel engine
// ---------------------------------------------------------------------------

namespace detail {

template <class R>
inline R value_abs(const R& v) { using std::fabs; return fabs(v); }

template <class R>
inline R value_abs(const Cplx<R>& v) { return abs(v); }

template <class R, class V, class F>
V gauss_panel(const F& f, const R& a, const R& b, const GaussRule<R>& rule, std::size_t* evals) {
    const R mid = (a + b) / 2, half = (b - a) / 2;
    V acc{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const R x = mid + half * rule.nodes[i];
        V fx = f(x);
        if (!is_finite(fx))
            throw IntegrandError("integrand returned a non-finite value at r = " + num_str(x));
        acc += rule.weights[i] * fx;
    }
    if (evals) *evals += rule.nodes.size();
    return half * acc;
}

template <class R, class V>
struct AdaptiveState {
    R err_density;      // allowed error per unit width
    R width_floor;      // panels narrower than this are accepted as-is
    unsigned max_depth;
    const GaussRule<R>* rule;
    V total{};
    R err{};
    std::size_t evals = 0;
};

template <class R, class V, class F>
void adapt(const F& f, const R& a, const R& b, const V& whole, unsigned depth, AdaptiveState<R, V>& st) {
    const R mid = (a + b) / 2;
    const V left = gauss_panel<R, V>(f, a, mid, *st.rule, &st.evals);
    const V right = gauss_panel<R, V>(f, mid, b, *st.rule, &st.evals);
    const V refined = left + right;
    const R delta = value_abs(refined - whole);
    if (delta <= st.err_density * (b - a) || (b - a) < st.width_floor) {
        st.total += refined;
        st.err += delta;
        return;
    }
    if (depth >= st.max_depth) {
        st.total += refined;
        st.err += delta;  // carried into the final tolerance check
        return;
    }
    adapt(f, a, mid, left, depth + 1, st);
    adapt(f, mid, b, right, depth + 1, st);
}

// Adaptive Gauss-Legendre with bisection refinement; V is R or Cplx<R>.
template <class R, class V, class F>
std::pair<V, R> adaptive_integral(const F& f, const R& a, const R& b, const R& abs_budget,
                                  const QuadConfig<R>& cfg) {
    AdaptiveState<R, V> st;
    st.err_density = abs_budget / (b - a);
    st.width_floor = (b - a) * pow10<R>(-(static_cast<int>(cfg.precision_digits) - 2));
    st.max_depth = cfg.max_refinements;
    st.rule = &gauss_rule<R>(kGaussOrder);
    const V whole = gauss_panel<R, V>(f, a, b, *st.rule, &st.evals);
    adapt(f, a, b, whole, 0, st);
    return {st.total, st.err};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// truncation radius
// ---------------------------------------------------------------------------

// Smallest R with e^{-R^2 cos(pi/4) t_eff} <= tol, capped at cfg.max_radius.
// t_eff is the smallest exponential time scale present in the integrand.
template <class R>
R truncation_radius(const R& t_eff, const R& tol, const QuadConfig<R>& cfg, bool* cap_hit = nullptr) {
    using std::log; using std::sqrt; using std::cos;
    if (!(t_eff > 0)) throw std::invalid_argument("truncation_radius: t_eff must be positive");
    if (!(tol > 0)) throw std::invalid_argument("truncation_radius: tol must be positive");
    if (cap_hit) *cap_hit = false;
    if (tol >= 1) return R(0);
    const R c = cos(pi_v<R>() / 4);
    const R radius = sqrt(log(1 / tol) / (c * t_eff));
    if (radius > cfg.max_radius) {
        if (cap_hit) *cap_hit = true;
        return cfg.max_radius;
    }
    return radius;
}

// ---------------------------------------------------------------------------
// segment integral (complex-valued, finite interval)
// ---------------------------------------------------------------------------

template <class R, class F>
Cplx<R> segment_integral(const F& f, const R& a, const R& b, const QuadConfig<R>& cfg) {
    if (!(a < b)) throw std::invalid_argument("segment_integral: requires a < b");
    auto [value, err] = detail::adaptive_integral<R, Cplx<R>>(f, a, b, cfg.abs_tol, cfg);
    const R allowed = std::max(cfg.abs_tol, R(cfg.rel_tol * abs(value)));
    if (err > allowed)
        throw QuadratureError("segment_integral: refinement failed to meet tolerance",
                              detail::num_str(abs(value)), detail::num_str(err));
    return value;
}

// ---------------------------------------------------------------------------
// ray integral: int_0^inf Re[f(r)] dr
// ---------------------------------------------------------------------------

// Layout: [0, eps] origin panel evaluated from the Re[f](0+) limit (one
// Richardson extrapolation step), adaptive core on [eps, R], and the tail
// [R, inf) mapped through r = R/u onto (0, 1]. The map handles the
// integrands whose residual decay past the Gaussian core is only algebraic
// (collocation points at x = L) or linearly exponential.
template <class R, class F>
R ray_integral(const F& f, const R& t_eff, const QuadConfig<R>& cfg, const R& origin_eps = R(0)) {
    using std::sqrt; using std::fabs;
    const R safety(R(3) / 2);
    R radius = truncation_radius(t_eff, cfg.truncation_tol(), cfg) * safety;
    if (radius > cfg.max_radius) radius = cfg.max_radius;
    if (radius < R(1)) radius = R(1);

    auto re_f = [&f](const R& r) -> R {
        const Cplx<R> v = f(r);
        if (!is_finite(v))
            throw IntegrandError("ray integrand returned a non-finite value at r = " + detail::num_str(r));
        return v.re;
    };

    // origin: the imaginary 1/r parts cancel in Re[.]; the remaining even
    // extension is linear through 0 to leading order.
    const R eps = origin_eps > 0 ? origin_eps : R(sqrt(cfg.abs_tol));
    const R f_eps = re_f(eps);
    const R f_half = re_f(eps / 2);
    const R f_limit = 2 * f_half - f_eps;
    const R origin = eps * (f_limit + f_eps) / 2;

    const R budget = cfg.abs_tol / 2;
    auto [core, core_err] = detail::adaptive_integral<R, R>(re_f, eps, radius, budget, cfg);

    auto tail_f = [&re_f, &radius](const R& u) -> R {
        return re_f(radius / u) * radius / (u * u);
    };
    auto [tail, tail_err] = detail::adaptive_integral<R, R>(tail_f, R(0), R(1), budget, cfg);

    const R value = origin + core + tail;
    const R err = core_err + tail_err;
    const R allowed = std::max(cfg.abs_tol, R(cfg.rel_tol * fabs(value)));
    if (err > allowed)
        throw QuadratureError("ray_integral: refinement failed to meet tolerance",
                              detail::num_str(value), detail::num_str(err));
    return value;
}

}  // namespace heatctl
