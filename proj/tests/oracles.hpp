#pragma once

// Test-only oracles. Each one reaches a quantity the library also computes,
// through an independent route: direct quadrature of defining integrals, the
// undeformed pi/4 contours, or closed-form small-matrix algebra. They are
// deliberately written against the raw formulas (no shared kernel ratios),
// at the cost of speed.

#include <vector>

#include "heatctl/assembly.hpp"
#include "heatctl/transforms.hpp"

namespace oracles {

using heatctl::Cplx;
using heatctl::QuadConfig;

// int_0^L e^{-i lambda x} u0(x) dx by direct quadrature.
template <class R>
Cplx<R> u0hat_step_quad(const Cplx<R>& lambda, const QuadConfig<R>& cfg) {
    const Cplx<R> mi{R(0), R(-1)};
    auto lo = [&](const R& x) { return -heatctl::exp(mi * lambda * x); };
    auto hi = [&](const R& x) { return heatctl::exp(mi * lambda * x); };
    return heatctl::segment_integral<R>(lo, R(0), R(1) / 2, cfg) +
           heatctl::segment_integral<R>(hi, R(1) / 2, R(1), cfg);
}

template <class R>
Cplx<R> u0hat_cosine_quad(const Cplx<R>& lambda, unsigned m, const R& L, const QuadConfig<R>& cfg) {
    using std::cos;
    const Cplx<R> mi{R(0), R(-1)};
    const R mu = static_cast<int>(m) * heatctl::pi_v<R>() / L;
    auto f = [&](const R& x) { return R(-cos(mu * x)) * heatctl::exp(mi * lambda * x); };
    return heatctl::segment_integral<R>(f, R(0), L, cfg);
}

// Two-ray contour integral at an arbitrary upper-half angle theta:
//   int_0^inf [ f(r e^{i theta}) e^{i theta} - f(r e^{i (pi-theta)}) e^{i (pi-theta)} ] dr
// truncated at r_max. Used for contour-independence checks.
template <class R, class F>
Cplx<R> upper_pair_integral(const F& f, const R& theta, const R& r_max, const QuadConfig<R>& cfg) {
    const Cplx<R> e1 = heatctl::cis(theta);
    const Cplx<R> e2 = heatctl::cis(heatctl::pi_v<R>() - theta);
    auto g = [&](const R& r) -> Cplx<R> {
        return f(r * e1) * e1 - f(r * e2) * e2;
    };
    return heatctl::segment_integral<R>(g, heatctl::pow10<R>(-15), r_max, cfg);
}

// Mirror pair on the lower half-plane, traversed right to left:
//   int_0^inf [ f(r e^{-i (pi-theta)}) e^{-i (pi-theta)} - f(r e^{-i theta}) e^{-i theta} ] dr.
template <class R, class F>
Cplx<R> lower_pair_integral(const F& f, const R& theta, const R& r_max, const QuadConfig<R>& cfg) {
    const Cplx<R> e1 = heatctl::cis(-theta);
    const Cplx<R> e2 = heatctl::cis(theta - heatctl::pi_v<R>());
    auto g = [&](const R& r) -> Cplx<R> {
        return f(r * e2) * e2 - f(r * e1) * e1;
    };
    return heatctl::segment_integral<R>(g, heatctl::pow10<R>(-15), r_max, cfg);
}

// P(x; L, T) straight from its definition, with the D+/D- boundaries kept at
// the undeformed angle pi/4 and the data transform supplied as a callable.
// Validates the production contour bookkeeping (deformation to pi/8 and the
// collected residue constants).
template <class R, class U0>
R defP_pi4(const R& x, const R& L, const R& T, const U0& u0hat, const R& r_line, const R& r_ray,
           const QuadConfig<R>& cfg) {
    const Cplx<R> i{R(0), R(1)};
    auto E = [&](const Cplx<R>& lam) {
        return heatctl::exp(i * lam * x - heatctl::sqr(lam) * T);
    };
    auto line = [&](const R& lam_re) -> Cplx<R> {
        const Cplx<R> lam{lam_re, R(0)};
        return E(lam) * u0hat(lam);
    };
    const Cplx<R> I_line = heatctl::segment_integral<R>(line, -r_line, r_line, cfg);

    auto brk_plus = [&](const Cplx<R>& lam) -> Cplx<R> {
        const Cplx<R> up = heatctl::exp(i * lam * L);
        const Cplx<R> dn = heatctl::exp(-(i * lam * L));
        return E(lam) * (up * u0hat(lam) + dn * u0hat(-lam)) / (up - dn);
    };
    auto brk_minus = [&](const Cplx<R>& lam) -> Cplx<R> {
        const Cplx<R> up = heatctl::exp(i * lam * L);
        const Cplx<R> dn = heatctl::exp(-(i * lam * L));
        return E(lam) * (dn * u0hat(lam) + dn * u0hat(-lam)) / (up - dn);
    };
    const R quarter = heatctl::pi_v<R>() / 4;
    const Cplx<R> I_dp = upper_pair_integral<R>(brk_plus, quarter, r_ray, cfg);
    const Cplx<R> I_dm = lower_pair_integral<R>(brk_minus, quarter, r_ray, cfg);
    return ((I_line - I_dp - I_dm) / R(2)).re;
}

// 3x3 solve by the adjugate (Cramer).
template <class R>
std::vector<R> cramer3(const heatctl::Matrix<R>& a, const std::vector<R>& b) {
    auto det3 = [](const R& a11, const R& a12, const R& a13, const R& a21, const R& a22,
                   const R& a23, const R& a31, const R& a32, const R& a33) {
        return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
               a13 * (a21 * a32 - a22 * a31);
    };
    const R det = det3(a(0, 0), a(0, 1), a(0, 2), a(1, 0), a(1, 1), a(1, 2), a(2, 0), a(2, 1), a(2, 2));
    std::vector<R> x(3);
    x[0] = det3(b[0], a(0, 1), a(0, 2), b[1], a(1, 1), a(1, 2), b[2], a(2, 1), a(2, 2)) / det;
    x[1] = det3(a(0, 0), b[0], a(0, 2), a(1, 0), b[1], a(1, 2), a(2, 0), b[2], a(2, 2)) / det;
    x[2] = det3(a(0, 0), a(0, 1), b[0], a(1, 0), a(1, 1), b[1], a(2, 0), a(2, 1), b[2]) / det;
    return x;
}

// Matrix entry with the contour at angle theta instead of pi/8 (analyticity
// of the integrand between the rays makes the value angle-independent).
template <class R>
R matrix_entry_at_angle(unsigned n, const R& xk, const heatctl::ProblemSpec<R>& spec,
                        const heatctl::BasisConfig<R>& basis, const R& theta, const R& r_max,
                        const QuadConfig<R>& cfg) {
    const Cplx<R> i{R(0), R(1)};
    auto f = [&](const Cplx<R>& lam) -> Cplx<R> {
        return i * heatctl::cos(lam * xk) * heatctl::damped_B(n, lam, basis.d, spec.T) /
               heatctl::sin(lam * spec.L);
    };
    return -upper_pair_integral<R>(f, theta, r_max, cfg).re;
}

}  // namespace oracles
