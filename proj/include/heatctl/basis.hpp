#pragma once

#include <stdexcept>

#include "heatctl/complex.hpp"
#include "heatctl/real.hpp"

namespace heatctl {

// Sine-Fourier controller basis supported on [d, T]:
//   phi_n(t) = sin(pi n (t - d)/(T - d)) on [d, T], zero elsewhere,
// n = 1 .. N+1. The delay d holds the controller at zero while the free
// flow smooths the initial datum.
template <class R>
struct BasisConfig {
    unsigned N = 8;  // basis size is N+1
    R d{};           // activation delay, 0 <= d < T

    void validate(const R& T) const {
        if (!(d >= 0 && d < T))
            throw std::invalid_argument("BasisConfig: requires 0 <= d < T");
    }
};

template <class R>
R phi(unsigned n, const R& t, const R& d, const R& T) {
    using std::sin;
    if (n < 1) throw std::invalid_argument("phi: n starts at 1");
    if (t <= d || t >= T) return R(0);
    return sin(pi_v<R>() * static_cast<int>(n) * (t - d) / (T - d));
}

// B_n(lambda) = int_0^T e^{lambda^2 s} phi_n(s) ds, closed form. Contains
// e^{+lambda^2 T}; on the contour rays Re lambda^2 grows like r^2, so this
// form is for moderate |lambda| only (oracle checks). Contour-facing code
// uses damped_B below.
template <class R>
Cplx<R> B_naive(unsigned n, const Cplx<R>& lambda, const R& d, const R& T) {
    const R pin = pi_v<R>() * static_cast<int>(n);
    const R sign = (n % 2 == 0) ? R(1) : R(-1);
    const Cplx<R> w = sqr(lambda);
    const Cplx<R> num = (pin * (d - T)) * (sign * exp(w * T) - exp(w * d));
    const Cplx<R> den = sqr(sqr(lambda)) * ((d - T) * (d - T)) + Cplx<R>(pin * pin);
    if (abs(den) < pow10<R>(-(static_cast<int>(real_traits<R>::current_digits()))) * pin * pin)
        throw std::domain_error("B_naive: denominator below precision floor");
    return num / den;
}

namespace detail {

// expm1(delta * tau) / delta with the tau limit at delta = 0.
template <class R>
Cplx<R> expm1_over(const Cplx<R>& delta, const R& tau) {
    if (delta.re == 0 && delta.im == 0) return Cplx<R>(tau);
    return expm1(delta * tau) / delta;
}

}  // namespace detail

// e^{-lambda^2 t} b_n(lambda, t), the combination in which every
// exponential has a nonpositive real exponent on C+. Writing
// A = lambda^2 (d - T), the denominator factors as (A - i pi n)(A + i pi n);
// expanding the numerator about the nearer root keeps the removable zeros
// (which sit on arg lambda^2 = +-pi/2) cancellation-free, so the pi/4-ray
// oracle route can evaluate it too.
template <class R>
Cplx<R> damped_b(unsigned n, const Cplx<R>& lambda, const R& t, const R& d, const R& T) {
    using std::sin; using std::cos;
    if (n < 1) throw std::invalid_argument("damped_b: n starts at 1");
    if (t <= d) return Cplx<R>();
    const R tc = t < T ? t : T;  // b_n is constant past T: phi_n vanishes there
    const R pin = pi_v<R>() * static_cast<int>(n);
    const R tau = (tc - d) / (T - d);
    const R theta = pin * tau;
    const R st = sin(theta), ct = cos(theta);

    const Cplx<R> A = sqr(lambda) * (d - T);
    const Cplx<R> root_p{R(0), pin};
    const Cplx<R> dp = A - root_p, dm = A + root_p;
    const bool near_p = norm_sq(dp) <= norm_sq(dm);
    const Cplx<R> delta = near_p ? dp : dm;
    const Cplx<R> other = near_p ? dm : dp;
    // e^{s tau} with s the chosen root +- i pi n
    const Cplx<R> es = near_p ? Cplx<R>(ct, st) : Cplx<R>(ct, -st);
    // N_b/(A - s) = (d-T) [ sin(theta) - pi n e^{s tau} expm1((A-s)tau)/(A-s) ]
    const Cplx<R> reduced = (d - T) * (Cplx<R>(st) - (pin * es) * detail::expm1_over(delta, tau));
    Cplx<R> value = reduced / other;
    // restore the pure damping for t beyond the basis support
    if (t > T) value = exp(sqr(lambda) * (T - t)) * value;
    return value;
}

// e^{-lambda^2 T} B_n(lambda); same code path as damped_b at t = T.
template <class R>
Cplx<R> damped_B(unsigned n, const Cplx<R>& lambda, const R& d, const R& T) {
    return damped_b(n, lambda, T, d, T);
}

// b_n(lambda, t) = int_0^t e^{lambda^2 s} phi_n(s) ds (naive form, moderate
// |lambda| oracle use only).
template <class R>
Cplx<R> b_naive(unsigned n, const Cplx<R>& lambda, const R& t, const R& d, const R& T) {
    if (t <= d) return Cplx<R>();
    const R tc = t < T ? t : T;
    return exp(sqr(lambda) * tc) * damped_b(n, lambda, tc, d, T);
}

}  // namespace heatctl
