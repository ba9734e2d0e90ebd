#pragma once

#include <cmath>

#include "heatctl/real.hpp"

namespace heatctl {

// Minimal complex-over-R value type. std::complex<T> is only specified for
// the builtin floating types, so the multiprecision instantiations need
// their own; the operation set is exactly what the contour integrands use.
template <class R>
struct Cplx {
    R re{};
    R im{};

    Cplx() = default;
    Cplx(R r) : re(std::move(r)) {}
    Cplx(R r, R i) : re(std::move(r)), im(std::move(i)) {}

    Cplx& operator+=(const Cplx& o) { re += o.re; im += o.im; return *this; }
    Cplx& operator-=(const Cplx& o) { re -= o.re; im -= o.im; return *this; }
};

template <class R> inline Cplx<R> operator+(const Cplx<R>& a, const Cplx<R>& b) { return {a.re + b.re, a.im + b.im}; }
template <class R> inline Cplx<R> operator-(const Cplx<R>& a, const Cplx<R>& b) { return {a.re - b.re, a.im - b.im}; }
template <class R> inline Cplx<R> operator-(const Cplx<R>& a) { return {-a.re, -a.im}; }

template <class R>
inline Cplx<R> operator*(const Cplx<R>& a, const Cplx<R>& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class R> inline Cplx<R> operator*(const R& s, const Cplx<R>& a) { return {s * a.re, s * a.im}; }
template <class R> inline Cplx<R> operator*(const Cplx<R>& a, const R& s) { return {a.re * s, a.im * s}; }

template <class R>
inline Cplx<R> operator/(const Cplx<R>& a, const Cplx<R>& b) {
    const R den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
template <class R> inline Cplx<R> operator/(const Cplx<R>& a, const R& s) { return {a.re / s, a.im / s}; }
template <class R>
inline Cplx<R> operator/(const R& s, const Cplx<R>& b) {
    const R den = b.re * b.re + b.im * b.im;
    return {s * b.re / den, -s * b.im / den};
}

template <class R> inline Cplx<R> conj(const Cplx<R>& a) { return {a.re, -a.im}; }
template <class R> inline R norm_sq(const Cplx<R>& a) { return a.re * a.re + a.im * a.im; }

template <class R>
inline R abs(const Cplx<R>& a) {
    using std::sqrt;
    return sqrt(norm_sq(a));
}

template <class R>
inline Cplx<R> cis(const R& t) {
    using std::cos; using std::sin;
    return {cos(t), sin(t)};
}

template <class R>
inline Cplx<R> exp(const Cplx<R>& z) {
    using std::exp; using std::cos; using std::sin;
    const R m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

// exp(z) - 1 without cancellation for small |z|.
template <class R>
inline Cplx<R> expm1(const Cplx<R>& z) {
    using std::expm1; using std::cos; using std::sin;
    const R em = expm1(z.re);          // e^a - 1
    const R c = cos(z.im), s = sin(z.im);
    const R half = sin(z.im / 2);
    // e^a cos b - 1 = (e^a - 1) cos b - 2 sin^2(b/2)
    return {em * c - 2 * half * half, (em + 1) * s};
}

template <class R>
inline Cplx<R> sin(const Cplx<R>& z) {
    using std::sin; using std::cos; using std::sinh; using std::cosh;
    return {sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im)};
}

template <class R>
inline Cplx<R> cos(const Cplx<R>& z) {
    using std::sin; using std::cos; using std::sinh; using std::cosh;
    return {cos(z.re) * cosh(z.im), -sin(z.re) * sinh(z.im)};
}

template <class R>
inline Cplx<R> sqr(const Cplx<R>& z) {
    return {z.re * z.re - z.im * z.im, 2 * z.re * z.im};
}

template <class R>
inline bool is_finite(const R& x) {
    using std::isnan; using std::isinf;
    return !isnan(x) && !isinf(x);
}

template <class R>
inline bool is_finite(const Cplx<R>& z) {
    return is_finite(z.re) && is_finite(z.im);
}

}  // namespace heatctl
