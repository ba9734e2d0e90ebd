#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <stdexcept>
#include <string>

namespace heatctl {

// Arbitrary-precision real with run-time adjustable precision. All library
// code is templated on the real type; `mpreal` is what the CLI instantiates,
// `double` works for quick low-accuracy runs and some of the tests.
using mpreal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                             boost::multiprecision::et_off>;

template <class R>
struct real_traits;

template <>
struct real_traits<double> {
    static constexpr bool variable_precision = false;
    static double from_string(const std::string& s) { return std::stod(s); }
    static unsigned current_digits() { return 16; }
};

template <>
struct real_traits<mpreal> {
    static constexpr bool variable_precision = true;
    static mpreal from_string(const std::string& s) { return mpreal(s); }
    static unsigned current_digits() { return mpreal::default_precision(); }
};

// Sets the working precision (decimal digits) for all mpreal values
// constructed afterwards on this thread.
inline void set_working_precision(unsigned digits) {
    if (digits < 15)
        throw std::invalid_argument("working precision must be at least 15 digits");
    mpreal::default_precision(digits);
}

// pi at the current working precision, cached per thread.
template <class R>
inline const R& pi_v() {
    thread_local R value{};
    thread_local unsigned cached_digits = 0;
    const unsigned digits = real_traits<R>::current_digits();
    if (cached_digits != digits) {
        value = acos(R(-1));
        cached_digits = digits;
    }
    return value;
}

template <class R>
inline R pow10(int exponent) {
    return pow(R(10), exponent);
}

}  // namespace heatctl
