#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <string>

namespace icelab {

using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<60>>;

// Relative slack used when comparing Real results; rationals compare exactly.
inline const Real& real_slack() {
    static const Real s("1e-30");
    return s;
}

template <class S>
S ipow(S base, long e) {
    if (e < 0) return S(1) / ipow(base, -e);
    S r(1);
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

template <class S>
bool exact_scalar() {
    return std::is_same_v<S, Rational>;
}

template <class S>
double to_double(const S& x) {
    if constexpr (std::is_same_v<S, double>)
        return x;
    else
        return x.template convert_to<double>();
}

// a == b up to the scalar's comparison slack
template <class S>
bool nearly_equal(const S& a, const S& b) {
    if constexpr (std::is_same_v<S, Rational>) {
        return a == b;
    } else if constexpr (std::is_same_v<S, double>) {
        return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
    } else {
        using std::abs;
        S scale = abs(a) > abs(b) ? abs(a) : abs(b);
        if (scale < 1) scale = 1;
        return abs(a - b) <= real_slack() * scale;
    }
}

// Relative deviation |a-b| / max(|a|,|b|) as a double, for reports.
template <class S>
double relative_deviation(const S& a, const S& b) {
    using std::abs;
    S scale = abs(a) > abs(b) ? S(abs(a)) : S(abs(b));
    if (scale == 0) return 0.0;
    return to_double(S(abs(a - b) / scale));
}

// Parse a decimal such as "2.5" into an exact rational.
Rational parse_rational(const std::string& text);

}  // namespace icelab
