#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "bellap/errors.hpp"

namespace bellap {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer factorial(int n) {
    if (n < 0) throw domain_error("factorial of negative argument");
    Integer r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline Integer binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Integer r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;  // exact at every step: r is C(n-k+i, i)
    }
    return r;
}

inline Integer pow_int(const Integer& base, int e) {
    if (e < 0) throw domain_error("negative integer power");
    Integer r = 1, b = base;
    for (; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

inline Rational pow_rat(const Rational& base, int e) {
    if (e < 0) {
        if (base == 0) throw domain_error("zero to a negative power");
        return Rational(pow_int(denominator(base), -e), pow_int(numerator(base), -e));
    }
    return Rational(pow_int(numerator(base), e), pow_int(denominator(base), e));
}

inline double to_double(const Rational& q) {
    return q.convert_to<double>();
}

// "p/q", plain integers, or decimals like "0.25" (exact: 25/100).
inline Rational parse_rational(std::string_view text) {
    auto fail = [&] {
        throw domain_error("not a rational literal: '" + std::string(text) + "'");
    };
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) fail();
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        std::string_view num = text.substr(0, slash);
        std::string_view den = text.substr(slash + 1);
        if (num.empty() || den.empty() || den.find('/') != std::string_view::npos) fail();
        try {
            Integer p{std::string(num)}, q{std::string(den)};
            if (q == 0) throw domain_error("zero denominator in '" + std::string(text) + "'");
            return Rational(p, q);
        } catch (const std::exception&) {
            fail();
        }
    }
    auto dot = text.find('.');
    if (dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if (frac.empty() || frac.find_first_not_of("0123456789") != std::string_view::npos) fail();
        bool neg = !whole.empty() && whole.front() == '-';
        if (!whole.empty() && (whole.front() == '+' || whole.front() == '-'))
            whole.remove_prefix(1);
        if (whole.empty() && frac.empty()) fail();
        try {
            Integer w = whole.empty() ? Integer(0) : Integer{std::string(whole)};
            Integer f{std::string(frac)};
            Integer scale = pow_int(10, static_cast<int>(frac.size()));
            Rational r = Rational(w) + Rational(f, scale);
            return neg ? -r : r;
        } catch (const std::exception&) {
            fail();
        }
    }
    try {
        return Rational(Integer{std::string(text)});
    } catch (const std::exception&) {
        fail();
    }
    return {};  // unreachable
}

inline std::string to_fraction_string(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

}  // namespace bellap
