#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <sstream>
#include <string>

#include "pathsys/errors.hpp"

namespace pathsys {

// Exact arithmetic throughout: GMP-backed rationals (always canonical,
// positive denominator) and integers for polynomial coefficients.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// "p/q" when q != 1, plain "p" otherwise.
inline std::string format_rational(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

/**
 * Parse an exact rational from "p/q", an integer, or a decimal/scientific
 * literal ("1.5", "1e-8" -> 1/100000000). Decimals convert exactly.
 */
inline Rational parse_rational(const std::string& text) {
    std::string s = text;
    // trim
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    auto e = s.find_last_not_of(ws);
    if (b == std::string::npos) throw FormatError("empty rational literal");
    s = s.substr(b, e - b + 1);

    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            Integer num(s.substr(0, slash));
            Integer den(s.substr(slash + 1));
            if (den == 0) throw FormatError("zero denominator: " + text);
            return Rational(num, den);
        }

        // decimal / scientific form
        std::string mant = s;
        long exp10 = 0;
        auto epos = s.find_first_of("eE");
        if (epos != std::string::npos) {
            mant = s.substr(0, epos);
            exp10 = std::stol(s.substr(epos + 1));
        }
        std::string digits = mant;
        auto dot = mant.find('.');
        if (dot != std::string::npos) {
            digits = mant.substr(0, dot) + mant.substr(dot + 1);
            exp10 -= static_cast<long>(mant.size() - dot - 1);
        }
        if (digits.empty() || digits == "+" || digits == "-")
            throw FormatError("bad rational literal: " + text);
        Rational r{Integer(digits)};
        Integer pow10 = 1;
        for (long i = 0; i < (exp10 < 0 ? -exp10 : exp10); ++i) pow10 *= 10;
        if (exp10 >= 0)
            r *= Rational(pow10);
        else
            r /= Rational(pow10);
        return r;
    } catch (const std::exception&) {
        throw FormatError("bad rational literal: " + text);
    }
}

/// Rational interval with independently open/closed endpoints.
struct RatInterval {
    Rational lo;
    Rational hi;
    bool lo_open = false;
    bool hi_open = false;

    bool empty() const {
        if (lo < hi) return false;
        if (lo > hi) return true;
        return lo_open || hi_open;  // degenerate point must be closed-closed
    }

    bool is_point() const { return lo == hi && !lo_open && !hi_open; }

    bool contains(const Rational& x) const {
        if (x < lo || x > hi) return false;
        if (x == lo && lo_open) return false;
        if (x == hi && hi_open) return false;
        return true;
    }

    Rational width() const { return hi - lo; }

    Rational midpoint() const { return (lo + hi) / 2; }

    /// Some rational strictly inside (lo, hi); requires lo < hi.
    Rational interior_point() const { return (lo + hi) / 2; }

    std::string str() const {
        std::string s = lo_open ? "(" : "[";
        s += format_rational(lo) + ", " + format_rational(hi);
        s += hi_open ? ")" : "]";
        return s;
    }
};

inline RatInterval closed_interval(const Rational& lo, const Rational& hi) {
    return RatInterval{lo, hi, false, false};
}

inline RatInterval point_interval(const Rational& x) {
    return RatInterval{x, x, false, false};
}

}  // namespace pathsys
