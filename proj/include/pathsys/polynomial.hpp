#pragma once

#include <algorithm>
#include <initializer_list>
#include <string>
#include <vector>

#include "pathsys/errors.hpp"
#include "pathsys/rational.hpp"

namespace pathsys {

/**
 * Univariate polynomial in the parameter t with exact integer coefficients,
 * stored ascending (c[i] is the coefficient of t^i) with trailing zeros
 * trimmed. The zero polynomial has an empty coefficient list.
 */
struct IntPoly {
    std::vector<Integer> c;

    IntPoly() = default;

    /// Ascending coefficients: IntPoly{{12, -10, -3, 2}} is 2t^3-3t^2-10t+12.
    explicit IntPoly(std::vector<Integer> coeffs) : c(std::move(coeffs)) { trim(); }

    static IntPoly constant(const Integer& k) {
        return k == 0 ? IntPoly() : IntPoly({k});
    }

    /// a + b*t
    static IntPoly linear(const Integer& a, const Integer& b) {
        return IntPoly({a, b});
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c.size()) - 1; }

    bool is_constant() const { return c.size() <= 1; }

    Integer constant_value() const { return c.empty() ? Integer(0) : c[0]; }

    Rational eval(const Rational& t) const {
        Rational v = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + Rational(*it);
        return v;
    }

    int sign_at(const Rational& t) const {
        Rational v = eval(t);
        return v > 0 ? 1 : (v < 0 ? -1 : 0);
    }

    IntPoly derivative() const {
        if (c.size() <= 1) return IntPoly();
        std::vector<Integer> d(c.size() - 1);
        for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * Integer(i);
        return IntPoly(std::move(d));
    }

    /// gcd of coefficients, always >= 0; 0 for the zero polynomial.
    Integer content() const {
        Integer g = 0;
        for (const auto& k : c) g = gcd(g, k);
        return g < 0 ? Integer(-g) : g;
    }

    /// Divide by the (positive) content; sign of the polynomial is preserved.
    IntPoly primitive() const {
        Integer g = content();
        if (g == 0 || g == 1) return *this;
        std::vector<Integer> d(c.size());
        for (size_t i = 0; i < c.size(); ++i) d[i] = c[i] / g;
        return IntPoly(std::move(d));
    }

    /// Primitive part with positive leading coefficient (display/comparison form).
    IntPoly normalized() const {
        IntPoly p = primitive();
        if (!p.c.empty() && p.c.back() < 0)
            for (auto& k : p.c) k = -k;
        return p;
    }

    bool operator==(const IntPoly& o) const { return c == o.c; }
    bool operator!=(const IntPoly& o) const { return c != o.c; }

    /// Human-readable descending form, e.g. "2t^3-3t^2-10t+12".
    std::string str() const {
        if (c.empty()) return "0";
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            const Integer& k = c[i];
            if (k == 0) continue;
            Integer a = k < 0 ? Integer(-k) : k;
            if (!s.empty())
                s += (k < 0) ? "-" : "+";
            else if (k < 0)
                s += "-";
            bool unit = (a == 1);
            if (i == 0) {
                s += a.str();
            } else {
                if (!unit) s += a.str();
                s += "t";
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s.empty() ? "0" : s;
    }
};

inline IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<Integer> c(std::max(a.c.size(), b.c.size()), Integer(0));
    for (size_t i = 0; i < a.c.size(); ++i) c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) c[i] += b.c[i];
    return IntPoly(std::move(c));
}

inline IntPoly operator-(const IntPoly& a) {
    std::vector<Integer> c = a.c;
    for (auto& k : c) k = -k;
    return IntPoly(std::move(c));
}

inline IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

inline IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return IntPoly();
    std::vector<Integer> c(a.c.size() + b.c.size() - 1, Integer(0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) c[i + j] += a.c[i] * b.c[j];
    return IntPoly(std::move(c));
}

inline IntPoly operator*(const Integer& k, const IntPoly& a) {
    std::vector<Integer> c = a.c;
    for (auto& x : c) x *= k;
    return IntPoly(std::move(c));
}

namespace detail {

// Dense rational polynomials, ascending; used only for gcd / Sturm chains.
using RatPoly = std::vector<Rational>;

inline void rp_trim(RatPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline RatPoly rp_from(const IntPoly& p) {
    RatPoly r(p.c.size());
    for (size_t i = 0; i < p.c.size(); ++i) r[i] = Rational(p.c[i]);
    return r;
}

inline Rational rp_eval(const RatPoly& p, const Rational& t) {
    Rational v = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * t + *it;
    return v;
}

inline int rp_sign(const RatPoly& p, const Rational& t) {
    Rational v = rp_eval(p, t);
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

inline RatPoly rp_derivative(const RatPoly& p) {
    if (p.size() <= 1) return {};
    RatPoly d(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * Rational(Integer(i));
    return d;
}

/// Remainder of a / b; b nonzero.
inline RatPoly rp_rem(RatPoly a, const RatPoly& b) {
    rp_trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rational q = a.back() / b.back();
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= q * b[i];
        a.pop_back();
        rp_trim(a);
    }
    return a;
}

/// Exact quotient of a / b when the division is known to be exact.
inline RatPoly rp_div_exact(RatPoly a, const RatPoly& b) {
    rp_trim(a);
    RatPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
    while (a.size() >= b.size() && !a.empty()) {
        Rational f = a.back() / b.back();
        size_t shift = a.size() - b.size();
        q[shift] = f;
        for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        a.pop_back();
        rp_trim(a);
    }
    return q;
}

inline RatPoly rp_monic(RatPoly p) {
    rp_trim(p);
    if (p.empty()) return p;
    Rational lead = p.back();
    for (auto& x : p) x /= lead;
    return p;
}

inline RatPoly rp_gcd(RatPoly a, RatPoly b) {
    rp_trim(a);
    rp_trim(b);
    while (!b.empty()) {
        RatPoly r = rp_rem(a, b);
        a = std::move(b);
        b = rp_monic(std::move(r));
    }
    return rp_monic(std::move(a));
}

/// Integer polynomial with the same roots, all simple (p / gcd(p, p')).
inline IntPoly square_free_part(const IntPoly& p) {
    RatPoly rp = rp_from(p);
    RatPoly g = rp_gcd(rp, rp_derivative(rp));
    RatPoly sf = g.size() <= 1 ? rp : rp_div_exact(rp, g);
    // clear denominators
    Integer lcm_den = 1;
    for (const auto& x : sf) lcm_den = lcm(lcm_den, denominator(x));
    std::vector<Integer> c(sf.size());
    for (size_t i = 0; i < sf.size(); ++i)
        c[i] = numerator(sf[i]) * (lcm_den / denominator(sf[i]));
    return IntPoly(std::move(c)).primitive();
}

/// Divide p by (t - r); exact when r is a root.
inline RatPoly rp_deflate(const RatPoly& p, const Rational& r) {
    return rp_div_exact(p, RatPoly{-r, Rational(1)});
}

/// Sturm chain of a square-free polynomial.
inline std::vector<RatPoly> sturm_chain(const RatPoly& p) {
    std::vector<RatPoly> chain;
    RatPoly a = p;
    rp_trim(a);
    if (a.empty()) return chain;
    chain.push_back(a);
    RatPoly b = rp_derivative(a);
    rp_trim(b);
    while (!b.empty()) {
        chain.push_back(b);
        RatPoly r = rp_rem(a, b);
        for (auto& x : r) x = -x;
        rp_trim(r);
        a = std::move(b);
        b = rp_monic(std::move(r));  // scaling by a positive factor is harmless
    }
    return chain;
}

inline int sign_variations(const std::vector<RatPoly>& chain, const Rational& x) {
    int var = 0, prev = 0;
    for (const auto& q : chain) {
        int s = rp_sign(q, x);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++var;
        prev = s;
    }
    return var;
}

}  // namespace detail

/**
 * Isolate the distinct real roots of p inside the given interval.
 *
 * Returns disjoint subintervals, one per root, each of width <= `width`;
 * a rational root found exactly is returned as a degenerate point interval.
 * Sturm sequences over exact rationals; endpoints of returned intervals are
 * never roots (except for point intervals).
 */
inline std::vector<RatInterval> isolate_roots(const IntPoly& p,
                                              const RatInterval& interval,
                                              const Rational& width) {
    using namespace detail;
    if (p.is_zero())
        throw PathsysError("isolate_roots: polynomial is identically zero");
    if (width <= 0) throw PathsysError("isolate_roots: width must be positive");
    if (interval.empty()) return {};

    std::vector<RatInterval> out;
    IntPoly sf_int = square_free_part(p);
    RatPoly sf = rp_from(sf_int);

    const Rational lo = interval.lo, hi = interval.hi;
    if (lo == hi) {
        if (!interval.lo_open && !interval.hi_open && p.sign_at(lo) == 0)
            out.push_back(point_interval(lo));
        return out;
    }

    // Endpoint roots become point intervals; deflate so Sturm counts the
    // open interior cleanly.
    if (rp_sign(sf, lo) == 0) {
        if (!interval.lo_open) out.push_back(point_interval(lo));
        sf = rp_deflate(sf, lo);
    }
    if (rp_sign(sf, hi) == 0) {
        if (!interval.hi_open) out.push_back(point_interval(hi));
        sf = rp_deflate(sf, hi);
    }
    rp_trim(sf);
    if (sf.size() <= 1) {
        std::sort(out.begin(), out.end(),
                  [](const RatInterval& a, const RatInterval& b) { return a.lo < b.lo; });
        return out;
    }

    // Degree-1 factors give the root exactly.
    if (sf.size() == 2) {
        Rational r = -sf[0] / sf[1];
        if (r > lo && r < hi) out.push_back(point_interval(r));
        std::sort(out.begin(), out.end(),
                  [](const RatInterval& a, const RatInterval& b) { return a.lo < b.lo; });
        return out;
    }

    auto chain = sturm_chain(sf);
    // roots in open (a,b), both endpoints non-roots of sf
    struct Seg {
        Rational a, b;
        int count;
    };
    std::vector<Seg> work;
    int total = sign_variations(chain, lo) - sign_variations(chain, hi);
    if (total > 0) work.push_back({lo, hi, total});

    std::vector<RatInterval> found;
    while (!work.empty()) {
        Seg s = work.back();
        work.pop_back();
        if (s.count == 1) {
            // refine by sign bisection (simple root => sign change)
            Rational a = s.a, b = s.b;
            int sa = rp_sign(sf, a);
            bool exact = false;
            while (b - a > width) {
                Rational m = (a + b) / 2;
                int sm = rp_sign(sf, m);
                if (sm == 0) {
                    found.push_back(point_interval(m));
                    exact = true;
                    break;
                }
                if (sm == sa)
                    a = m;
                else
                    b = m;
            }
            if (!exact) found.push_back(RatInterval{a, b, true, true});
            continue;
        }
        Rational m = (s.a + s.b) / 2;
        if (rp_sign(sf, m) == 0) {
            found.push_back(point_interval(m));
            sf = rp_deflate(sf, m);
            rp_trim(sf);
            chain = sturm_chain(sf);
        }
        int va = sign_variations(chain, s.a);
        int vm = sign_variations(chain, m);
        int vb = sign_variations(chain, s.b);
        if (va - vm > 0) work.push_back({s.a, m, va - vm});
        if (vm - vb > 0) work.push_back({m, s.b, vm - vb});
    }

    for (auto& iv : found) out.push_back(iv);
    std::sort(out.begin(), out.end(),
              [](const RatInterval& a, const RatInterval& b) { return a.lo < b.lo; });
    return out;
}

}  // namespace pathsys
