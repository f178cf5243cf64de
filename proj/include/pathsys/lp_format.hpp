#pragma once

#include <cctype>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pathsys/errors.hpp"
#include "pathsys/param.hpp"
#include "pathsys/polynomial.hpp"
#include "pathsys/rational.hpp"

namespace pathsys {

struct ParsedLp {
    ParamSystem sys;         // interval left at its default; callers set it
    std::vector<std::string> names;  // variable names by first appearance
};

namespace detail {

/// Rational polynomial in t, parsed term by term: "2t^3-3t^2-10t+12",
/// "t", "-t^2", "5", "1/2t".
inline std::vector<Rational> parse_poly_body(const std::string& s) {
    std::vector<Rational> coeffs;
    size_t i = 0;
    auto skip_ws = [&]() { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; };
    skip_ws();
    if (i == s.size()) throw FormatError("empty polynomial");
    bool first = true;
    while (i < s.size()) {
        int sign = 1;
        skip_ws();
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
            skip_ws();
        } else if (!first) {
            throw FormatError("expected + or - in polynomial near \"" + s.substr(i) + "\"");
        }
        first = false;
        // optional numeric part
        size_t start = i;
        while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/'))
            ++i;
        Rational c = 1;
        bool have_num = i > start;
        if (have_num) c = parse_rational(s.substr(start, i - start));
        skip_ws();
        int pow = 0;
        if (i < s.size() && s[i] == 't') {
            ++i;
            pow = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                size_t ps = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (i == ps) throw FormatError("missing exponent after ^");
                pow = std::stoi(s.substr(ps, i - ps));
            }
        } else if (!have_num) {
            throw FormatError("expected coefficient or t near \"" + s.substr(start) + "\"");
        }
        if (static_cast<size_t>(pow) >= coeffs.size()) coeffs.resize(pow + 1, Rational(0));
        coeffs[pow] += sign * c;
        skip_ws();
    }
    return coeffs;
}

struct LpTerm {
    std::vector<Rational> poly;  // ascending coefficients in t
    std::string var;             // empty for the right-hand side
};

/// Splits off one coefficient token starting at i: "(....)" or a rational.
inline std::vector<Rational> parse_coeff(const std::string& s, size_t& i) {
    if (i < s.size() && s[i] == '(') {
        size_t close = s.find(')', i);
        if (close == std::string::npos) throw FormatError("unbalanced ( in lp line");
        auto body = s.substr(i + 1, close - i - 1);
        i = close + 1;
        return parse_poly_body(body);
    }
    size_t start = i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    while (i < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/' || s[i] == '.'))
        ++i;
    if (i == start || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
        throw FormatError("expected coefficient near \"" + s.substr(start) + "\"");
    return {parse_rational(s.substr(start, i - start))};
}

inline std::string parse_ident(const std::string& s, size_t& i) {
    size_t start = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
        ++i;
    if (i == start) throw FormatError("expected variable name near \"" + s.substr(start) + "\"");
    return s.substr(start, i - start);
}

}  // namespace detail

/**
 * lp/v1 text: one constraint per line,
 *   c1*x1 + c2*x2 + ... <= r # tag
 * with rationals as p/q and parametric coefficients as parenthesized
 * polynomials in t, e.g. (2t^3-3t^2-10t+12)*w9 <= 0. Variables are indexed
 * by first appearance. Blank lines and lines starting with # are skipped.
 * Each row is scaled by a common denominator so coefficients become
 * integer polynomials.
 */
inline ParsedLp parse_lp(std::istream& in) {
    ParsedLp out;
    std::map<std::string, int> index;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto fail = [&](const std::string& msg) -> void {
            throw FormatError("lp line " + std::to_string(lineno) + ": " + msg);
        };
        std::string tag;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            tag = line.substr(hash + 1);
            size_t b = tag.find_first_not_of(" \t");
            tag = b == std::string::npos ? "" : tag.substr(b);
            size_t e = tag.find_last_not_of(" \t\r");
            if (e != std::string::npos) tag = tag.substr(0, e + 1);
            line = line.substr(0, hash);
        }
        size_t nb = line.find_first_not_of(" \t\r");
        if (nb == std::string::npos) continue;  // blank or comment-only

        auto le = line.find("<=");
        if (le == std::string::npos) fail("missing <=");
        std::string lhs = line.substr(0, le), rhs = line.substr(le + 2);

        std::vector<detail::LpTerm> terms;
        size_t i = 0;
        auto skip_ws = [&](const std::string& s) {
            while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        };
        try {
            bool first = true;
            for (;;) {
                skip_ws(lhs);
                if (i >= lhs.size()) {
                    if (first) fail("empty left-hand side");
                    break;
                }
                int sign = 1;
                if (!first) {
                    if (lhs[i] == '+') ++i;
                    else if (lhs[i] == '-') { sign = -1; ++i; }
                    else fail("expected + between terms");
                    skip_ws(lhs);
                }
                first = false;
                detail::LpTerm term;
                term.poly = detail::parse_coeff(lhs, i);
                skip_ws(lhs);
                if (i >= lhs.size() || lhs[i] != '*') fail("expected * after coefficient");
                ++i;
                skip_ws(lhs);
                term.var = detail::parse_ident(lhs, i);
                if (sign < 0)
                    for (auto& c : term.poly) c = -c;
                terms.push_back(std::move(term));
            }
            i = 0;
            skip_ws(rhs);
            detail::LpTerm r;
            r.poly = detail::parse_coeff(rhs, i);
            skip_ws(rhs);
            if (i < rhs.size()) fail("trailing input after right-hand side");
            terms.push_back(std::move(r));
        } catch (const FormatError& e) {
            fail(e.what());
        }

        for (auto& term : terms) {
            if (term.var.empty()) continue;
            if (!index.count(term.var)) {
                index[term.var] = static_cast<int>(out.names.size());
                out.names.push_back(term.var);
            }
        }
        // scale the row to integer polynomial coefficients
        Integer lcm = 1;
        for (const auto& term : terms)
            for (const auto& c : term.poly)
                lcm = boost::multiprecision::lcm(lcm, denominator(c));
        ParamRow row;
        row.tag = tag;
        row.coeffs.resize(out.names.size());
        auto to_poly = [&](const std::vector<Rational>& rc) {
            std::vector<Integer> ic(rc.size());
            for (size_t k = 0; k < rc.size(); ++k)
                ic[k] = numerator(rc[k]) * (lcm / denominator(rc[k]));
            return IntPoly(ic);
        };
        for (auto& term : terms) {
            if (term.var.empty()) row.rhs = to_poly(term.poly);
            else {
                int vi = index[term.var];
                if (static_cast<size_t>(vi) >= row.coeffs.size())
                    row.coeffs.resize(vi + 1);
                row.coeffs[vi] = row.coeffs[vi] + to_poly(term.poly);
            }
        }
        out.sys.rows.push_back(std::move(row));
    }
    out.sys.num_vars = static_cast<int>(out.names.size());
    for (auto& row : out.sys.rows) row.coeffs.resize(out.sys.num_vars);
    return out;
}

inline void write_lp(std::ostream& out, const ParamSystem& sys,
                     const std::vector<std::string>& names) {
    if (static_cast<int>(names.size()) != sys.num_vars)
        throw PathsysError("write_lp: name count does not match num_vars");
    for (const auto& row : sys.rows) {
        bool first = true;
        for (int i = 0; i < sys.num_vars; ++i) {
            const IntPoly& c = row.coeffs[i];
            if (c.is_zero()) continue;
            if (!first) out << " + ";
            first = false;
            if (c.degree() <= 0) out << c.eval(Rational(0));
            else out << "(" << c.str() << ")";
            out << "*" << names[i];
        }
        if (first) out << "0*" << (names.empty() ? "x" : names[0]);
        out << " <= ";
        if (row.rhs.degree() <= 0) out << row.rhs.eval(Rational(0));
        else out << "(" << row.rhs.str() << ")";
        if (!row.tag.empty()) out << " # " << row.tag;
        out << "\n";
    }
}

}  // namespace pathsys
