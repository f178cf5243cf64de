#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "pathsys/errors.hpp"
#include "pathsys/linsys.hpp"
#include "pathsys/polynomial.hpp"
#include "pathsys/rational.hpp"

namespace pathsys {

/// One parametric inequality: sum_i coeffs[i](t) * x_i <= rhs(t).
struct ParamRow {
    std::vector<IntPoly> coeffs;
    IntPoly rhs;
    std::string tag;
};

/// Linear system whose entries are integer polynomials in t, interpreted on
/// a rational parameter interval.
struct ParamSystem {
    int num_vars = 0;
    std::vector<ParamRow> rows;
    RatInterval interval;

    void add_row(std::vector<IntPoly> coeffs, IntPoly rhs, std::string tag) {
        if (static_cast<int>(coeffs.size()) != num_vars)
            throw PathsysError("param system: coefficient vector length mismatch");
        rows.push_back({std::move(coeffs), std::move(rhs), std::move(tag)});
    }
};

/// Evaluate every polynomial at t; tags are preserved.
inline LinearSystem instantiate(const ParamSystem& sys, const Rational& t) {
    LinearSystem out;
    out.num_vars = sys.num_vars;
    for (const auto& row : sys.rows) {
        std::vector<Rational> c(sys.num_vars);
        for (int i = 0; i < sys.num_vars; ++i) c[i] = row.coeffs[i].eval(t);
        out.rows.push_back({std::move(c), row.rhs.eval(t), row.tag});
    }
    return out;
}

/// Append x_i >= lb for every variable (rows -x_i <= -lb, tag "pos(i)").
inline LinearSystem with_lower_bounds(const LinearSystem& sys, const Rational& lb = 1) {
    LinearSystem out = sys;
    for (int i = 0; i < sys.num_vars; ++i) {
        std::vector<Rational> c(sys.num_vars, Rational(0));
        c[i] = -1;
        out.rows.push_back({std::move(c), -lb, "pos(" + std::to_string(i) + ")"});
    }
    return out;
}

/// Lift a plain rational system to a constant-polynomial ParamSystem.
inline ParamSystem to_param(const LinearSystem& sys, const RatInterval& interval) {
    ParamSystem out;
    out.num_vars = sys.num_vars;
    out.interval = interval;
    for (const auto& row : sys.rows) {
        std::vector<IntPoly> c(sys.num_vars);
        Integer den = 1;
        for (const auto& x : row.coeffs) den = lcm(den, denominator(x));
        den = lcm(den, denominator(row.rhs));
        for (int i = 0; i < sys.num_vars; ++i)
            c[i] = IntPoly::constant(numerator(row.coeffs[i]) *
                                     (den / denominator(row.coeffs[i])));
        IntPoly rhs = IntPoly::constant(numerator(row.rhs) * (den / denominator(row.rhs)));
        out.rows.push_back({std::move(c), std::move(rhs), row.tag});
    }
    return out;
}

/**
 * Elimination result on one parameter subinterval. When sign_ambiguous is
 * set the cell is an isolating sliver around an irrational root of a pivotal
 * coefficient: signs are not constant there and elimination stopped early
 * (rows holds the partially eliminated system).
 */
struct CellResult {
    RatInterval cell;
    bool sign_ambiguous = false;
    std::vector<ParamRow> rows;
};

struct ParamOptions {
    size_t max_rows = 1000000;
    Rational root_width = Rational(1, Integer("4294967296"));  // 2^-32
};

namespace detail {

inline void content_normalize(ParamRow& row) {
    Integer g = row.rhs.content();
    for (const auto& p : row.coeffs) g = gcd(g, p.content());
    if (g < 0) g = -g;
    if (g <= 1) return;
    for (auto& p : row.coeffs)
        for (auto& k : p.c) k /= g;
    for (auto& k : row.rhs.c) k /= g;
}

inline bool rows_equal(const ParamRow& a, const ParamRow& b) {
    if (a.rhs != b.rhs) return false;
    for (size_t i = 0; i < a.coeffs.size(); ++i)
        if (a.coeffs[i] != b.coeffs[i]) return false;
    return true;
}

/// True iff p has no root strictly inside the cell (endpoints allowed).
inline bool no_interior_root(const IntPoly& p, const RatInterval& cell,
                             const Rational& width) {
    if (p.is_zero()) return false;
    RatInterval interior{cell.lo, cell.hi, true, true};
    return isolate_roots(p, interior, width).empty();
}

/// Nonnegative everywhere on the cell (used to prune tautology rows 0 <= rhs).
inline bool nonnegative_on_cell(const IntPoly& p, const RatInterval& cell,
                                const Rational& width) {
    if (p.is_zero()) return true;
    if (cell.is_point()) return p.sign_at(cell.lo) >= 0;
    if (!no_interior_root(p, cell, width)) return false;
    return p.sign_at(cell.interior_point()) > 0;
}

struct ParamFm {
    const std::vector<int>& order;
    const ParamOptions& opts;
    std::vector<CellResult> out;

    ParamFm(const std::vector<int>& order_, const ParamOptions& opts_)
        : order(order_), opts(opts_) {}

    /// Instantiated endpoint: plain rational FM, re-wrapped as constant rows.
    void process_point(const RatInterval& cell, const std::vector<ParamRow>& rows,
                       size_t k) {
        ParamSystem tmp;
        tmp.num_vars = rows.empty() ? 0 : static_cast<int>(rows[0].coeffs.size());
        tmp.rows = rows;
        tmp.interval = cell;
        LinearSystem inst = instantiate(tmp, cell.lo);
        std::vector<int> rest(order.begin() + k, order.end());
        FmOptions fopts;
        fopts.max_rows = opts.max_rows;
        LinearSystem elim = fm_eliminate(inst, rest, fopts);
        CellResult res;
        res.cell = cell;
        ParamSystem back = to_param(elim, cell);
        res.rows = std::move(back.rows);
        out.push_back(std::move(res));
    }

    void process(const RatInterval& cell, std::vector<ParamRow> rows, size_t k) {
        if (cell.empty()) return;
        if (k == order.size()) {
            out.push_back({cell, false, std::move(rows)});
            return;
        }
        if (cell.is_point()) {
            process_point(cell, rows, k);
            return;
        }
        int v = order[k];

        // pin down every root of every pivotal coefficient in this cell
        std::vector<RatInterval> root_ivs;
        for (const auto& row : rows) {
            const IntPoly& p = row.coeffs[v];
            if (p.is_zero()) continue;
            for (const auto& iv : isolate_roots(p, cell, opts.root_width))
                root_ivs.push_back(iv);
        }
        std::sort(root_ivs.begin(), root_ivs.end(),
                  [](const RatInterval& a, const RatInterval& b) { return a.lo < b.lo; });
        // distinct points dedupe; overlapping slivers merge (shared roots)
        std::vector<RatInterval> merged;
        for (const auto& iv : root_ivs) {
            if (!merged.empty()) {
                RatInterval& last = merged.back();
                if (iv.lo < last.hi || (iv.is_point() && last.is_point() && iv.lo == last.lo)) {
                    if (iv.hi > last.hi) last.hi = iv.hi;
                    if (!iv.is_point()) last.lo_open = last.hi_open = true;
                    continue;
                }
            }
            merged.push_back(iv);
        }

        if (!merged.empty()) {
            // split the cell and recurse at the same elimination stage
            Rational cur_lo = cell.lo;
            bool cur_open = cell.lo_open;
            for (const auto& riv : merged) {
                if (riv.is_point()) {
                    process(RatInterval{cur_lo, riv.lo, cur_open, true}, rows, k);
                    process(point_interval(riv.lo), rows, k);
                    cur_lo = riv.lo;
                    cur_open = true;
                } else {
                    process(RatInterval{cur_lo, riv.lo, cur_open, false}, rows, k);
                    out.push_back({RatInterval{riv.lo, riv.hi, true, true}, true, rows});
                    cur_lo = riv.hi;
                    cur_open = false;
                }
            }
            process(RatInterval{cur_lo, cell.hi, cur_open, cell.hi_open}, rows, k);
            return;
        }

        // signs are constant here: classify and combine
        Rational sample = cell.interior_point();
        std::vector<size_t> pos, neg;
        std::vector<ParamRow> next;
        for (size_t j = 0; j < rows.size(); ++j) {
            const IntPoly& p = rows[j].coeffs[v];
            if (p.is_zero()) {
                next.push_back(rows[j]);
                continue;
            }
            int s = p.sign_at(sample);
            if (s == 0)
                throw DegenerateCell("pivotal coefficient vanished at sample despite "
                                     "root-free cell " + cell.str());
            (s > 0 ? pos : neg).push_back(j);
        }
        for (size_t pj : pos) {
            for (size_t nj : neg) {
                const ParamRow& rp = rows[pj];
                const ParamRow& rn = rows[nj];
                const IntPoly& a = rp.coeffs[v];         // positive on cell
                IntPoly nb = -rn.coeffs[v];              // positive on cell
                ParamRow combined;
                combined.coeffs.resize(rp.coeffs.size());
                for (size_t i = 0; i < rp.coeffs.size(); ++i)
                    combined.coeffs[i] = nb * rp.coeffs[i] + a * rn.coeffs[i];
                combined.coeffs[v] = IntPoly();
                combined.rhs = nb * rp.rhs + a * rn.rhs;
                combined.tag = "(" + rp.tag + "+" + rn.tag + ")";
                content_normalize(combined);
                next.push_back(std::move(combined));
                if (next.size() > opts.max_rows)
                    throw ResourceCap("parametric_eliminate: row count exceeded " +
                                      std::to_string(opts.max_rows));
            }
        }

        // prune tautologies (0 <= rhs with rhs >= 0 on the cell) and duplicates
        std::vector<ParamRow> pruned;
        for (auto& row : next) {
            bool zero_coeffs = true;
            for (const auto& p : row.coeffs)
                if (!p.is_zero()) {
                    zero_coeffs = false;
                    break;
                }
            if (zero_coeffs && nonnegative_on_cell(row.rhs, cell, opts.root_width))
                continue;
            bool dup = false;
            for (const auto& kept : pruned)
                if (rows_equal(kept, row)) {
                    dup = true;
                    break;
                }
            if (!dup) pruned.push_back(std::move(row));
        }
        process(cell, std::move(pruned), k + 1);
    }
};

}  // namespace detail

/**
 * Fourier-Motzkin elimination with polynomial coefficients. The parameter
 * interval is partitioned into cells on which every pivotal coefficient has
 * constant sign (splitting at isolated coefficient roots: rational roots
 * become degenerate point cells, irrational ones ambiguous slivers of width
 * <= opts.root_width). Within each cell the listed variables are eliminated
 * in order; returned cells are sorted left to right and carry the terminal
 * rows over the remaining variables.
 */
inline std::vector<CellResult> parametric_eliminate(const ParamSystem& sys,
                                                    const std::vector<int>& order,
                                                    const ParamOptions& opts = {}) {
    for (int v : order)
        if (v < 0 || v >= sys.num_vars)
            throw PathsysError("parametric_eliminate: variable index out of range");
    if (sys.interval.empty())
        throw PathsysError("parametric_eliminate: empty parameter interval");

    detail::ParamFm engine(order, opts);
    engine.process(sys.interval, sys.rows, 0);
    std::sort(engine.out.begin(), engine.out.end(),
              [](const CellResult& a, const CellResult& b) {
                  if (a.cell.lo != b.cell.lo) return a.cell.lo < b.cell.lo;
                  return a.cell.hi < b.cell.hi;
              });
    return engine.out;
}

}  // namespace pathsys
