#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "pathsys/errors.hpp"
#include "pathsys/rational.hpp"

namespace pathsys {

/// One inequality: coeffs . x <= rhs.
struct Row {
    std::vector<Rational> coeffs;
    Rational rhs;
    std::string tag;
};

struct LinearSystem {
    int num_vars = 0;
    std::vector<Row> rows;

    void add_row(std::vector<Rational> coeffs, Rational rhs, std::string tag) {
        if (static_cast<int>(coeffs.size()) != num_vars)
            throw PathsysError("linear system: coefficient vector length mismatch");
        rows.push_back({std::move(coeffs), std::move(rhs), std::move(tag)});
    }
};

enum class FeasKind { Feasible, Infeasible };

struct Feasibility {
    FeasKind kind = FeasKind::Infeasible;
    std::vector<Rational> witness;  // satisfies every row (Feasible)
    std::vector<Rational> farkas;   // y >= 0, y^T A = 0, y^T b < 0 (Infeasible)
    long pivots = 0;

    bool feasible() const { return kind == FeasKind::Feasible; }
};

struct SimplexOptions {
    long max_pivots = 1000000;
};

inline bool satisfies(const LinearSystem& sys, const std::vector<Rational>& x) {
    for (const auto& row : sys.rows) {
        Rational lhs = 0;
        for (int i = 0; i < sys.num_vars; ++i) lhs += row.coeffs[i] * x[i];
        if (lhs > row.rhs) return false;
    }
    return true;
}

inline bool valid_farkas(const LinearSystem& sys, const std::vector<Rational>& y) {
    if (static_cast<int>(y.size()) != static_cast<int>(sys.rows.size())) return false;
    for (const auto& v : y)
        if (v < 0) return false;
    for (int i = 0; i < sys.num_vars; ++i) {
        Rational s = 0;
        for (size_t j = 0; j < sys.rows.size(); ++j) s += y[j] * sys.rows[j].coeffs[i];
        if (s != 0) return false;
    }
    Rational rb = 0;
    for (size_t j = 0; j < sys.rows.size(); ++j) rb += y[j] * sys.rows[j].rhs;
    return rb < 0;
}

namespace detail {

template <typename Num>
struct num_policy;

template <>
struct num_policy<Rational> {
    static bool is_zero(const Rational& v) { return v == 0; }
    static bool is_pos(const Rational& v) { return v > 0; }
    static bool is_neg(const Rational& v) { return v < 0; }
    static Rational from(const Rational& v) { return v; }
};

template <>
struct num_policy<double> {
    static constexpr double eps = 1e-9;
    static bool is_zero(double v) { return std::abs(v) <= eps; }
    static bool is_pos(double v) { return v > eps; }
    static bool is_neg(double v) { return v < -eps; }
    static double from(const Rational& v) { return v.convert_to<double>(); }
};

/**
 * Feasibility of Ax <= b via the Farkas alternative: simplex on
 *
 *     min b^T y   s.t.   A^T y = 0,  y >= 0.
 *
 * The feasible region is a cone whose only vertex is y = 0, so every basic
 * solution (and every right-hand side) stays zero and no rhs column is kept.
 * Bland's rule guarantees termination through the degenerate pivots. Exits:
 *   - optimal (all reduced costs >= 0): Ax <= b is feasible and the simplex
 *     multipliers, read off the artificial columns' reduced costs, are a
 *     witness x with A x <= b;
 *   - an improving column with no positive tableau entry: the recession ray
 *     is a Farkas certificate (y >= 0, y^T A = 0, b^T y < 0).
 *
 * The tableau is n x (m+n) for n variables and m rows; all our LPs have
 * m >> n, which is what makes this formulation compact.
 */
template <typename Num>
struct FarkasSimplex {
    using P = num_policy<Num>;

    int n;  // primal variables = equality rows here
    int m;  // primal rows = cone variables here
    std::vector<std::vector<Num>> t;  // n rows, m+n columns
    std::vector<Num> z;               // reduced costs, m+n columns
    std::vector<int> basis;           // per row: column index of its basic var
    long pivots = 0;
    long max_pivots;

    std::vector<int> scratch_nz;

    FarkasSimplex(const LinearSystem& sys, long cap)
        : n(sys.num_vars), m(static_cast<int>(sys.rows.size())), max_pivots(cap) {
        t.assign(n, std::vector<Num>(m + n, Num(0)));
        z.assign(m + n, Num(0));
        basis.resize(n);
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < n; ++i) t[i][j] = P::from(sys.rows[j].coeffs[i]);
            z[j] = P::from(sys.rows[j].rhs);
        }
        for (int i = 0; i < n; ++i) {
            t[i][m + i] = Num(1);
            basis[i] = m + i;
        }
    }

    void pivot(int row, int col) {
        if (++pivots > max_pivots)
            throw ResourceCap("simplex: pivot limit " + std::to_string(max_pivots) +
                              " exceeded");
        std::vector<int>& nz = scratch_nz;
        nz.clear();
        std::vector<Num>& pr = t[row];
        Num p = pr[col];
        for (int j = 0; j < m + n; ++j) {
            if (P::is_zero(pr[j])) continue;
            pr[j] /= p;
            nz.push_back(j);
        }
        for (int i = 0; i < n; ++i) {
            if (i == row || P::is_zero(t[i][col])) continue;
            Num f = t[i][col];
            std::vector<Num>& ri = t[i];
            for (int j : nz) ri[j] -= f * pr[j];
            ri[col] = Num(0);  // keep the column exactly clean
        }
        if (!P::is_zero(z[col])) {
            Num f = z[col];
            for (int j : nz) z[j] -= f * pr[j];
            z[col] = Num(0);
        }
        basis[row] = col;
    }

    /// Degenerate pivots moving artificials out wherever a real column allows.
    void drive_out_artificials() {
        for (int i = 0; i < n; ++i) {
            if (basis[i] < m) continue;
            for (int j = 0; j < m; ++j) {
                if (!P::is_zero(t[i][j])) {
                    pivot(i, j);
                    break;
                }
            }
            // no real entry: the row is inert (identically zero on real
            // columns) and its artificial stays harmlessly basic at 0
        }
    }

    /// Returns kind; fills witness (size n) or farkas (size m).
    FeasKind run(std::vector<Num>& witness, std::vector<Num>& farkas) {
        drive_out_artificials();
        for (;;) {
            int enter = -1;
            for (int j = 0; j < m; ++j) {
                if (P::is_neg(z[j])) {
                    enter = j;
                    break;  // Bland: first eligible column
                }
            }
            if (enter < 0) {
                witness.assign(n, Num(0));
                for (int i = 0; i < n; ++i) witness[i] = -z[m + i];
                return FeasKind::Feasible;
            }
            int leave = -1;
            for (int i = 0; i < n; ++i) {
                if (!P::is_pos(t[i][enter])) continue;
                if (leave < 0 || basis[i] < basis[leave]) leave = i;  // Bland tie-break
            }
            if (leave < 0) {
                // recession ray of the cone: the Farkas certificate
                farkas.assign(m, Num(0));
                farkas[enter] = Num(1);
                for (int i = 0; i < n; ++i) {
                    if (basis[i] < m && !P::is_zero(t[i][enter]))
                        farkas[basis[i]] = -t[i][enter];
                }
                return FeasKind::Infeasible;
            }
            pivot(leave, enter);
        }
    }
};

}  // namespace detail

/**
 * Exact feasibility of Ax <= b with a substitution-verified certificate:
 * a witness when feasible, a Farkas row combination when not.
 */
inline Feasibility feasible(const LinearSystem& sys, const SimplexOptions& opts = {}) {
    Feasibility res;

    if (sys.num_vars == 0) {
        for (size_t j = 0; j < sys.rows.size(); ++j) {
            if (sys.rows[j].rhs < 0) {
                res.kind = FeasKind::Infeasible;
                res.farkas.assign(sys.rows.size(), Rational(0));
                res.farkas[j] = 1;
                return res;
            }
        }
        res.kind = FeasKind::Feasible;
        return res;
    }

    detail::FarkasSimplex<Rational> engine(sys, opts.max_pivots);
    std::vector<Rational> witness, farkas;
    res.kind = engine.run(witness, farkas);
    res.pivots = engine.pivots;
    if (res.kind == FeasKind::Feasible) {
        res.witness = std::move(witness);
        if (!satisfies(sys, res.witness))
            throw PathsysError("internal: simplex witness failed substitution check");
    } else {
        res.farkas = std::move(farkas);
        if (!valid_farkas(sys, res.farkas))
            throw PathsysError("internal: simplex farkas failed substitution check");
    }
    return res;
}

/// Floating-point replica of feasible(); used only to pre-narrow bisection.
inline FeasKind feasible_double(const LinearSystem& sys, const SimplexOptions& opts = {}) {
    if (sys.num_vars == 0) {
        for (const auto& row : sys.rows)
            if (row.rhs < 0) return FeasKind::Infeasible;
        return FeasKind::Feasible;
    }
    detail::FarkasSimplex<double> engine(sys, opts.max_pivots);
    std::vector<double> witness, farkas;
    return engine.run(witness, farkas);
}

struct FmOptions {
    size_t max_rows = 1000000;
};

namespace detail {

/// Scale so the first nonzero coefficient has absolute value 1 (canonical
/// form for duplicate/dominance detection); zero-coefficient rows unscaled.
inline void canonicalize_row(Row& row) {
    for (const auto& c : row.coeffs) {
        if (c != 0) {
            Rational s = c < 0 ? -c : c;
            for (auto& x : row.coeffs) x /= s;
            row.rhs /= s;
            return;
        }
    }
}

}  // namespace detail

/**
 * Fourier-Motzkin projection eliminating the listed variables in order.
 * Variable indexing is preserved (eliminated columns become zero). Pruning:
 * tautologies 0 <= nonneg are dropped, rows with identical canonical
 * coefficients keep only the smallest rhs. Combined rows get the tag
 * "(tagP+tagN)".
 */
inline LinearSystem fm_eliminate(const LinearSystem& sys, const std::vector<int>& order,
                                 const FmOptions& opts = {}) {
    for (int v : order)
        if (v < 0 || v >= sys.num_vars)
            throw PathsysError("fm_eliminate: variable index out of range");

    LinearSystem cur = sys;
    for (int v : order) {
        std::vector<size_t> pos, neg;
        std::vector<Row> next;
        for (size_t j = 0; j < cur.rows.size(); ++j) {
            const Rational& c = cur.rows[j].coeffs[v];
            if (c > 0)
                pos.push_back(j);
            else if (c < 0)
                neg.push_back(j);
            else
                next.push_back(cur.rows[j]);
        }
        for (size_t p : pos) {
            for (size_t q : neg) {
                const Row& rp = cur.rows[p];
                const Row& rq = cur.rows[q];
                Rational a = rp.coeffs[v];   // > 0
                Rational b = -rq.coeffs[v];  // > 0
                Row combined;
                combined.coeffs.resize(cur.num_vars);
                for (int i = 0; i < cur.num_vars; ++i)
                    combined.coeffs[i] = b * rp.coeffs[i] + a * rq.coeffs[i];
                combined.coeffs[v] = 0;
                combined.rhs = b * rp.rhs + a * rq.rhs;
                combined.tag = "(" + rp.tag + "+" + rq.tag + ")";
                next.push_back(std::move(combined));
                if (next.size() > opts.max_rows)
                    throw ResourceCap("fm_eliminate: row count exceeded " +
                                      std::to_string(opts.max_rows));
            }
        }

        // prune: tautologies, duplicates, dominated rows
        std::map<std::vector<Rational>, size_t> best;  // canonical coeffs -> index
        std::vector<Row> pruned;
        for (auto& row : next) {
            bool all_zero = true;
            for (const auto& c : row.coeffs)
                if (c != 0) {
                    all_zero = false;
                    break;
                }
            if (all_zero) {
                if (row.rhs >= 0) continue;  // 0 <= nonneg: tautology
            } else {
                detail::canonicalize_row(row);
            }
            auto it = best.find(row.coeffs);
            if (it == best.end()) {
                best.emplace(row.coeffs, pruned.size());
                pruned.push_back(std::move(row));
            } else if (row.rhs < pruned[it->second].rhs) {
                pruned[it->second] = std::move(row);
            }
        }
        cur.rows = std::move(pruned);
    }
    return cur;
}

}  // namespace pathsys
