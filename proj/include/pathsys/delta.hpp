#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathsys/errors.hpp"
#include "pathsys/graph.hpp"
#include "pathsys/groups.hpp"
#include "pathsys/linsys.hpp"
#include "pathsys/param.hpp"
#include "pathsys/polynomial.hpp"
#include "pathsys/rational.hpp"

namespace pathsys {

/**
 * A claimed metric achieving stretch t: either one weight per unordered
 * vertex pair, or (for Z_n-invariant systems) one weight per difference
 * class {a, -a}, a = 1..floor(n/2).
 */
struct MetricCertificate {
    enum class Kind { Full, Class };

    Rational t = 1;
    Kind kind = Kind::Full;
    PairWeights weights;                    // Full
    std::map<int, Rational> class_weights;  // Class
};

/// Bisection bracket for Delta(P) with verifiable evidence at both ends.
struct DeltaResult {
    Rational lo = 1;  // LP infeasible at lo, or lo = 1
    Rational hi = 1;  // LP feasible at hi
    MetricCertificate certificate;       // extracted from the witness at hi
    std::vector<Rational> lo_evidence;   // Farkas vector for the lo probe, if any
    int probes = 0;
};

struct AlgebraicThreshold {
    IntPoly polynomial;      // has exactly one root in `isolating`
    RatInterval isolating;
    double decimal = 0.0;    // display only
};

/// Pair-variable LP plus the variable <-> pair correspondence.
struct MetricLp {
    LinearSystem sys;
    std::vector<Pair> pair_of_var;
    std::map<Pair, int> var_of_pair;
};

/// Class-variable LP for invariant systems; variable a-1 is class a.
struct InvariantLp {
    LinearSystem sys;
    int num_classes = 0;
};

namespace detail {

inline void index_pairs(int n, std::vector<Pair>& pairs, std::map<Pair, int>& index) {
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            index[{u, v}] = static_cast<int>(pairs.size());
            pairs.push_back({u, v});
        }
}

inline void require_consistent(const PathSystem& ps) {
    ConsistencyReport rep = validate_system(ps);
    if (!rep.consistent)
        throw InconsistentSystem("path system fails validation: " +
                                 (rep.violations.empty() ? std::string("incomplete")
                                                         : rep.violations[0].str()));
}

inline void require_valid_words(const WordTable& wt) {
    try {
        validate_words(wt);
    } catch (const WordClosureViolation& e) {
        if (e.kind == WordClosureViolation::Kind::Inversion)
            throw NotInvariant(e.what());
        throw InconsistentSystem(e.what());
    }
}

inline int class_of(int x, int n) { return std::min(x, n - x); }

/// Deduplicated class-triangle rows w_{class(a+-b)} <= w_a + w_b as
/// (lhs_class, a, b) triples, a <= b, skipping sums that hit zero.
inline std::vector<std::array<int, 3>> class_triangles(int n) {
    CyclicGroup g(n);
    int half = n / 2;
    std::set<std::array<int, 3>> all;
    for (int a = 1; a <= half; ++a)
        for (int b = a; b <= half; ++b)
            for (int s : {g.norm(static_cast<long>(a) + b),
                          g.norm(static_cast<long>(a) - b)}) {
                if (s == 0) continue;
                all.insert({class_of(s, n), a, b});
            }
    return {all.begin(), all.end()};
}

}  // namespace detail

/**
 * The alpha-metricity feasibility LP at stretch t: variables x_{a,b} per
 * unordered pair; triangle rows x_{a,b} <= x_{a,c} + x_{c,b} for all triples,
 * normalization x >= 1, and one stretch row per multi-edge system path:
 * sum of edge variables <= t * x_{u,v}.
 */
inline MetricLp build_metric_lp(const PathSystem& ps, const Rational& t) {
    detail::require_consistent(ps);
    MetricLp out;
    detail::index_pairs(ps.n, out.pair_of_var, out.var_of_pair);
    LinearSystem& sys = out.sys;
    sys.num_vars = static_cast<int>(out.pair_of_var.size());

    auto var = [&](int u, int v) { return out.var_of_pair.at(make_pair_key(u, v)); };

    for (int a = 0; a < ps.n; ++a) {
        for (int b = a + 1; b < ps.n; ++b) {
            for (int c = 0; c < ps.n; ++c) {
                if (c == a || c == b) continue;
                std::vector<Rational> coeffs(sys.num_vars, Rational(0));
                coeffs[var(a, b)] += 1;
                coeffs[var(a, c)] -= 1;
                coeffs[var(c, b)] -= 1;
                sys.add_row(std::move(coeffs), Rational(0),
                            "tri(" + std::to_string(a) + "," + std::to_string(b) +
                                "|" + std::to_string(c) + ")");
            }
        }
    }
    for (int i = 0; i < sys.num_vars; ++i) {
        std::vector<Rational> coeffs(sys.num_vars, Rational(0));
        coeffs[i] = -1;
        sys.add_row(std::move(coeffs), Rational(-1),
                    "pos(" + std::to_string(out.pair_of_var[i].first) + "," +
                        std::to_string(out.pair_of_var[i].second) + ")");
    }
    for (const auto& [key, p] : ps.paths) {
        if (p.num_edges() < 2) continue;
        std::vector<Rational> coeffs(sys.num_vars, Rational(0));
        for (size_t i = 0; i + 1 < p.seq.size(); ++i)
            coeffs[var(p.seq[i], p.seq[i + 1])] += 1;
        coeffs[var(key.first, key.second)] -= t;
        sys.add_row(std::move(coeffs), Rational(0),
                    "path(" + std::to_string(key.first) + "," +
                        std::to_string(key.second) + ")");
    }
    return out;
}

/// Homogeneous parametric companion of build_metric_lp (triangle + stretch
/// rows only; positivity is added to instantiated probes separately).
inline ParamSystem build_metric_param_lp(const PathSystem& ps, const RatInterval& interval) {
    MetricLp lp = build_metric_lp(ps, Rational(0));
    ParamSystem out;
    out.num_vars = lp.sys.num_vars;
    out.interval = interval;
    const IntPoly minus_t = IntPoly::linear(0, -1);
    for (const auto& row : lp.sys.rows) {
        if (row.tag.rfind("pos(", 0) == 0) continue;
        bool stretch = row.tag.rfind("path(", 0) == 0;
        std::vector<IntPoly> coeffs(out.num_vars);
        for (int i = 0; i < out.num_vars; ++i) {
            Rational c = row.coeffs[i];
            if (c == 0) continue;
            // t was instantiated as 0 above: the pair variable of a stretch
            // row carries exactly the -t coefficient
            coeffs[i] = IntPoly::constant(numerator(c));
        }
        if (stretch) {
            auto key = row.tag.substr(5, row.tag.size() - 6);
            auto comma = key.find(',');
            int u = std::stoi(key.substr(0, comma));
            int v = std::stoi(key.substr(comma + 1));
            coeffs[lp.var_of_pair.at({u, v})] = minus_t;
        }
        out.rows.push_back({std::move(coeffs), IntPoly(), row.tag});
    }
    return out;
}

/**
 * Invariance-reduced LP over difference classes: variables w_a for
 * a = 1..floor(n/2); triangle rows w_{class(a+-b)} <= w_a + w_b, w >= 1,
 * and one stretch row per multi-letter word. Averaging over the group makes
 * feasibility here equivalent to feasibility of the full pair LP.
 */
inline InvariantLp build_invariant_metric_lp(const WordTable& wt, const Rational& t) {
    detail::require_valid_words(wt);
    InvariantLp out;
    out.num_classes = wt.n / 2;
    LinearSystem& sys = out.sys;
    sys.num_vars = out.num_classes;

    for (const auto& tri : detail::class_triangles(wt.n)) {
        std::vector<Rational> coeffs(sys.num_vars, Rational(0));
        coeffs[tri[0] - 1] += 1;
        coeffs[tri[1] - 1] -= 1;
        coeffs[tri[2] - 1] -= 1;
        sys.add_row(std::move(coeffs), Rational(0),
                    "tri(" + std::to_string(tri[0]) + "<=" + std::to_string(tri[1]) +
                        "+" + std::to_string(tri[2]) + ")");
    }
    for (int a = 1; a <= out.num_classes; ++a) {
        std::vector<Rational> coeffs(sys.num_vars, Rational(0));
        coeffs[a - 1] = -1;
        sys.add_row(std::move(coeffs), Rational(-1), "pos(" + std::to_string(a) + ")");
    }
    for (int a = 1; a <= out.num_classes; ++a) {
        const auto& w = wt.word(a);
        if (w.size() < 2) continue;
        std::vector<Rational> coeffs(sys.num_vars, Rational(0));
        for (int letter : w) coeffs[detail::class_of(letter, wt.n) - 1] += 1;
        coeffs[a - 1] -= t;
        sys.add_row(std::move(coeffs), Rational(0), "stretch(" + std::to_string(a) + ")");
    }
    return out;
}

/// Homogeneous parametric companion of build_invariant_metric_lp.
inline ParamSystem build_invariant_param_lp(const WordTable& wt,
                                            const RatInterval& interval) {
    detail::require_valid_words(wt);
    int half = wt.n / 2;
    ParamSystem out;
    out.num_vars = half;
    out.interval = interval;
    for (const auto& tri : detail::class_triangles(wt.n)) {
        std::vector<IntPoly> coeffs(half);
        coeffs[tri[0] - 1] = coeffs[tri[0] - 1] + IntPoly::constant(1);
        coeffs[tri[1] - 1] = coeffs[tri[1] - 1] - IntPoly::constant(1);
        coeffs[tri[2] - 1] = coeffs[tri[2] - 1] - IntPoly::constant(1);
        out.rows.push_back({std::move(coeffs), IntPoly(),
                            "tri(" + std::to_string(tri[0]) + "<=" +
                                std::to_string(tri[1]) + "+" + std::to_string(tri[2]) +
                                ")"});
    }
    for (int a = 1; a <= half; ++a) {
        const auto& w = wt.word(a);
        if (w.size() < 2) continue;
        std::vector<IntPoly> coeffs(half);
        for (int letter : w)
            coeffs[detail::class_of(letter, wt.n) - 1] =
                coeffs[detail::class_of(letter, wt.n) - 1] + IntPoly::constant(1);
        coeffs[a - 1] = coeffs[a - 1] + IntPoly::linear(0, -1);
        out.rows.push_back({std::move(coeffs), IntPoly(),
                            "stretch(" + std::to_string(a) + ")"});
    }
    return out;
}

struct DeltaOptions {
    bool float_prepass = false;
    long max_pivots = 1000000;
};

namespace detail {

struct LpFamily {
    int n = 0;  // vertex count: the trivial upper bound for Delta
    std::function<LinearSystem(const Rational&)> at;  // LP incl. positivity at t
    std::function<MetricCertificate(const Rational&, const std::vector<Rational>&)>
        certify;  // witness -> certificate
};

inline DeltaResult delta_bisect_family(const LpFamily& fam, const Rational& tol,
                                       const DeltaOptions& opts) {
    if (tol <= 0) throw PathsysError("delta_bisect: tol must be positive");
    DeltaResult res;
    SimplexOptions sopts{opts.max_pivots};

    auto probe = [&](const Rational& t) {
        ++res.probes;
        return feasible(fam.at(t), sopts);
    };

    if (fam.n <= 1) {
        res.lo = res.hi = 1;
        res.certificate = fam.certify(1, {});
        return res;
    }

    Feasibility at_one = probe(1);
    if (at_one.feasible()) {
        res.lo = res.hi = 1;
        res.certificate = fam.certify(1, at_one.witness);
        return res;
    }

    Rational lo = 1, hi = fam.n;
    std::vector<Rational> lo_farkas = at_one.farkas;
    std::optional<Feasibility> hi_feas;

    // monotone shortcut: when Delta = 1 is merely unattained the LP is
    // already feasible at 1 + tol, which skips the deep probes entirely;
    // when it is not, one cheap infeasible probe advances lo anyway
    if (lo + tol < hi) {
        Feasibility f = probe(lo + tol);
        if (f.feasible()) {
            hi = lo + tol;
            hi_feas = std::move(f);
        } else {
            lo = lo + tol;
            lo_farkas = std::move(f.farkas);
        }
    }

    if (hi - lo > tol && opts.float_prepass) {
        Rational flo = lo, fhi = hi;
        while (fhi - flo > tol) {
            Rational mid = (flo + fhi) / 2;
            ++res.probes;
            if (feasible_double(fam.at(mid), sopts) == FeasKind::Feasible)
                fhi = mid;
            else
                flo = mid;
        }
        // certify the float bracket exactly; on any disagreement discard it
        Feasibility fh = probe(fhi);
        if (fh.feasible()) {
            if (flo == lo) {
                hi = fhi;
                hi_feas = std::move(fh);
            } else {
                Feasibility fl = probe(flo);
                if (!fl.feasible()) {
                    lo = flo;
                    hi = fhi;
                    lo_farkas = std::move(fl.farkas);
                    hi_feas = std::move(fh);
                }
            }
        }
    }

    while (hi - lo > tol) {
        Rational mid = (lo + hi) / 2;
        Feasibility f = probe(mid);
        if (f.feasible()) {
            hi = mid;
            hi_feas = std::move(f);
        } else {
            lo = mid;
            lo_farkas = std::move(f.farkas);
        }
    }

    if (!hi_feas) {
        // tol so coarse that no midpoint was ever feasible: certify at hi = n
        Feasibility f = probe(hi);
        if (!f.feasible())
            throw PathsysError("internal: LP infeasible at t = n");
        hi_feas = std::move(f);
    }

    res.lo = lo;
    res.hi = hi;
    res.lo_evidence = std::move(lo_farkas);
    res.certificate = fam.certify(hi, hi_feas->witness);
    return res;
}

}  // namespace detail

/**
 * Bracket Delta(P) by bisection over [1, n]: exact rational feasibility
 * probes at midpoints until hi - lo <= tol. The returned certificate is the
 * witness metric at hi; lo_evidence is the Farkas combination refuting the
 * last infeasible probe. With float_prepass the narrowing runs in floating
 * point first and both endpoints are then re-certified exactly (falling back
 * to exact bisection if the float answer does not verify).
 */
inline DeltaResult delta_bisect(const PathSystem& ps, const Rational& tol,
                                const DeltaOptions& opts = {}) {
    detail::require_consistent(ps);
    detail::LpFamily fam;
    fam.n = ps.n;
    fam.at = [&ps](const Rational& t) { return build_metric_lp(ps, t).sys; };
    fam.certify = [&ps](const Rational& t,
                        const std::vector<Rational>& witness) {
        MetricCertificate cert;
        cert.t = t;
        cert.kind = MetricCertificate::Kind::Full;
        std::vector<Pair> pairs;
        std::map<Pair, int> index;
        detail::index_pairs(ps.n, pairs, index);
        for (size_t i = 0; i < pairs.size() && i < witness.size(); ++i)
            cert.weights.w[pairs[i]] = witness[i];
        return cert;
    };
    return detail::delta_bisect_family(fam, tol, opts);
}

inline DeltaResult delta_bisect(const WordTable& wt, const Rational& tol,
                                const DeltaOptions& opts = {}) {
    detail::require_valid_words(wt);
    detail::LpFamily fam;
    fam.n = wt.n;
    fam.at = [&wt](const Rational& t) { return build_invariant_metric_lp(wt, t).sys; };
    fam.certify = [&wt](const Rational& t, const std::vector<Rational>& witness) {
        MetricCertificate cert;
        cert.t = t;
        cert.kind = MetricCertificate::Kind::Class;
        for (size_t i = 0; i < witness.size(); ++i)
            cert.class_weights[static_cast<int>(i) + 1] = witness[i];
        return cert;
    };
    return detail::delta_bisect_family(fam, tol, opts);
}

struct MetricityResult {
    bool metric = false;
    MetricCertificate witness;          // realizing metric when metric
    std::vector<Rational> farkas;       // infeasibility evidence when not
};

namespace detail {

/// Equality variant: stretch rows tightened to sum of edges == x_{u,v}.
inline LinearSystem equality_lp(const LinearSystem& stretch_lp) {
    LinearSystem out = stretch_lp;
    for (const auto& row : stretch_lp.rows) {
        if (row.tag.rfind("path(", 0) != 0 && row.tag.rfind("stretch(", 0) != 0)
            continue;
        Row rev;
        rev.coeffs.resize(row.coeffs.size());
        for (size_t i = 0; i < row.coeffs.size(); ++i) rev.coeffs[i] = -row.coeffs[i];
        rev.rhs = -row.rhs;
        rev.tag = row.tag + "-rev";
        out.rows.push_back(std::move(rev));
    }
    return out;
}

}  // namespace detail

/**
 * Decide whether the system is metric: a metric exists whose distances make
 * every system path collinear (path cost equals endpoint distance). LP with
 * stretch rows as equalities at t = 1.
 */
inline MetricityResult is_metric(const PathSystem& ps, const DeltaOptions& opts = {}) {
    detail::require_consistent(ps);
    MetricLp lp = build_metric_lp(ps, Rational(1));
    LinearSystem eq = detail::equality_lp(lp.sys);
    Feasibility f = feasible(eq, SimplexOptions{opts.max_pivots});
    MetricityResult res;
    res.metric = f.feasible();
    if (f.feasible()) {
        res.witness.t = 1;
        res.witness.kind = MetricCertificate::Kind::Full;
        for (size_t i = 0; i < lp.pair_of_var.size(); ++i)
            res.witness.weights.w[lp.pair_of_var[i]] = f.witness[i];
    } else {
        res.farkas = std::move(f.farkas);
    }
    return res;
}

inline MetricityResult is_metric(const WordTable& wt, const DeltaOptions& opts = {}) {
    detail::require_valid_words(wt);
    InvariantLp lp = build_invariant_metric_lp(wt, Rational(1));
    LinearSystem eq = detail::equality_lp(lp.sys);
    Feasibility f = feasible(eq, SimplexOptions{opts.max_pivots});
    MetricityResult res;
    res.metric = f.feasible();
    if (f.feasible()) {
        res.witness.t = 1;
        res.witness.kind = MetricCertificate::Kind::Class;
        for (int a = 1; a <= lp.num_classes; ++a)
            res.witness.class_weights[a] = f.witness[a - 1];
    } else {
        res.farkas = std::move(f.farkas);
    }
    return res;
}

struct VerifyReport {
    bool ok = false;
    Rational max_stretch = 0;
    std::vector<std::string> violations;
};

/**
 * Check a full-kind certificate against a path system: positive weights on
 * every pair, every triangle inequality, and path cost <= t * distance for
 * every system path. Reports the maximum stretch attained.
 */
inline VerifyReport verify_certificate(const PathSystem& ps,
                                       const MetricCertificate& cert) {
    if (cert.kind != MetricCertificate::Kind::Full)
        throw PathsysError("verify_certificate: path system needs a full-kind certificate");
    VerifyReport rep;
    for (int u = 0; u < ps.n; ++u)
        for (int v = u + 1; v < ps.n; ++v)
            if (!cert.weights.has(u, v))
                throw MissingWeight("certificate lacks pair " +
                                    pair_str({u, v}));
    for (const auto& [key, val] : cert.weights.w)
        if (val <= 0)
            rep.violations.push_back("nonpositive weight at " + pair_str(key));

    for (int a = 0; a < ps.n; ++a)
        for (int b = a + 1; b < ps.n; ++b)
            for (int c = 0; c < ps.n; ++c) {
                if (c == a || c == b) continue;
                if (cert.weights.at(a, b) >
                    cert.weights.at(a, c) + cert.weights.at(c, b))
                    rep.violations.push_back("triangle violated: " +
                                             pair_str({a, b}) + " via " +
                                             std::to_string(c));
            }

    for (const auto& [key, p] : ps.paths) {
        Rational rho = cert.weights.at(key.first, key.second);
        if (rho <= 0) continue;  // already a positivity violation; stretch undefined
        Rational cost = path_cost(p, cert.weights);
        Rational stretch = cost / rho;
        rep.max_stretch = std::max(rep.max_stretch, stretch);
        if (cost > cert.t * rho)
            rep.violations.push_back("stretch row violated at " + pair_str(key) +
                                     ": cost/rho = " + format_rational(stretch) +
                                     " > t = " + format_rational(cert.t));
    }
    rep.ok = rep.violations.empty();
    return rep;
}

/**
 * Class-kind variant: positivity per class, every reduced triangle row
 * w_{class(a+-b)} <= w_a + w_b, and every word's stretch row.
 */
inline VerifyReport verify_certificate(const WordTable& wt,
                                       const MetricCertificate& cert) {
    if (cert.kind != MetricCertificate::Kind::Class)
        throw PathsysError("verify_certificate: word table needs a class-kind certificate");
    VerifyReport rep;
    int half = wt.n / 2;
    auto weight = [&](int cls) -> const Rational& {
        auto it = cert.class_weights.find(cls);
        if (it == cert.class_weights.end())
            throw MissingWeight("certificate lacks class " + std::to_string(cls));
        return it->second;
    };
    for (int a = 1; a <= half; ++a)
        if (weight(a) <= 0)
            rep.violations.push_back("nonpositive weight at class " + std::to_string(a));

    for (const auto& tri : detail::class_triangles(wt.n))
        if (weight(tri[0]) > weight(tri[1]) + weight(tri[2]))
            rep.violations.push_back("triangle violated: w" + std::to_string(tri[0]) +
                                     " <= w" + std::to_string(tri[1]) + " + w" +
                                     std::to_string(tri[2]));

    for (int a = 1; a <= half; ++a) {
        if (weight(a) <= 0) continue;  // already a positivity violation
        const auto& w = wt.word(a);
        Rational cost = 0;
        for (int letter : w) cost += weight(detail::class_of(letter, wt.n));
        Rational stretch = cost / weight(a);
        rep.max_stretch = std::max(rep.max_stretch, stretch);
        if (cost > cert.t * weight(a))
            rep.violations.push_back("stretch row violated at class " +
                                     std::to_string(a) + ": cost/rho = " +
                                     format_rational(stretch) + " > t = " +
                                     format_rational(cert.t));
    }
    rep.ok = rep.violations.empty();
    return rep;
}

struct ThresholdOptions {
    Rational width = Rational(1, Integer("10000000000000"));  // 1e-13 isolation
    ParamOptions param;
    long max_pivots = 1000000;
};

namespace detail {

inline Rational probe_margin(const Rational& span) {
    Rational m = span / 4;
    Rational cap(1, 1000000);
    return m < cap ? m : cap;
}

/// poly with root exactly at the rational r: q*t - p for r = p/q.
inline IntPoly exact_root_poly(const Rational& r) {
    return IntPoly::linear(-numerator(r), denominator(r));
}

}  // namespace detail

/**
 * Exact threshold of a homogeneous parametric system: the least t in the
 * interval at which the system (plus positivity x >= 1) becomes feasible.
 * Eliminates all variables but `keep` parametrically; each terminal row
 * gamma(t) * x_keep <= 0 is the sign condition gamma(t) <= 0. Candidates
 * (interval start, then condition-polynomial roots in ascending order) are
 * certified by exact rational probes just below (infeasible) and just above
 * (feasible) the isolating interval.
 */
inline AlgebraicThreshold exact_threshold(const ParamSystem& sys,
                                          const std::vector<int>& order, int keep,
                                          const ThresholdOptions& opts = {}) {
    for (const auto& row : sys.rows)
        if (!row.rhs.is_zero())
            throw PathsysError("exact_threshold: system must be homogeneous "
                               "(positivity is added to probes internally)");
    if (keep < 0 || keep >= sys.num_vars)
        throw PathsysError("exact_threshold: keep variable out of range");

    SimplexOptions sopts{opts.max_pivots};
    auto probe = [&](const Rational& t) {
        return feasible(with_lower_bounds(instantiate(sys, t)), sopts).feasible();
    };

    const RatInterval& iv = sys.interval;
    if (!iv.lo_open && probe(iv.lo)) {
        AlgebraicThreshold res;
        res.polynomial = detail::exact_root_poly(iv.lo);
        res.isolating = point_interval(iv.lo);
        res.decimal = to_double(iv.lo);
        return res;
    }

    auto cells = parametric_eliminate(sys, order, opts.param);

    bool ambiguity_seen = false;
    for (const auto& cell : cells) {
        if (cell.sign_ambiguous) {
            ambiguity_seen = true;
            continue;
        }

        // extract the sign-condition polynomials on this cell
        std::vector<IntPoly> conds;
        for (const auto& row : cell.rows) {
            for (int i = 0; i < static_cast<int>(row.coeffs.size()); ++i)
                if (i != keep && !row.coeffs[i].is_zero())
                    throw PathsysError(
                        "exact_threshold: order must cover every variable except keep");
            if (!row.coeffs[keep].is_zero()) conds.push_back(row.coeffs[keep]);
        }

        // breakpoints: all condition-polynomial roots inside the cell, each
        // tied to its source polynomial
        struct Brk {
            RatInterval iv;
            size_t poly;
        };
        std::vector<Brk> brks;
        for (size_t gi = 0; gi < conds.size(); ++gi)
            for (const auto& r : isolate_roots(conds[gi], cell.cell, opts.width))
                brks.push_back({r, gi});
        std::sort(brks.begin(), brks.end(),
                  [](const Brk& a, const Brk& b) { return a.iv.lo < b.iv.lo; });

        // overlapping intervals of different polynomials: shrink both until
        // disjoint; if they will not separate the polynomials share the root
        auto shrink = [&](Brk& b) {
            if (b.iv.is_point()) return;
            const IntPoly& g = conds[b.poly];
            int slo = g.sign_at(b.iv.lo);
            Rational m = b.iv.midpoint();
            int sm = g.sign_at(m);
            if (sm == 0) {
                b.iv = point_interval(m);
            } else if (sm == slo) {
                b.iv.lo = m;
            } else {
                b.iv.hi = m;
            }
        };
        std::vector<Brk> uniq;
        for (auto& b : brks) {
            if (!uniq.empty()) {
                Brk& prev = uniq.back();
                bool shared = false;
                for (int round = 0; round < 60 && b.iv.lo < prev.iv.hi; ++round) {
                    shrink(prev);
                    shrink(b);
                    if (prev.iv.is_point() && b.iv.is_point() &&
                        prev.iv.lo == b.iv.lo) {
                        shared = true;
                        break;
                    }
                }
                if (shared || b.iv.lo < prev.iv.hi) continue;  // same root: keep first
                if (prev.iv.is_point() && b.iv.is_point() && prev.iv.lo == b.iv.lo)
                    continue;
            }
            uniq.push_back(b);
        }

        auto all_sat_at = [&](const Rational& t) {
            for (const auto& g : conds)
                if (g.sign_at(t) > 0) return false;
            return true;
        };

        // walk subregions and breakpoints left to right; the first
        // satisfied stop is the candidate
        struct Candidate {
            IntPoly poly;
            RatInterval isolating;
            Rational below, above;  // probe points
        };
        std::optional<Candidate> cand;

        Rational cursor = cell.cell.lo;
        const Brk* prev_brk = nullptr;
        for (size_t bi = 0; bi <= uniq.size() && !cand; ++bi) {
            Rational seg_hi = bi < uniq.size() ? uniq[bi].iv.lo : cell.cell.hi;
            if (cursor < seg_hi && all_sat_at((cursor + seg_hi) / 2)) {
                Candidate c;
                Rational margin = detail::probe_margin(seg_hi - cursor);
                if (prev_brk) {
                    // least feasible t is the root isolated just left of here
                    c.poly = conds[prev_brk->poly].primitive();
                    c.isolating = prev_brk->iv;
                    c.below = c.isolating.is_point() ? c.isolating.lo - margin
                                                     : c.isolating.lo;
                    c.above = c.isolating.is_point() ? c.isolating.lo + margin
                                                     : c.isolating.hi;
                } else {
                    // satisfied from the scan start: threshold at the cell edge
                    c.poly = detail::exact_root_poly(cursor);
                    c.isolating = point_interval(cursor);
                    c.below = cursor - margin;
                    c.above = cursor + margin;
                }
                cand = std::move(c);
                break;
            }
            if (bi < uniq.size()) {
                const Brk& b = uniq[bi];
                if (b.iv.is_point() && all_sat_at(b.iv.lo)) {
                    // isolated feasible point
                    Candidate c;
                    c.poly = conds[b.poly].primitive();
                    c.isolating = point_interval(b.iv.lo);
                    c.below = b.iv.lo - detail::probe_margin(cell.cell.hi - cell.cell.lo);
                    c.above = b.iv.lo;  // the point itself is feasible
                    cand = std::move(c);
                    break;
                }
                cursor = b.iv.is_point() ? b.iv.lo : b.iv.hi;
                prev_brk = &uniq[bi];
            }
        }

        if (cand) {
            bool below_ok = !probe(cand->below);
            bool above_ok = probe(cand->above);
            if (below_ok && above_ok) {
                AlgebraicThreshold res;
                res.polynomial = cand->poly;
                RatInterval isol = cand->isolating;
                // refine to the requested width by sign bisection
                if (!isol.is_point()) {
                    int slo = cand->poly.sign_at(isol.lo);
                    Rational a = isol.lo, b = isol.hi;
                    while (b - a > opts.width) {
                        Rational m = (a + b) / 2;
                        int sm = cand->poly.sign_at(m);
                        if (sm == 0) {
                            a = b = m;
                            break;
                        }
                        (sm == slo ? a : b) = m;
                    }
                    isol = (a == b) ? point_interval(a) : RatInterval{a, b, true, true};
                }
                res.isolating = isol;
                res.decimal = to_double(isol.midpoint());
                return res;
            }
            if (!below_ok && ambiguity_seen)
                throw SignAmbiguous(
                    "feasibility starts inside an ambiguous cell before " +
                    cand->isolating.str());
            // otherwise: candidate not certified; keep scanning later cells
        }
    }

    if (ambiguity_seen)
        throw SignAmbiguous("no certified threshold outside ambiguous cells");
    throw NoThresholdInInterval("system stays infeasible on " + sys.interval.str());
}

/// Threshold of the invariance-reduced LP of a word table; order and keep
/// are class ids (1..floor(n/2)).
inline AlgebraicThreshold exact_threshold(const WordTable& wt, const RatInterval& interval,
                                          const std::vector<int>& order, int keep,
                                          const ThresholdOptions& opts = {}) {
    ParamSystem sys = build_invariant_param_lp(wt, interval);
    std::vector<int> order0;
    for (int a : order) order0.push_back(a - 1);
    return exact_threshold(sys, order0, keep - 1, opts);
}

/// Named parametric system (variable names for I/O and order selection).
struct NamedParamSystem {
    ParamSystem sys;
    std::vector<std::string> names;

    int var(const std::string& name) const {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        throw PathsysError("unknown variable " + name);
    }
};

/**
 * The ten-row subsystem of the Paley-29 reduced LP whose elimination yields
 * the exact threshold: five stretch rows and the five triangle rows tying
 * them together. Variables w1,w3,w4,w5,w7,w8,w9,w10,w11,w14.
 */
inline NamedParamSystem paley29_reduced_subsystem() {
    NamedParamSystem out;
    out.names = {"w1", "w3", "w4", "w5", "w7", "w8", "w9", "w10", "w11", "w14"};
    ParamSystem& sys = out.sys;
    sys.num_vars = 10;
    sys.interval = RatInterval{Rational(1), Rational(6) / 5, true, false};

    auto add = [&](std::initializer_list<std::pair<const char*, IntPoly>> terms,
                   const std::string& tag) {
        std::vector<IntPoly> coeffs(sys.num_vars);
        for (const auto& [name, poly] : terms) coeffs[out.var(name)] = poly;
        sys.rows.push_back({std::move(coeffs), IntPoly(), tag});
    };
    const IntPoly one = IntPoly::constant(1);
    const IntPoly neg = IntPoly::constant(-1);
    const IntPoly two = IntPoly::constant(2);
    const IntPoly minus_t = IntPoly::linear(0, -1);

    add({{"w1", IntPoly::constant(3)}, {"w3", minus_t}}, "stretch(3)");
    add({{"w4", two}, {"w8", minus_t}}, "stretch(8)");
    add({{"w5", two}, {"w10", minus_t}}, "stretch(10)");
    add({{"w9", two}, {"w11", minus_t}}, "stretch(11)");
    add({{"w7", two}, {"w14", minus_t}}, "stretch(14)");
    add({{"w3", one}, {"w1", neg}, {"w4", neg}}, "tri(3<=1+4)");
    add({{"w8", one}, {"w1", neg}, {"w9", neg}}, "tri(8<=1+9)");
    add({{"w10", one}, {"w1", neg}, {"w9", neg}}, "tri(10<=1+9)");
    add({{"w11", one}, {"w4", neg}, {"w7", neg}}, "tri(11<=4+7)");
    add({{"w14", one}, {"w5", neg}, {"w9", neg}}, "tri(14<=5+9)");
    return out;
}

/// The elimination order used for the subsystem (all variables except w9).
inline std::vector<int> paley29_elimination_order(const NamedParamSystem& s) {
    std::vector<int> order;
    for (const char* name : {"w3", "w8", "w10", "w11", "w14", "w7", "w4", "w5", "w1"})
        order.push_back(s.var(name));
    return order;
}

/**
 * The fourteen class weights certifying the Paley-29 threshold, as
 * polynomials in the threshold value, evaluated at a rational r. At the
 * exact threshold the tied triangle rows hold with equality identically
 * in r, so the certificate stays valid for any rational approximation
 * once t is padded slightly above r.
 */
inline std::map<int, Rational> paley29_certificate_weights(const Rational& r) {
    Rational r2 = r * r;
    std::map<int, Rational> w;
    w[1] = r2;
    w[2] = 2 * r;
    w[3] = 3 * r;
    w[4] = 3 * r - r2;
    w[5] = 3 * r - r2;
    w[6] = 6 - 2 * r - r2;
    w[7] = 6 - 2 * r - r2;
    w[8] = 6 - 2 * r;
    w[9] = 6 - 2 * r - r2;
    w[10] = 6 - 2 * r;
    w[11] = 6 + r - 2 * r2;
    w[12] = 6 + r - 2 * r2;
    w[13] = 6 + r - 3 * r2;
    w[14] = 6 + r - 2 * r2;
    return w;
}

}  // namespace pathsys
