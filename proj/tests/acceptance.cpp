// End-to-end acceptance gate. Runs nine scenario checks against the built-in
// example systems and prints one [PASS]/[FAIL] line per criterion; the exit
// code is the number of failures. Each criterion is independent and any
// stated runtime budget is enforced.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "pathsys/delta.hpp"
#include "pathsys/groups.hpp"
#include "pathsys/linsys.hpp"
#include "pathsys/oracle.hpp"

using namespace pathsys;

namespace {

struct Check {
    bool pass = true;
    std::string note;

    void fail(const std::string& why) {
        pass = false;
        if (!note.empty()) note += "; ";
        note += why;
    }

    void expect(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
};

std::string fmt_seconds(double s) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << s << "s";
    return os.str();
}

// ---- criterion bodies -------------------------------------------------------

Check criterion1_petersen() {
    Check c;
    PathSystem pet = petersen_system();
    MetricityResult mr = is_metric(pet);
    c.expect(!mr.metric, "petersen reported metric");
    LinearSystem eq = detail::equality_lp(build_metric_lp(pet, Rational(1)).sys);
    c.expect(valid_farkas(eq, mr.farkas), "farkas vector fails substitution");

    DeltaResult dr = delta_bisect(pet, Rational(1, 1000000));
    c.expect(dr.lo == 1, "bracket lo != 1");
    c.expect(dr.hi <= Rational(1000001, 1000000), "bracket hi > 1 + 1e-6");
    c.expect(!dr.lo_evidence.empty(), "no infeasibility evidence at lo");
    return c;
}

Check criterion2_paley_bracket() {
    Check c;
    DeltaResult dr = delta_bisect(paley_system(29), Rational(1, 100000000));
    // the bracket must pin the algebraic threshold: middle root of
    // 2t^3 - 3t^2 - 10t + 12, approx 1.1034306693
    c.expect(dr.lo >= Rational(11034, 10000), "bracket lo below 1.1034");
    c.expect(dr.hi <= Rational(11035, 10000), "bracket hi above 1.1035");
    c.expect(dr.hi - dr.lo <= Rational(1, 100000000), "bracket wider than 1e-8");

    IntPoly cubic({Integer(12), Integer(-10), Integer(-3), Integer(2)});
    Rational mid = (dr.lo + dr.hi) / 2;
    Rational resid = cubic.eval(mid);
    if (resid < 0) resid = -resid;
    c.expect(resid <= Rational(1, 1000000), "midpoint residual above 1e-6");
    return c;
}

Check criterion3_exact_threshold() {
    Check c;
    NamedParamSystem sub = paley29_reduced_subsystem();
    AlgebraicThreshold th =
        exact_threshold(sub.sys, paley29_elimination_order(sub), sub.var("w9"));

    IntPoly quartic({Integer(24), Integer(-8), Integer(-16), Integer(1), Integer(2)});
    c.expect(th.polynomial.normalized() == quartic.normalized(),
             "terminal polynomial is not (t+2)(2t^3-3t^2-10t+12)");

    IntPoly cubic({Integer(12), Integer(-10), Integer(-3), Integer(2)});
    const RatInterval& iv = th.isolating;
    c.expect(iv.lo > Rational(11, 10) && iv.hi < Rational(111, 100),
             "isolating interval misses the middle root region");
    if (iv.is_point())
        c.expect(cubic.sign_at(iv.lo) == 0, "claimed exact root is not a root");
    else
        c.expect(cubic.sign_at(iv.lo) * cubic.sign_at(iv.hi) < 0,
                 "no cubic sign change across the isolating interval");
    c.expect(iv.width() <= ThresholdOptions{}.width, "isolating interval too wide");
    return c;
}

Check criterion4_certificate() {
    Check c;
    NamedParamSystem sub = paley29_reduced_subsystem();
    AlgebraicThreshold th =
        exact_threshold(sub.sys, paley29_elimination_order(sub), sub.var("w9"));
    // isolation width 1e-13 puts the midpoint within 1e-12 of the true root
    Rational r = th.isolating.midpoint();

    MetricCertificate cert;
    cert.kind = MetricCertificate::Kind::Class;
    cert.t = r + Rational(1, 1000000000);
    cert.class_weights = paley29_certificate_weights(r);
    c.expect(cert.class_weights.size() == 14, "expected fourteen class weights");

    VerifyReport rep = verify_certificate(paley_system(29), cert);
    c.expect(rep.ok, rep.violations.empty() ? "verify failed" : rep.violations[0]);
    c.expect(rep.max_stretch <= cert.t, "max stretch exceeds t");
    return c;
}

Check criterion5_cayley() {
    Check c;
    auto [params, wt] = cayley_construction(101, {1, 10}, 9);
    c.expect(params.X == std::vector<int>{1, 10, 91, 100}, "wrong symmetrized X");
    c.expect(params.d == 2, "d != 2");
    c.expect(params.bound == Rational(9, 8), "bound != 9/8");

    PathSystem full = build_from_words(wt);
    ConsistencyReport rep = validate_system(full);
    c.expect(rep.consistent, "expanded system fails validation");

    InvariantLp lp =
        build_invariant_metric_lp(wt, Rational(9, 8) - Rational(1, 1000000));
    Feasibility f = feasible(lp.sys);
    c.expect(!f.feasible(), "reduced LP feasible below the bound");
    c.expect(valid_farkas(lp.sys, f.farkas), "farkas vector fails substitution");
    return c;
}

Check criterion6_oracle() {
    Check c;
    auto check_n = [&](int n, long expected) {
        long count_a = enumerate_consistent_systems(n, nullptr);
        std::vector<PathSystem> systems;
        long count_b = enumerate_consistent_systems(
            n, [&](const PathSystem& ps) { systems.push_back(ps); });
        c.expect(count_a == expected && count_b == expected,
                 "K" + std::to_string(n) + " count != " + std::to_string(expected));

        std::vector<int> order;
        for (int v = 1; v < n * (n - 1) / 2; ++v) order.push_back(v);
        for (size_t i = 0; i < systems.size() && c.pass; ++i) {
            DeltaResult dr = delta_bisect(systems[i], Rational(1, 1000000));
            ParamSystem par = build_metric_param_lp(
                systems[i], closed_interval(Rational(1), Rational(n)));
            AlgebraicThreshold th = exact_threshold(par, order, 0);
            if (!(dr.lo <= th.isolating.lo && th.isolating.hi <= dr.hi))
                c.fail("K" + std::to_string(n) + " system " + std::to_string(i) +
                       ": bracket misses isolating interval");
        }
    };
    check_n(3, 4);
    check_n(4, 53);
    return c;
}

Check criterion7_metric_systems() {
    Check c;
    Graph k6(6);
    for (int u = 0; u < 6; ++u)
        for (int v = u + 1; v < 6; ++v) k6.add_edge(u, v);
    for (unsigned seed = 0; seed < 20 && c.pass; ++seed) {
        std::mt19937 rng(seed);
        std::uniform_int_distribution<int> draw(0, 999);
        PairWeights w;
        for (int u = 0; u < 6; ++u)
            for (int v = u + 1; v < 6; ++v)
                w.set(u, v, Rational(1000 + draw(rng), 1000));
        ShortestPathResult res = shortest_path_system(k6, w);
        if (!is_metric(res.system).metric) {
            c.fail("seed " + std::to_string(seed) + " not metric");
            break;
        }
        DeltaResult dr = delta_bisect(res.system, Rational(1, 1000000));
        if (!(dr.hi <= Rational(1000001, 1000000)))
            c.fail("seed " + std::to_string(seed) + " delta hi > 1 + 1e-6");
    }
    return c;
}

Check criterion8_sampler() {
    Check c;
    const int n = 10007, k = 12, m = 5;
    int successes = 0;
    for (unsigned long seed = 0; seed < 10; ++seed) {
        SampleResult s;
        try {
            s = sample_X(n, k, m, seed, 20);
        } catch (const SamplingExhausted&) {
            continue;
        }
        CyclicGroup g(n);
        std::set<int> reps;
        for (int x : s.X) {
            long order = n / std::__gcd(static_cast<long>(n), static_cast<long>(x));
            if (order <= 2L * m) c.fail("seed " + std::to_string(seed) + ": small order");
            reps.insert(std::min(x, g.neg(x)));
        }
        std::vector<int> rv(reps.begin(), reps.end());
        for (size_t a = 0; a < rv.size(); ++a)
            for (size_t b = a + 1; b < rv.size(); ++b)
                for (int i = 1; i <= m; ++i)
                    for (int j = 1; j <= m; ++j) {
                        long lhs = g.norm(static_cast<long>(i) * rv[a]);
                        if (lhs == g.norm(static_cast<long>(j) * rv[b]) ||
                            lhs == g.norm(-static_cast<long>(j) * rv[b]))
                            c.fail("seed " + std::to_string(seed) + ": forbidden pair");
                    }
        std::vector<int> dist = bfs_all(n, s.X);
        int diameter = 0;
        for (int y = 1; y < n; ++y) {
            if (dist[y] < 0) c.fail("seed " + std::to_string(seed) + ": disconnected");
            diameter = std::max(diameter, dist[y]);
        }
        if (diameter != s.diameter)
            c.fail("seed " + std::to_string(seed) + ": diameter mismatch");
        if (diameter > 12)
            c.fail("seed " + std::to_string(seed) + ": diameter " +
                   std::to_string(diameter) + " > 12");
        ++successes;
    }
    c.expect(successes >= 8,
             "only " + std::to_string(successes) + "/10 seeds succeeded");
    return c;
}

Check criterion9_properties() {
    Check c;
    // monotonicity: feasibility at t0 implies feasibility at any t1 > t0
    std::vector<PathSystem> pool;
    enumerate_consistent_systems(4, [&](const PathSystem& ps) { pool.push_back(ps); });
    PathSystem pet = petersen_system();
    std::mt19937 rng(20260823);
    for (int trial = 0; trial < 50 && c.pass; ++trial) {
        const PathSystem& ps = trial % 10 == 9 ? pet : pool[rng() % pool.size()];
        Rational t0(1000 + static_cast<int>(rng() % 2000), 1000);
        Rational t1(1000 + static_cast<int>(rng() % 2000), 1000);
        if (t0 > t1) std::swap(t0, t1);
        if (t0 == t1) t1 += Rational(1, 1000);
        bool f0 = feasible(build_metric_lp(ps, t0).sys).feasible();
        bool f1 = feasible(build_metric_lp(ps, t1).sys).feasible();
        if (f0 && !f1)
            c.fail("trial " + std::to_string(trial) + ": feasible at " +
                   format_rational(t0) + " but not at " + format_rational(t1));
    }

    // projection agreement: full FM elimination vs simplex on random systems
    std::mt19937 rng2(20250823);
    for (int trial = 0; trial < 200 && c.pass; ++trial) {
        int n = 1 + static_cast<int>(rng2() % 5);
        int m = 2 + static_cast<int>(rng2() % 7);
        LinearSystem sys;
        sys.num_vars = n;
        for (int i = 0; i < m; ++i) {
            std::vector<Rational> coeffs(n);
            for (auto& x : coeffs) x = Rational(static_cast<int>(rng2() % 9) - 4);
            sys.add_row(std::move(coeffs), Rational(static_cast<int>(rng2() % 11) - 5),
                        "r" + std::to_string(i));
        }
        std::vector<int> order(n);
        for (int v = 0; v < n; ++v) order[v] = v;
        LinearSystem proj = fm_eliminate(sys, order);
        bool proj_feasible = true;
        for (const auto& row : proj.rows)
            if (row.rhs < 0) proj_feasible = false;
        if (feasible(sys).feasible() != proj_feasible)
            c.fail("fm/simplex disagreement on trial " + std::to_string(trial));
    }
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* what;
        double budget_s;  // 0 = unenforced
        std::function<Check()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "petersen is non-metric yet bracketed at [1, 1+1e-6]", 10,
         criterion1_petersen},
        {2, "paley-29 bracket pins the cubic threshold to 1e-8", 30,
         criterion2_paley_bracket},
        {3, "parametric elimination isolates the exact threshold root", 10,
         criterion3_exact_threshold},
        {4, "fourteen class weights verify at the algebraic threshold", 0,
         criterion4_certificate},
        {5, "cayley(101, {1,10}, 9) certifies the 9/8 lower bound", 60,
         criterion5_cayley},
        {6, "delta brackets contain exact thresholds on all K3/K4 systems", 300,
         criterion6_oracle},
        {7, "seeded shortest-path systems on K6 are metric", 0,
         criterion7_metric_systems},
        {8, "sampler finds collision-free sets at n = 10007", 0,
         criterion8_sampler},
        {9, "probe monotonicity and fm/simplex agreement hold", 0,
         criterion9_properties},
    };

    int failures = 0;
    for (const auto& cr : criteria) {
        auto start = std::chrono::steady_clock::now();
        Check c;
        try {
            c = cr.run();
        } catch (const std::exception& e) {
            c.pass = false;
            c.note = std::string("exception: ") + e.what();
        }
        double elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
        if (cr.budget_s > 0 && elapsed > cr.budget_s) {
            c.pass = false;
            c.note += c.note.empty() ? "" : "; ";
            c.note += "over budget (" + fmt_seconds(elapsed) + " > " +
                      fmt_seconds(cr.budget_s) + ")";
        }
        std::cout << (c.pass ? "[PASS]" : "[FAIL]") << " criterion " << cr.id << ": "
                  << cr.what << " (" << fmt_seconds(elapsed) << ")";
        if (!c.note.empty()) std::cout << " -- " << c.note;
        std::cout << "\n";
        if (!c.pass) ++failures;
    }
    return failures;
}
