#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pathsys/errors.hpp"
#include "pathsys/graph.hpp"
#include "pathsys/rational.hpp"

namespace pathsys {

struct CyclicGroup {
    int n;

    explicit CyclicGroup(int n_) : n(n_) {
        if (n < 2) throw PathsysError("cyclic group needs n >= 2");
    }

    int norm(long x) const {
        long r = x % n;
        return static_cast<int>(r < 0 ? r + n : r);
    }

    int neg(int x) const { return norm(-static_cast<long>(x)); }
};

/**
 * Generator words over Z_n (additive): words[x] is a list of residues
 * summing to x; the walk 0, w1, w1+w2, ... is the system path from 0 to x,
 * translated to every other pair. Closure under inversion and contiguous
 * subwords makes the expanded system consistent and Z_n-invariant.
 */
struct WordTable {
    int n = 0;
    std::map<int, std::vector<int>> words;

    const std::vector<int>& word(int x) const {
        auto it = words.find(x);
        if (it == words.end())
            throw WordClosureViolation(WordClosureViolation::Kind::Missing,
                                       "no word for element " + std::to_string(x));
        return it->second;
    }
};

namespace detail {

inline std::string word_str(const std::vector<int>& w) {
    std::string s = "(";
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(w[i]);
    }
    return s + ")";
}

}  // namespace detail

/**
 * Enforce the word-table closure invariants:
 *   - a word for every nonzero element, letters in 1..n-1, letter sum correct;
 *   - no contiguous subword sums to zero (expanded paths stay simple);
 *   - inversion: word(-x) is the reversed negation of word(x);
 *   - subwords: a contiguous subword summing to y is exactly word(y)
 *     (letters are then words of size one, i.e. graph edges).
 * Throws WordClosureViolation identifying the first failure.
 */
inline void validate_words(const WordTable& wt) {
    using K = WordClosureViolation::Kind;
    if (wt.n < 2) throw PathsysError("word table: n >= 2 required");
    CyclicGroup g(wt.n);

    for (int x = 1; x < wt.n; ++x)
        if (!wt.words.count(x))
            throw WordClosureViolation(K::Missing,
                                       "no word for element " + std::to_string(x));
    for (const auto& [x, w] : wt.words) {
        if (x <= 0 || x >= wt.n)
            throw WordClosureViolation(K::BadLetter,
                                       "word key " + std::to_string(x) + " out of range");
        if (w.empty())
            throw WordClosureViolation(K::Sum, "empty word for " + std::to_string(x));
        long sum = 0;
        for (int letter : w) {
            if (letter <= 0 || letter >= wt.n)
                throw WordClosureViolation(K::BadLetter,
                                           "letter " + std::to_string(letter) +
                                               " of word " + std::to_string(x) +
                                               " out of range");
            sum += letter;
        }
        if (g.norm(sum) != x)
            throw WordClosureViolation(K::Sum, "word " + detail::word_str(w) +
                                                   " does not sum to " + std::to_string(x));
    }

    for (const auto& [x, w] : wt.words) {
        // inversion closure
        const auto& winv = wt.word(g.neg(x));
        bool ok = winv.size() == w.size();
        for (size_t i = 0; ok && i < w.size(); ++i)
            ok = winv[i] == g.neg(w[w.size() - 1 - i]);
        if (!ok)
            throw WordClosureViolation(
                K::Inversion, "word(" + std::to_string(g.neg(x)) + ") = " +
                                  detail::word_str(winv) +
                                  " is not the reversed negation of word(" +
                                  std::to_string(x) + ") = " + detail::word_str(w));

        // contiguous subword closure
        std::vector<long> prefix(w.size() + 1, 0);
        for (size_t i = 0; i < w.size(); ++i) prefix[i + 1] = prefix[i] + w[i];
        for (size_t i = 0; i <= w.size(); ++i) {
            for (size_t j = i + 1; j <= w.size(); ++j) {
                if (i == 0 && j == w.size()) continue;
                int y = g.norm(prefix[j] - prefix[i]);
                if (y == 0)
                    throw WordClosureViolation(
                        K::ZeroSubword, "subword of word(" + std::to_string(x) +
                                            ") sums to zero (walk revisits a vertex)");
                const auto& wy = wt.word(y);
                bool match = wy.size() == j - i;
                for (size_t r = 0; match && r < wy.size(); ++r)
                    match = wy[r] == w[i + r];
                if (!match)
                    throw WordClosureViolation(
                        K::Subword, "subword of word(" + std::to_string(x) +
                                        ") summing to " + std::to_string(y) +
                                        " differs from word(" + std::to_string(y) +
                                        ") = " + detail::word_str(wy));
            }
        }
    }
}

/// Prefix-sum walk x -> y realizing word(y - x).
inline Path expand_pair(const WordTable& wt, int x, int y) {
    CyclicGroup g(wt.n);
    int z = g.norm(static_cast<long>(y) - x);
    const auto& w = wt.word(z);
    std::vector<int> seq{x};
    long cur = x;
    for (int letter : w) {
        cur += letter;
        seq.push_back(g.norm(cur));
    }
    return Path(std::move(seq));
}

/**
 * Expand a validated word table into the full invariant path system
 * P_{x,y} = x + P_{0,y-x}.
 */
inline PathSystem build_from_words(const WordTable& wt) {
    validate_words(wt);
    PathSystem ps;
    ps.n = wt.n;
    ps.origin = SystemOrigin::InvariantExpanded;
    for (int u = 0; u < wt.n; ++u)
        for (int v = u + 1; v < wt.n; ++v) ps.set_path(expand_pair(wt, u, v));
    return ps;
}

/// Distances from 0 in the Cayley graph of Z_n with connection set X
/// (symmetrized internally); -1 where unreachable.
inline std::vector<int> bfs_all(int n, const std::vector<int>& X) {
    CyclicGroup g(n);
    std::set<int> steps;
    for (int x : X) {
        int c = g.norm(x);
        if (c == 0) throw PathsysError("bfs: 0 in connection set");
        steps.insert(c);
        steps.insert(g.neg(c));
    }
    std::vector<int> dist(n, -1);
    std::deque<int> queue{0};
    dist[0] = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int s : steps) {
            int v = g.norm(static_cast<long>(u) + s);
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

inline std::optional<int> bfs_distance(int n, const std::vector<int>& X, int target) {
    CyclicGroup g(n);
    int d = bfs_all(n, X)[g.norm(target)];
    return d < 0 ? std::nullopt : std::optional<int>(d);
}

/// The derived data of the lower-bound construction.
struct CayleyParams {
    int n = 0;
    std::vector<int> X;  // symmetric, sorted residues
    int m = 0;
    int d = 0;             // max BFS hops to m*g over g in X
    Rational bound;        // m / (d |X|)
    std::vector<int> S;    // connection set: X plus everything outside small powers
};

/**
 * The Cayley lower-bound construction on Z_n. Verifies the three conditions
 * (element orders exceed 2m; no collision i*g = +-j*h between distinct
 * generator classes with 1 <= i,j <= m; d computed by BFS), then produces
 * the word table: powers i*g walk i steps of g (canonical generator of the
 * class), every other element is a single-letter word over the connection
 * set S. The expanded system satisfies Delta >= m / (d |X|).
 */
inline std::pair<CayleyParams, WordTable> cayley_construction(int n,
                                                              const std::vector<int>& X_in,
                                                              int m) {
    if (n < 2) throw PathsysError("cayley: n >= 2 required");
    if (m < 1) throw PathsysError("cayley: m >= 1 required");
    CyclicGroup g(n);

    std::set<int> X;
    for (int x : X_in) {
        int c = g.norm(x);
        if (c == 0) throw PathsysError("cayley: 0 in generator set");
        X.insert(c);
        X.insert(g.neg(c));
    }
    if (X.empty()) throw PathsysError("cayley: empty generator set");

    for (int x : X) {
        long order = n / std::__gcd(static_cast<long>(n), static_cast<long>(x));
        if (order <= 2L * m)
            throw ConditionOrder("order of generator " + std::to_string(x) + " is " +
                                 std::to_string(order) + ", not > 2m = " +
                                 std::to_string(2 * m));
    }

    std::vector<int> reps;  // canonical class representatives min(g, n-g)
    for (int x : X)
        if (x <= g.neg(x)) reps.push_back(x);
    std::sort(reps.begin(), reps.end());

    for (size_t a = 0; a < reps.size(); ++a) {
        for (size_t b = a + 1; b < reps.size(); ++b) {
            for (int i = 1; i <= m; ++i) {
                for (int j = 1; j <= m; ++j) {
                    long lhs = g.norm(static_cast<long>(i) * reps[a]);
                    if (lhs == g.norm(static_cast<long>(j) * reps[b]))
                        throw ConditionCollision(
                            "collision " + std::to_string(i) + "*" +
                                std::to_string(reps[a]) + " = " + std::to_string(j) +
                                "*" + std::to_string(reps[b]) + " (mod " +
                                std::to_string(n) + ")",
                            reps[a], i, reps[b], j);
                    if (lhs == g.norm(-static_cast<long>(j) * reps[b]))
                        throw ConditionCollision(
                            "collision " + std::to_string(i) + "*" +
                                std::to_string(reps[a]) + " = -" + std::to_string(j) +
                                "*" + std::to_string(reps[b]) + " (mod " +
                                std::to_string(n) + ")",
                            reps[a], i, reps[b], -j);
                }
            }
        }
    }

    std::vector<int> Xv(X.begin(), X.end());
    std::vector<int> dist = bfs_all(n, Xv);
    int d = 0;
    for (int x : X) d = std::max(d, dist[g.norm(static_cast<long>(m) * x)]);

    WordTable wt;
    wt.n = n;
    std::set<int> powers;
    for (int r : reps) {
        for (int i = 1; i <= m; ++i) {
            int e = g.norm(static_cast<long>(i) * r);
            wt.words[e] = std::vector<int>(i, r);
            wt.words[g.neg(e)] = std::vector<int>(i, g.neg(r));
            powers.insert(e);
            powers.insert(g.neg(e));
        }
    }
    std::vector<int> S;
    for (int y = 1; y < n; ++y) {
        if (!powers.count(y)) {
            wt.words[y] = {y};
            S.push_back(y);
        } else if (X.count(y)) {
            S.push_back(y);
        }
    }
    std::sort(S.begin(), S.end());

    validate_words(wt);  // construction guarantees closure; fail loudly if not

    CayleyParams params;
    params.n = n;
    params.X = Xv;
    params.m = m;
    params.d = d;
    params.bound = Rational(m, static_cast<long>(d) * static_cast<long>(Xv.size()));
    params.S = std::move(S);
    return {params, wt};
}

struct SampleResult {
    std::vector<int> X;  // symmetrized, sorted
    int attempts = 0;
    int diameter = 0;
};

namespace detail {

inline bool is_prime(long p) {
    if (p < 2) return false;
    for (long q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

inline long pow_mod(long base, long exp, long mod) {
    long r = 1;
    base %= mod;
    if (base < 0) base += mod;
    while (exp > 0) {
        if (exp & 1) r = r * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return r;
}

/// Euler's criterion; p an odd prime, a not divisible by p: +1 or -1.
inline int legendre(long a, long p) {
    long r = pow_mod(a, (p - 1) / 2, p);
    return r == 1 ? 1 : -1;
}

}  // namespace detail

/**
 * Seeded rejection sampler for collision-free generator sets: draws k
 * distinct nonzero elements of Z_n (n prime), symmetrizes, and accepts when
 * no forbidden pair i*a = +-j*b (1 <= i,j <= m, a != +-b) exists and every
 * element order exceeds 2m. Reports the attempt count and the BFS diameter
 * of the accepted Cayley graph.
 */
inline SampleResult sample_X(int n, int k, int m, unsigned long seed,
                             int max_attempts) {
    if (!detail::is_prime(n)) throw PathsysError("sample_X: n must be prime");
    if (k < 2 || m < 1) throw PathsysError("sample_X: need k >= 2, m >= 1");
    CyclicGroup g(n);
    std::mt19937_64 rng(seed);

    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        std::set<int> draw;
        while (static_cast<int>(draw.size()) < k)
            draw.insert(static_cast<int>(rng() % (n - 1)) + 1);

        std::set<int> X;
        for (int x : draw) {
            X.insert(x);
            X.insert(g.neg(x));
        }

        bool ok = n > 2 * m;  // prime: every nonzero element has order n
        std::vector<int> reps;
        for (int x : X)
            if (ok && x <= g.neg(x)) reps.push_back(x);
        for (size_t a = 0; ok && a < reps.size(); ++a)
            for (size_t b = a + 1; ok && b < reps.size(); ++b)
                for (int i = 1; ok && i <= m; ++i)
                    for (int j = 1; ok && j <= m; ++j) {
                        long lhs = g.norm(static_cast<long>(i) * reps[a]);
                        if (lhs == g.norm(static_cast<long>(j) * reps[b]) ||
                            lhs == g.norm(-static_cast<long>(j) * reps[b]))
                            ok = false;
                    }
        if (!ok) continue;

        SampleResult res;
        res.X.assign(X.begin(), X.end());
        res.attempts = attempt;
        int diam = 0;
        for (int dv : bfs_all(n, res.X)) {
            if (dv < 0) {
                ok = false;
                break;
            }
            diam = std::max(diam, dv);
        }
        if (!ok) continue;  // disconnected draw (cannot happen for prime n)
        res.diameter = diam;
        return res;
    }
    throw SamplingExhausted("no admissible X after " + std::to_string(max_attempts) +
                            " attempts (n=" + std::to_string(n) +
                            ", k=" + std::to_string(k) + ", m=" + std::to_string(m) + ")");
}

/**
 * The quadratic-residue path system on Z_p: residue differences are edges;
 * a non-residue difference x is bridged through its half (x/2 twice), except
 * +-3 which walk three unit steps. Requires p prime, p = 1 (mod 4), with
 * 2 and 3 both non-residues so the three rules are well-formed.
 */
inline WordTable paley_system(int p) {
    using detail::is_prime;
    using detail::legendre;
    if (!is_prime(p)) throw InvalidPrime(std::to_string(p) + " is not prime");
    if (p % 4 != 1)
        throw InvalidPrime(std::to_string(p) + " != 1 (mod 4): -1 must be a residue");
    if (legendre(2, p) != -1)
        throw InvalidPrime("2 is a quadratic residue mod " + std::to_string(p) +
                           ": halving rule ill-formed");
    if (legendre(3, p) != -1)
        throw InvalidPrime("3 is a quadratic residue mod " + std::to_string(p) +
                           ": three-step rule ill-formed");

    CyclicGroup g(p);
    long inv2 = (p + 1) / 2;
    WordTable wt;
    wt.n = p;
    for (int x = 1; x < p; ++x) {
        if (legendre(x, p) == 1) {
            wt.words[x] = {x};
        } else if (x == 3) {
            wt.words[x] = {1, 1, 1};
        } else if (x == p - 3) {
            wt.words[x] = {p - 1, p - 1, p - 1};
        } else {
            int h = g.norm(static_cast<long>(x) * inv2);
            wt.words[x] = {h, h};
        }
    }
    try {
        validate_words(wt);
    } catch (const WordClosureViolation& e) {
        throw InvalidPrime("paley rules conflict for p = " + std::to_string(p) + ": " +
                           e.what());
    }
    return wt;
}

/**
 * The 10-vertex example: outer cycle 0-4, inner pentagram 5-9 (step two),
 * spokes i <-> i+5. Adjacent pairs are edges, 25 non-adjacent pairs take
 * their unique 2-hop path, and five designated pairs take 3-hop paths --
 * consistent, non-metric, with Delta = 1 unattained.
 */
inline PathSystem petersen_system() {
    Graph g(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0},          // outer
                 {0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9},          // spokes
                 {5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5}});        // inner
    const std::vector<std::vector<int>> three_hop{
        {1, 0, 5, 7}, {2, 1, 6, 8}, {3, 2, 7, 9}, {4, 3, 8, 5}, {0, 4, 9, 6}};

    PathSystem ps;
    ps.n = 10;
    for (const auto& e : g.edges) ps.set_path(Path({e.first, e.second}));
    std::set<Pair> special;
    for (const auto& seq : three_hop) {
        ps.set_path(Path(seq));
        special.insert(make_pair_key(seq.front(), seq.back()));
    }
    for (int u = 0; u < 10; ++u) {
        for (int v = u + 1; v < 10; ++v) {
            Pair key{u, v};
            if (g.has_edge(u, v) || special.count(key)) continue;
            int common = -1;
            for (int c = 0; c < 10; ++c)
                if (c != u && c != v && g.has_edge(u, c) && g.has_edge(c, v)) {
                    common = c;
                    break;  // strongly regular: the common neighbor is unique
                }
            ps.set_path(Path({u, common, v}));
        }
    }
    return ps;
}

}  // namespace pathsys
