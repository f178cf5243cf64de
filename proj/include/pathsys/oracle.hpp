#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "pathsys/errors.hpp"
#include "pathsys/graph.hpp"
#include "pathsys/rational.hpp"

namespace pathsys {

/// All-pairs shortest-path distances; symmetric with zero diagonal.
struct DistanceMatrix {
    int n = 0;
    PairWeights d;

    Rational at(int u, int v) const {
        if (u == v) return 0;
        return d.at(u, v);
    }
};

struct ShortestPathResult {
    PathSystem system;
    DistanceMatrix dist;
};

namespace detail {

/// Dijkstra with exact weights; `ban` removes one edge. Unreachable
/// vertices stay unset.
inline std::vector<std::optional<Rational>> dijkstra(const Graph& g,
                                                     const PairWeights& w, int src,
                                                     std::optional<Pair> ban = {}) {
    std::vector<std::vector<std::pair<int, Rational>>> adj(g.n);
    for (const auto& e : g.edges) {
        if (ban && *ban == e) continue;
        const Rational& c = w.at(e.first, e.second);
        adj[e.first].push_back({e.second, c});
        adj[e.second].push_back({e.first, c});
    }
    std::vector<std::optional<Rational>> dist(g.n);
    std::vector<bool> done(g.n, false);
    dist[src] = Rational(0);
    for (;;) {
        int u = -1;
        for (int i = 0; i < g.n; ++i)
            if (!done[i] && dist[i] && (u < 0 || *dist[i] < *dist[u])) u = i;
        if (u < 0) break;
        done[u] = true;
        for (const auto& [v, c] : adj[u])
            if (!dist[v] || *dist[u] + c < *dist[v]) dist[v] = *dist[u] + c;
    }
    return dist;
}

}  // namespace detail

/**
 * The system of w-shortest paths of a connected weighted graph. Uniqueness
 * per pair is certified by second-best comparison: for each edge of the
 * found path, the shortest distance avoiding that edge must be strictly
 * larger (any tied alternative must skip at least one path edge). The
 * result always validates and is metric, with the distances realizing it.
 */
inline ShortestPathResult shortest_path_system(const Graph& g, const PairWeights& w) {
    for (const auto& e : g.edges)
        if (w.at(e.first, e.second) <= 0)
            throw NotAMetric("edge weight at " + pair_str(e) + " must be positive");

    ShortestPathResult out;
    out.system.n = g.n;
    out.system.origin = SystemOrigin::Constructed;
    out.dist.n = g.n;

    std::vector<std::vector<std::optional<Rational>>> d(g.n);
    for (int s = 0; s < g.n; ++s) {
        d[s] = detail::dijkstra(g, w, s);
        for (int v = 0; v < g.n; ++v)
            if (!d[s][v])
                throw PathsysError("graph is not connected: no path " +
                                   pair_str(make_pair_key(s, v)));
    }
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v) out.dist.d.set(u, v, *d[u][v]);

    for (int u = 0; u < g.n; ++u) {
        for (int v = u + 1; v < g.n; ++v) {
            Path p;
            p.seq.push_back(u);
            int at = u;
            while (at != v) {
                int next = -1;
                for (const auto& e : g.edges) {
                    int y = -1;
                    if (e.first == at) y = e.second;
                    else if (e.second == at) y = e.first;
                    if (y < 0) continue;
                    if (w.at(e.first, e.second) + *d[y][v] == *d[at][v]) {
                        next = y;
                        break;
                    }
                }
                if (next < 0)
                    throw PathsysError("internal: shortest-path reconstruction stuck");
                p.seq.push_back(next);
                at = next;
            }
            for (size_t i = 0; i + 1 < p.seq.size(); ++i) {
                Pair e = make_pair_key(p.seq[i], p.seq[i + 1]);
                auto alt = detail::dijkstra(g, w, u, e);
                if (alt[v] && *alt[v] == *d[u][v])
                    throw AmbiguousShortestPath(
                        "tied shortest paths for pair " + pair_str({u, v}) +
                            ": an equal-cost route avoids edge " + pair_str(e),
                        u, v);
            }
            out.system.set_path(p);
        }
    }
    return out;
}

namespace detail {

inline std::vector<Path> simple_paths_complete(int n, int u, int v) {
    std::vector<Path> out;
    std::vector<int> seq{u};
    std::vector<bool> used(n, false);
    used[u] = true;
    std::function<void()> dfs = [&]() {
        int at = seq.back();
        if (at == v) {
            out.push_back(Path{seq});
            return;
        }
        for (int y = 0; y < n; ++y) {
            if (used[y]) continue;
            if (y != v && seq.size() + 1 >= static_cast<size_t>(n)) continue;
            seq.push_back(y);
            used[y] = true;
            dfs();
            seq.pop_back();
            used[y] = false;
        }
    };
    dfs();
    std::sort(out.begin(), out.end(), [](const Path& a, const Path& b) {
        if (a.seq.size() != b.seq.size()) return a.seq.size() < b.seq.size();
        return a.seq < b.seq;
    });
    return out;
}

}  // namespace detail

/**
 * Stream every consistent path system on K_n, 2 <= n <= 5, exactly once in
 * canonical order: pairs lexicographic, candidate paths per pair by
 * (length, lexicographic sequence). Backtracking keeps a map of paths
 * already forced by subpath closure, so inconsistent branches die early;
 * the yield order equals that of the naive filter over all assignments.
 */
inline long enumerate_consistent_systems(
    int n, const std::function<void(const PathSystem&)>& fn) {
    if (n < 2 || n > 5)
        throw ResourceCap("enumeration supported for 2 <= n <= 5, got " +
                          std::to_string(n));

    std::vector<Pair> pairs;
    std::vector<std::vector<Path>> candidates;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            pairs.push_back({u, v});
            candidates.push_back(detail::simple_paths_complete(n, u, v));
        }

    std::map<Pair, Path> forced;
    long count = 0;

    // returns false when the path collides with an already-forced subpath;
    // records its additions for the caller to undo
    auto force = [&](const Path& p, std::vector<Pair>& added) {
        for (size_t i = 0; i < p.seq.size(); ++i)
            for (size_t j = i + 1; j < p.seq.size(); ++j) {
                Pair key = make_pair_key(p.seq[i], p.seq[j]);
                Path sub = subpath(p, p.seq[i], p.seq[j]);
                if (sub.first() != key.first) sub = sub.reversed();
                auto it = forced.find(key);
                if (it != forced.end()) {
                    if (!(it->second == sub)) return false;
                } else {
                    forced.emplace(key, std::move(sub));
                    added.push_back(key);
                }
            }
        return true;
    };

    std::function<void(size_t)> rec = [&](size_t idx) {
        if (idx == pairs.size()) {
            PathSystem ps;
            ps.n = n;
            ps.origin = SystemOrigin::Constructed;
            for (const auto& [key, p] : forced) ps.set_path(p);
            if (fn) fn(ps);
            ++count;
            return;
        }
        auto it = forced.find(pairs[idx]);
        if (it != forced.end()) {
            rec(idx + 1);  // already pinned by an earlier path
            return;
        }
        for (const Path& cand : candidates[idx]) {
            std::vector<Pair> added;
            if (force(cand, added)) rec(idx + 1);
            for (const Pair& key : added) forced.erase(key);
        }
    };
    rec(0);
    return count;
}

/**
 * Stretch of the system under a given metric: max over pairs of
 * path cost / distance. The weights are checked to be a metric first.
 */
inline Rational naive_stretch(const PathSystem& ps, const PairWeights& w) {
    for (int u = 0; u < ps.n; ++u)
        for (int v = u + 1; v < ps.n; ++v)
            if (w.at(u, v) <= 0)
                throw NotAMetric("weight at " + pair_str({u, v}) +
                                 " must be positive");
    for (int a = 0; a < ps.n; ++a)
        for (int b = a + 1; b < ps.n; ++b)
            for (int c = 0; c < ps.n; ++c) {
                if (c == a || c == b) continue;
                if (w.at(a, b) > w.at(a, c) + w.at(c, b))
                    throw NotAMetric("triangle inequality fails at " +
                                     pair_str({a, b}) + " via " + std::to_string(c));
            }
    Rational best = 0;
    for (const auto& [key, p] : ps.paths)
        best = std::max(best, path_cost(p, w) / w.at(key.first, key.second));
    return best;
}

}  // namespace pathsys
