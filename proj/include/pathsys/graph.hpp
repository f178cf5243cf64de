#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pathsys/errors.hpp"
#include "pathsys/rational.hpp"

namespace pathsys {

/// Canonical unordered-pair key: (min, max).
using Pair = std::pair<int, int>;

inline Pair make_pair_key(int u, int v) {
    return u < v ? Pair{u, v} : Pair{v, u};
}

inline std::string pair_str(const Pair& p) {
    return "{" + std::to_string(p.first) + "," + std::to_string(p.second) + "}";
}

/// Undirected simple graph on vertices 0..n-1.
struct Graph {
    int n = 0;
    std::set<Pair> edges;

    Graph() = default;

    explicit Graph(int n_) : n(n_) {}

    Graph(int n_, const std::vector<Pair>& edge_list) : n(n_) {
        for (auto [u, v] : edge_list) add_edge(u, v);
    }

    void add_edge(int u, int v) {
        if (u == v) throw PathsysError("graph: self-loop at " + std::to_string(u));
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw PathsysError("graph: edge endpoint out of range");
        edges.insert(make_pair_key(u, v));
    }

    bool has_edge(int u, int v) const {
        return edges.count(make_pair_key(u, v)) > 0;
    }
};

/// Simple path: ordered vertex list, all distinct.
struct Path {
    std::vector<int> seq;

    Path() = default;
    explicit Path(std::vector<int> s) : seq(std::move(s)) {}

    int first() const { return seq.front(); }
    int last() const { return seq.back(); }
    size_t num_edges() const { return seq.empty() ? 0 : seq.size() - 1; }

    bool is_simple() const {
        if (seq.empty()) return false;
        std::set<int> seen(seq.begin(), seq.end());
        return seen.size() == seq.size();
    }

    Path reversed() const {
        std::vector<int> r(seq.rbegin(), seq.rend());
        return Path(std::move(r));
    }

    bool operator==(const Path& o) const { return seq == o.seq; }
    bool operator!=(const Path& o) const { return seq != o.seq; }
    bool operator<(const Path& o) const { return seq < o.seq; }

    std::string str() const {
        std::string s = "(";
        for (size_t i = 0; i < seq.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(seq[i]);
        }
        return s + ")";
    }
};

/**
 * Extract the contiguous a..b segment of p, oriented from a to b
 * (reversed when b precedes a on the path). a == b gives the one-vertex path.
 */
inline Path subpath(const Path& p, int a, int b) {
    auto pos = [&](int x) -> int {
        auto it = std::find(p.seq.begin(), p.seq.end(), x);
        if (it == p.seq.end())
            throw VertexNotOnPath("vertex " + std::to_string(x) + " not on path " + p.str());
        return static_cast<int>(it - p.seq.begin());
    };
    int ia = pos(a), ib = pos(b);
    if (ia <= ib) return Path({p.seq.begin() + ia, p.seq.begin() + ib + 1});
    std::vector<int> r(p.seq.begin() + ib, p.seq.begin() + ia + 1);
    std::reverse(r.begin(), r.end());
    return Path(std::move(r));
}

/// Candidate metric values on unordered pairs; all positive.
struct PairWeights {
    std::map<Pair, Rational> w;

    void set(int u, int v, const Rational& value) { w[make_pair_key(u, v)] = value; }

    const Rational& at(int u, int v) const {
        auto it = w.find(make_pair_key(u, v));
        if (it == w.end())
            throw MissingWeight("no weight for pair " + pair_str(make_pair_key(u, v)));
        return it->second;
    }

    bool has(int u, int v) const { return w.count(make_pair_key(u, v)) > 0; }
};

/// Sum of consecutive-pair weights along p; 0 for a single vertex.
inline Rational path_cost(const Path& p, const PairWeights& w) {
    Rational total = 0;
    for (size_t i = 0; i + 1 < p.seq.size(); ++i) total += w.at(p.seq[i], p.seq[i + 1]);
    return total;
}

enum class SystemOrigin { Constructed, Loaded, InvariantExpanded };

/**
 * One simple path per unordered vertex pair. Stored paths are oriented
 * min(u,v) -> max(u,v); path(u, v) reverses on access as needed.
 */
struct PathSystem {
    int n = 0;
    std::map<Pair, Path> paths;
    SystemOrigin origin = SystemOrigin::Constructed;

    void set_path(const Path& p) {
        if (p.seq.size() < 1) throw PathsysError("path system: empty path");
        Pair key = make_pair_key(p.first(), p.last());
        if (key.first == key.second)
            throw PathsysError("path system: path endpoints coincide");
        paths[key] = (p.first() == key.first) ? p : p.reversed();
    }

    bool has_path(int u, int v) const { return paths.count(make_pair_key(u, v)) > 0; }

    /// Stored path oriented u -> v.
    Path path(int u, int v) const {
        auto it = paths.find(make_pair_key(u, v));
        if (it == paths.end())
            throw PathsysError("path system: no path for pair " +
                               pair_str(make_pair_key(u, v)));
        return it->second.first() == u ? it->second : it->second.reversed();
    }

    /// Union of all path edges.
    Graph induced_graph() const {
        Graph g;
        g.n = n;
        for (const auto& [key, p] : paths)
            for (size_t i = 0; i + 1 < p.seq.size(); ++i)
                g.add_edge(p.seq[i], p.seq[i + 1]);
        return g;
    }
};

enum class ViolationKind {
    SubpathMismatch,
    NotSimple,
    EndpointMismatch,
    MissingPair,
    EdgeNotInGraph
};

inline std::string violation_kind_str(ViolationKind k) {
    switch (k) {
        case ViolationKind::SubpathMismatch: return "SubpathMismatch";
        case ViolationKind::NotSimple: return "NotSimple";
        case ViolationKind::EndpointMismatch: return "EndpointMismatch";
        case ViolationKind::MissingPair: return "MissingPair";
        case ViolationKind::EdgeNotInGraph: return "EdgeNotInGraph";
    }
    return "?";
}

struct Violation {
    ViolationKind kind;
    Pair pair_a;        // the pair whose path exhibits the problem
    Pair pair_b;        // the implicated pair (subpath endpoints etc.)
    Path witness;

    std::string str() const {
        return violation_kind_str(kind) + " at " + pair_str(pair_a) + " vs " +
               pair_str(pair_b) + " witness " + witness.str();
    }
};

struct ConsistencyReport {
    bool consistent = false;
    bool neighborly = false;
    std::vector<Violation> violations;
};

/**
 * Full validation: well-formed simple paths with matching endpoints, one per
 * pair, exhaustive subpath closure, and (against g, or the induced graph if
 * absent) edge membership plus neighborliness: every graph edge is its own
 * path.
 */
inline ConsistencyReport validate_system(const PathSystem& ps,
                                         const Graph* g = nullptr) {
    ConsistencyReport rep;
    auto& out = rep.violations;

    for (const auto& [key, p] : ps.paths) {
        if (!p.is_simple() || p.seq.size() < 2) {
            out.push_back({ViolationKind::NotSimple, key, key, p});
            continue;
        }
        if (make_pair_key(p.first(), p.last()) != key ||
            p.first() != key.first) {
            out.push_back({ViolationKind::EndpointMismatch, key, key, p});
        }
        for (int v : p.seq)
            if (v < 0 || v >= ps.n)
                out.push_back({ViolationKind::EndpointMismatch, key, key, p});
    }
    if (!out.empty()) {
        rep.consistent = false;
        rep.neighborly = false;
        return rep;
    }

    for (int u = 0; u < ps.n; ++u)
        for (int v = u + 1; v < ps.n; ++v)
            if (!ps.has_path(u, v))
                out.push_back({ViolationKind::MissingPair, {u, v}, {u, v}, Path()});

    // subpath closure: every contiguous segment of every path must be the
    // stored path of its endpoints
    for (const auto& [key, p] : ps.paths) {
        const auto& s = p.seq;
        for (size_t i = 0; i < s.size(); ++i) {
            for (size_t j = i + 1; j < s.size(); ++j) {
                Pair sub_key = make_pair_key(s[i], s[j]);
                auto it = ps.paths.find(sub_key);
                if (it == ps.paths.end()) continue;  // already a MissingPair
                Path expected = subpath(p, sub_key.first, sub_key.second);
                if (it->second != expected)
                    out.push_back({ViolationKind::SubpathMismatch, key, sub_key,
                                   expected});
            }
        }
    }

    Graph induced;
    const Graph* ambient = g;
    if (!ambient) {
        induced = ps.induced_graph();
        ambient = &induced;
    } else {
        for (const auto& [key, p] : ps.paths)
            for (size_t i = 0; i + 1 < p.seq.size(); ++i)
                if (!ambient->has_edge(p.seq[i], p.seq[i + 1]))
                    out.push_back({ViolationKind::EdgeNotInGraph, key,
                                   make_pair_key(p.seq[i], p.seq[i + 1]), p});
    }

    rep.consistent = out.empty();

    rep.neighborly = true;
    for (const auto& e : ambient->edges) {
        auto it = ps.paths.find(e);
        if (it == ps.paths.end() || it->second.seq.size() != 2) {
            rep.neighborly = false;
            break;
        }
    }
    return rep;
}

}  // namespace pathsys
