#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "pathsys/delta.hpp"
#include "pathsys/graph.hpp"
#include "pathsys/groups.hpp"

namespace pathsys {

using Json = nlohmann::ordered_json;

struct LoadedSystem {
    PathSystem system;
    std::optional<Graph> graph;
};

namespace detail {

inline Json parse_json(std::istream& in, const std::string& what) {
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(what + ": " + e.what());
    }
    return j;
}

inline void expect_format(const Json& j, const std::string& tag) {
    if (!j.is_object() || !j.contains("format") || !j["format"].is_string() ||
        j["format"].get<std::string>() != tag)
        throw FormatError("expected \"format\":\"" + tag + "\"");
}

inline int get_int(const Json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw FormatError("missing integer field \"" + key + "\"");
    return j[key].get<int>();
}

}  // namespace detail

/**
 * pathsys/v1: {"format":"pathsys/v1","n":N,"paths":[{"u":u,"v":v,
 * "seq":[...]},...],"graph_edges":[[u,v],...]?}. One entry per unordered
 * pair with u < v and seq running from u to v; graph_edges optional.
 * Structural errors throw FormatError; semantic consistency is left to
 * validate_system so that broken systems can still be loaded and reported.
 */
inline LoadedSystem load_pathsys(std::istream& in) {
    Json j = detail::parse_json(in, "pathsys/v1");
    detail::expect_format(j, "pathsys/v1");
    LoadedSystem out;
    out.system.n = detail::get_int(j, "n");
    out.system.origin = SystemOrigin::Loaded;
    if (out.system.n <= 0) throw FormatError("n must be positive");
    if (!j.contains("paths") || !j["paths"].is_array())
        throw FormatError("missing \"paths\" array");
    for (const auto& e : j["paths"]) {
        if (!e.is_object() || !e.contains("seq") || !e["seq"].is_array())
            throw FormatError("path entry needs u, v and seq");
        int u = detail::get_int(e, "u");
        int v = detail::get_int(e, "v");
        if (!(u < v)) throw FormatError("path entry must have u < v");
        Path p;
        for (const auto& x : e["seq"]) {
            if (!x.is_number_integer()) throw FormatError("seq must hold integers");
            int vert = x.get<int>();
            if (vert < 0 || vert >= out.system.n)
                throw FormatError("seq vertex out of range");
            p.seq.push_back(vert);
        }
        if (p.seq.size() < 2 || p.first() != u || p.last() != v)
            throw FormatError("seq must run from u to v");
        if (out.system.has_path(u, v))
            throw FormatError("duplicate path entry for " + pair_str({u, v}));
        out.system.paths[{u, v}] = std::move(p);
    }
    if (j.contains("graph_edges")) {
        if (!j["graph_edges"].is_array()) throw FormatError("graph_edges must be an array");
        Graph g(out.system.n);
        for (const auto& e : j["graph_edges"]) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
                !e[1].is_number_integer())
                throw FormatError("graph_edges entries must be [u,v]");
            try {
                g.add_edge(e[0].get<int>(), e[1].get<int>());
            } catch (const PathsysError& err) {
                throw FormatError(err.what());
            }
        }
        out.graph = std::move(g);
    }
    return out;
}

inline Json pathsys_to_json(const PathSystem& ps, const Graph* g = nullptr) {
    Json j;
    j["format"] = "pathsys/v1";
    j["n"] = ps.n;
    j["paths"] = Json::array();
    for (const auto& [key, p] : ps.paths) {
        Json e;
        e["u"] = key.first;
        e["v"] = key.second;
        e["seq"] = p.seq;
        j["paths"].push_back(std::move(e));
    }
    if (g) {
        j["graph_edges"] = Json::array();
        for (const auto& e : g->edges) j["graph_edges"].push_back({e.first, e.second});
    }
    return j;
}

inline void save_pathsys(std::ostream& out, const PathSystem& ps,
                         const Graph* g = nullptr) {
    out << pathsys_to_json(ps, g).dump(2) << "\n";
}

/**
 * pathsys-invariant/v1: {"format":"pathsys-invariant/v1","group":
 * {"type":"cyclic","n":N},"words":{"x":[g1,...],...}}. Words for every
 * nonzero x; letter values are generators in 1..n-1.
 */
inline WordTable load_invariant(std::istream& in) {
    Json j = detail::parse_json(in, "pathsys-invariant/v1");
    detail::expect_format(j, "pathsys-invariant/v1");
    if (!j.contains("group") || !j["group"].is_object())
        throw FormatError("missing \"group\" object");
    const Json& grp = j["group"];
    if (!grp.contains("type") || grp["type"] != "cyclic")
        throw FormatError("group type must be \"cyclic\"");
    WordTable wt;
    wt.n = detail::get_int(grp, "n");
    if (wt.n < 2) throw FormatError("group order must be at least 2");
    if (!j.contains("words") || !j["words"].is_object())
        throw FormatError("missing \"words\" object");
    for (const auto& [key, val] : j["words"].items()) {
        int x;
        try {
            size_t pos = 0;
            x = std::stoi(key, &pos);
            if (pos != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            throw FormatError("word key \"" + key + "\" is not an integer");
        }
        if (x <= 0 || x >= wt.n)
            throw FormatError("word key " + key + " outside 1..n-1");
        if (!val.is_array()) throw FormatError("word for " + key + " must be an array");
        std::vector<int> word;
        for (const auto& l : val) {
            if (!l.is_number_integer())
                throw FormatError("word letters must be integers");
            word.push_back(l.get<int>());
        }
        if (wt.words.count(x)) throw FormatError("duplicate word for " + key);
        wt.words[x] = std::move(word);
    }
    return wt;
}

inline Json invariant_to_json(const WordTable& wt) {
    Json j;
    j["format"] = "pathsys-invariant/v1";
    j["group"] = {{"type", "cyclic"}, {"n", wt.n}};
    Json words = Json::object();
    for (const auto& [x, w] : wt.words) words[std::to_string(x)] = w;
    j["words"] = std::move(words);
    return j;
}

inline void save_invariant(std::ostream& out, const WordTable& wt) {
    out << invariant_to_json(wt).dump(2) << "\n";
}

/**
 * metric-cert/v1: {"format":"metric-cert/v1","t":"p/q","kind":"full"|
 * "class","weights":{"u,v"|"a":"p/q"}}. Rationals as strings.
 */
inline MetricCertificate load_cert(std::istream& in) {
    Json j = detail::parse_json(in, "metric-cert/v1");
    detail::expect_format(j, "metric-cert/v1");
    MetricCertificate cert;
    if (!j.contains("t") || !j["t"].is_string())
        throw FormatError("missing rational field \"t\"");
    cert.t = parse_rational(j["t"].get<std::string>());
    if (!j.contains("kind") || !j["kind"].is_string())
        throw FormatError("missing \"kind\"");
    std::string kind = j["kind"].get<std::string>();
    if (kind == "full") cert.kind = MetricCertificate::Kind::Full;
    else if (kind == "class") cert.kind = MetricCertificate::Kind::Class;
    else throw FormatError("kind must be \"full\" or \"class\"");
    if (!j.contains("weights") || !j["weights"].is_object())
        throw FormatError("missing \"weights\" object");
    for (const auto& [key, val] : j["weights"].items()) {
        if (!val.is_string()) throw FormatError("weights must be rational strings");
        Rational w = parse_rational(val.get<std::string>());
        if (cert.kind == MetricCertificate::Kind::Full) {
            auto comma = key.find(',');
            if (comma == std::string::npos)
                throw FormatError("full-kind weight key must be \"u,v\"");
            int u, v;
            try {
                u = std::stoi(key.substr(0, comma));
                v = std::stoi(key.substr(comma + 1));
            } catch (const std::exception&) {
                throw FormatError("bad weight key \"" + key + "\"");
            }
            if (!(u < v)) throw FormatError("weight key must have u < v");
            if (cert.weights.has(u, v))
                throw FormatError("duplicate weight for " + key);
            cert.weights.set(u, v, w);
        } else {
            int a;
            try {
                size_t pos = 0;
                a = std::stoi(key, &pos);
                if (pos != key.size()) throw std::invalid_argument(key);
            } catch (const std::exception&) {
                throw FormatError("class weight key \"" + key + "\" is not an integer");
            }
            if (a <= 0) throw FormatError("class ids start at 1");
            if (cert.class_weights.count(a))
                throw FormatError("duplicate weight for class " + key);
            cert.class_weights[a] = w;
        }
    }
    return cert;
}

inline Json cert_to_json(const MetricCertificate& cert) {
    Json j;
    j["format"] = "metric-cert/v1";
    j["t"] = format_rational(cert.t);
    j["kind"] = cert.kind == MetricCertificate::Kind::Full ? "full" : "class";
    Json weights = Json::object();
    if (cert.kind == MetricCertificate::Kind::Full) {
        for (const auto& [key, w] : cert.weights.w)
            weights[std::to_string(key.first) + "," + std::to_string(key.second)] =
                format_rational(w);
    } else {
        for (const auto& [a, w] : cert.class_weights)
            weights[std::to_string(a)] = format_rational(w);
    }
    j["weights"] = std::move(weights);
    return j;
}

inline void save_cert(std::ostream& out, const MetricCertificate& cert) {
    out << cert_to_json(cert).dump(2) << "\n";
}

// ---- file-path conveniences

namespace detail {

template <typename F>
auto from_file(const std::string& path, F&& load) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return load(in);
}

}  // namespace detail

inline LoadedSystem load_pathsys_file(const std::string& path) {
    return detail::from_file(path, [](std::istream& in) { return load_pathsys(in); });
}

inline WordTable load_invariant_file(const std::string& path) {
    return detail::from_file(path, [](std::istream& in) { return load_invariant(in); });
}

inline MetricCertificate load_cert_file(const std::string& path) {
    return detail::from_file(path, [](std::istream& in) { return load_cert(in); });
}

}  // namespace pathsys
