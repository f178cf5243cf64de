#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pathsys/delta.hpp"
#include "pathsys/groups.hpp"
#include "pathsys/io.hpp"
#include "pathsys/lp_format.hpp"
#include "pathsys/oracle.hpp"

namespace pathsys {

// ---- scaling experiment -----------------------------------------------------

/**
 * One run per prime in `primes`. A fixed generator list `fixed_x` (residues,
 * symmetrized by the construction) bypasses sampling; otherwise k elements
 * are drawn per prime with the same seed. With `verify` set, the run brackets
 * the stretch of the expanded system by bisection at `tol` and additionally
 * certifies the construction bound with a single infeasibility probe just
 * below it.
 */
struct ExperimentConfig {
    std::vector<long> primes;
    int k = 0;
    int m = 1;
    std::optional<std::vector<long>> fixed_x;
    unsigned long seed = 0;
    Rational tol = Rational(1, 100);
    bool verify = false;
    int max_attempts = 20;
};

struct ExperimentRow {
    long n = 0;
    int k = 0;
    int m = 0;
    bool has_params = false;  // construction succeeded: x_size/d/bound valid
    int x_size = 0;
    int d = 0;
    Rational bound = 0;
    bool has_delta = false;  // LP verification ran: delta_lo/hi/probes valid
    Rational delta_lo = 0;
    Rational delta_hi = 0;
    int probes = 0;
    double wall_ms = 0.0;
    std::string error;
};

inline std::vector<ExperimentRow> run_scaling_experiment(const ExperimentConfig& cfg) {
    std::vector<ExperimentRow> rows;
    for (long n : cfg.primes) {
        ExperimentRow row;
        row.n = n;
        row.m = cfg.m;
        row.k = cfg.fixed_x ? static_cast<int>(cfg.fixed_x->size()) : cfg.k;
        auto t0 = std::chrono::steady_clock::now();
        try {
            std::vector<int> X;
            if (cfg.fixed_x) {
                for (long x : *cfg.fixed_x) X.push_back(static_cast<int>(x));
            } else {
                SampleResult s = sample_X(static_cast<int>(n), cfg.k, cfg.m, cfg.seed,
                                          cfg.max_attempts);
                X = s.X;
            }
            auto [params, wt] = cayley_construction(static_cast<int>(n), X, cfg.m);
            row.has_params = true;
            row.x_size = static_cast<int>(params.X.size());
            row.d = params.d;
            row.bound = params.bound;
            if (cfg.verify) {
                DeltaResult dr = delta_bisect(wt, cfg.tol);
                row.delta_lo = dr.lo;
                row.delta_hi = dr.hi;
                row.probes = dr.probes;
                if (params.bound > 1) {
                    // certify the bound itself: the class LP must reject any
                    // stretch strictly below m/(d|X|)
                    Rational just_below = params.bound * Rational(999999, 1000000);
                    Feasibility f =
                        feasible(build_invariant_metric_lp(wt, just_below).sys);
                    ++row.probes;
                    if (!f.feasible() && just_below > row.delta_lo)
                        row.delta_lo = just_below;
                }
                row.has_delta = true;
            }
        } catch (const PathsysError& e) {
            row.error = e.what();
        }
        row.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ExperimentConfig parse_experiment_config(const Json& j) {
    ExperimentConfig cfg;
    if (!j.contains("primes") || !j["primes"].is_array())
        throw FormatError("config: missing \"primes\" array");
    for (const auto& p : j["primes"]) {
        if (!p.is_number_integer())
            throw FormatError("config: primes must be integers");
        cfg.primes.push_back(p.get<long>());
    }
    if (j.contains("x")) {
        if (!j["x"].is_array()) throw FormatError("config: \"x\" must be an array");
        std::vector<long> xs;
        for (const auto& x : j["x"]) {
            if (!x.is_number_integer())
                throw FormatError("config: x entries must be integers");
            xs.push_back(x.get<long>());
        }
        cfg.fixed_x = std::move(xs);
    } else {
        cfg.k = detail::get_int(j, "k");
    }
    cfg.m = detail::get_int(j, "m");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0)
            throw FormatError("config: seed must be a nonnegative integer");
        cfg.seed = j["seed"].get<unsigned long>();
    }
    if (j.contains("tol")) {
        if (!j["tol"].is_string())
            throw FormatError("config: tol must be a rational string");
        cfg.tol = parse_rational(j["tol"].get<std::string>());
        if (!(cfg.tol > 0)) throw FormatError("config: tol must be positive");
    }
    if (j.contains("verify")) {
        if (!j["verify"].is_boolean())
            throw FormatError("config: verify must be a boolean");
        cfg.verify = j["verify"].get<bool>();
    }
    if (j.contains("max_attempts")) cfg.max_attempts = detail::get_int(j, "max_attempts");
    return cfg;
}

namespace detail {

inline std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    return out + "\"";
}

inline Json interval_json(const RatInterval& iv) {
    Json j;
    j["lo"] = format_rational(iv.lo);
    j["hi"] = format_rational(iv.hi);
    j["lo_open"] = iv.lo_open;
    j["hi_open"] = iv.hi_open;
    return j;
}

inline Json rational_array(const std::vector<Rational>& xs) {
    Json arr = Json::array();
    for (const auto& x : xs) arr.push_back(format_rational(x));
    return arr;
}

inline Json delta_json(const DeltaResult& dr) {
    Json j;
    j["lo"] = format_rational(dr.lo);
    j["hi"] = format_rational(dr.hi);
    j["lo_decimal"] = to_double(dr.lo);
    j["hi_decimal"] = to_double(dr.hi);
    j["probes"] = dr.probes;
    j["certificate"] = cert_to_json(dr.certificate);
    if (!dr.lo_evidence.empty()) j["lo_evidence"] = rational_array(dr.lo_evidence);
    return j;
}

inline Json experiment_json(const std::vector<ExperimentRow>& rows) {
    Json arr = Json::array();
    for (const auto& r : rows) {
        Json j;
        j["n"] = r.n;
        j["k"] = r.k;
        j["m"] = r.m;
        if (r.has_params) {
            j["x_size"] = r.x_size;
            j["d"] = r.d;
            j["bound"] = format_rational(r.bound);
        } else {
            j["x_size"] = nullptr;
            j["d"] = nullptr;
            j["bound"] = nullptr;
        }
        if (r.has_delta) {
            j["delta_lo"] = format_rational(r.delta_lo);
            j["delta_hi"] = format_rational(r.delta_hi);
            j["probes"] = r.probes;
        } else {
            j["delta_lo"] = nullptr;
            j["delta_hi"] = nullptr;
            j["probes"] = nullptr;
        }
        j["wall_ms"] = r.wall_ms;
        j["error"] = r.error;
        arr.push_back(std::move(j));
    }
    Json out;
    out["rows"] = std::move(arr);
    return out;
}

inline void experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
    out << "n,k,m,x_size,d,bound,delta_lo,delta_hi,probes,wall_ms,error\n";
    for (const auto& r : rows) {
        out << r.n << "," << r.k << "," << r.m << ",";
        if (r.has_params)
            out << r.x_size << "," << r.d << "," << format_rational(r.bound);
        else
            out << ",,";
        out << ",";
        if (r.has_delta)
            out << format_rational(r.delta_lo) << "," << format_rational(r.delta_hi)
                << "," << r.probes;
        else
            out << ",,";
        out << "," << r.wall_ms << "," << csv_escape(r.error) << "\n";
    }
}

}  // namespace detail

// ---- command driver ---------------------------------------------------------

/**
 * Run one subcommand; `args` excludes the program name. Results go to `out`
 * as JSON (CSV for `scaling --csv`), diagnostics to `err`. Returns the
 * process exit code: 0 on success (infeasible or inconsistent inputs are
 * ordinary results), 2 on invalid input, 3 on a resource cap.
 */
inline int execute(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
    CLI::App app{"consistent path systems: stretch brackets, certificates, thresholds",
                 "pathsys"};
    app.require_subcommand(1);

    auto* cmd_check = app.add_subcommand(
        "check", "validate a system file (consistency, neighborliness)");
    std::string check_file;
    cmd_check->add_option("file", check_file, "pathsys/v1 or pathsys-invariant/v1 file")
        ->required();
    cmd_check->callback([&] {
        std::ifstream in(check_file);
        if (!in) throw FormatError("cannot open " + check_file);
        Json raw = detail::parse_json(in, check_file);
        std::string fmt = raw.contains("format") && raw["format"].is_string()
                              ? raw["format"].get<std::string>()
                              : "";
        Json j;
        if (fmt == "pathsys-invariant/v1") {
            std::istringstream ss(raw.dump());
            WordTable wt = load_invariant(ss);
            try {
                validate_words(wt);
                j["consistent"] = true;
                j["neighborly"] = true;  // single letters are edge words
            } catch (const WordClosureViolation& e) {
                j["consistent"] = false;
                j["neighborly"] = false;
                j["violations"] = Json::array({e.what()});
            }
        } else {
            std::istringstream ss(raw.dump());
            LoadedSystem ls = load_pathsys(ss);
            ConsistencyReport rep =
                validate_system(ls.system, ls.graph ? &*ls.graph : nullptr);
            j["consistent"] = rep.consistent;
            j["neighborly"] = rep.neighborly;
            if (!rep.violations.empty()) {
                Json arr = Json::array();
                for (const auto& v : rep.violations) arr.push_back(v.str());
                j["violations"] = std::move(arr);
            }
        }
        out << j.dump(2) << "\n";
    });

    auto* cmd_delta =
        app.add_subcommand("delta", "bracket the optimal stretch by exact bisection");
    std::string delta_file, delta_tol = "1/1000000", delta_cert_out;
    bool delta_invariant = false, delta_prepass = false;
    cmd_delta->add_option("file", delta_file, "system file")->required();
    cmd_delta->add_flag("--invariant", delta_invariant,
                        "input is a pathsys-invariant/v1 word table");
    cmd_delta->add_option("--tol", delta_tol, "bracket width (rational)");
    cmd_delta->add_flag("--float-prepass", delta_prepass,
                        "narrow with doubles first, re-certify exactly");
    cmd_delta->add_option("--cert-out", delta_cert_out,
                          "write the feasible-end certificate to this file");
    cmd_delta->callback([&] {
        Rational tol = parse_rational(delta_tol);
        if (!(tol > 0)) throw PathsysError("--tol must be positive");
        DeltaOptions opts;
        opts.float_prepass = delta_prepass;
        DeltaResult dr =
            delta_invariant
                ? delta_bisect(load_invariant_file(delta_file), tol, opts)
                : delta_bisect(load_pathsys_file(delta_file).system, tol, opts);
        if (!delta_cert_out.empty()) {
            std::ofstream f(delta_cert_out);
            if (!f) throw PathsysError("cannot write " + delta_cert_out);
            save_cert(f, dr.certificate);
        }
        out << detail::delta_json(dr).dump(2) << "\n";
    });

    auto* cmd_metric = app.add_subcommand(
        "is-metric", "decide whether some metric realizes every path as a geodesic");
    std::string metric_file;
    bool metric_invariant = false;
    cmd_metric->add_option("file", metric_file, "system file")->required();
    cmd_metric->add_flag("--invariant", metric_invariant,
                         "input is a pathsys-invariant/v1 word table");
    cmd_metric->callback([&] {
        MetricityResult mr = metric_invariant
                                 ? is_metric(load_invariant_file(metric_file))
                                 : is_metric(load_pathsys_file(metric_file).system);
        Json j;
        j["metric"] = mr.metric;
        if (mr.metric) j["witness"] = cert_to_json(mr.witness);
        else j["farkas"] = detail::rational_array(mr.farkas);
        out << j.dump(2) << "\n";
    });

    auto* cmd_verify = app.add_subcommand(
        "verify", "check a metric certificate against a system, with max stretch");
    std::string verify_sys, verify_cert;
    cmd_verify->add_option("system", verify_sys, "system file (kind-matched)")
        ->required();
    cmd_verify->add_option("cert", verify_cert, "metric-cert/v1 file")->required();
    cmd_verify->callback([&] {
        MetricCertificate cert = load_cert_file(verify_cert);
        VerifyReport rep =
            cert.kind == MetricCertificate::Kind::Class
                ? verify_certificate(load_invariant_file(verify_sys), cert)
                : verify_certificate(load_pathsys_file(verify_sys).system, cert);
        Json j;
        j["ok"] = rep.ok;
        j["max_stretch"] = format_rational(rep.max_stretch);
        j["max_stretch_decimal"] = to_double(rep.max_stretch);
        Json arr = Json::array();
        for (const auto& v : rep.violations) arr.push_back(v);
        j["violations"] = std::move(arr);
        out << j.dump(2) << "\n";
    });

    auto* cmd_gen = app.add_subcommand("gen", "generate built-in systems");
    cmd_gen->require_subcommand(1);

    auto* gen_petersen =
        cmd_gen->add_subcommand("petersen", "the 10-vertex non-metric example");
    gen_petersen->callback([&] {
        PathSystem ps = petersen_system();
        Graph g = ps.induced_graph();
        save_pathsys(out, ps, &g);
    });

    auto* gen_paley = cmd_gen->add_subcommand(
        "paley", "quadratic-residue word table on Z_p");
    int paley_p = 0;
    gen_paley->add_option("--p", paley_p, "prime, p = 1 (mod 4), 2 and 3 non-residues")
        ->required();
    gen_paley->callback([&] { save_invariant(out, paley_system(paley_p)); });

    auto* gen_cayley = cmd_gen->add_subcommand(
        "cayley", "lower-bound word table on Z_n from a generator set");
    int cayley_n = 0, cayley_m = 0;
    std::vector<int> cayley_x;
    gen_cayley->add_option("--n", cayley_n, "group order")->required();
    gen_cayley->add_option("--x", cayley_x, "generators (comma-separated residues)")
        ->required()
        ->delimiter(',');
    gen_cayley->add_option("--m", cayley_m, "power depth")->required();
    gen_cayley->callback([&] {
        auto [params, wt] = cayley_construction(cayley_n, cayley_x, cayley_m);
        Json j = invariant_to_json(wt);
        Json pj;
        pj["n"] = params.n;
        pj["x"] = params.X;
        pj["m"] = params.m;
        pj["d"] = params.d;
        pj["bound"] = format_rational(params.bound);
        pj["s_size"] = params.S.size();
        j["params"] = std::move(pj);
        out << j.dump(2) << "\n";
    });

    auto* gen_sample = cmd_gen->add_subcommand(
        "sample", "draw a collision-free generator set on Z_n (n prime)");
    int sample_n = 0, sample_k = 0, sample_m = 0, sample_attempts = 20;
    unsigned long sample_seed = 0;
    gen_sample->add_option("--n", sample_n, "prime group order")->required();
    gen_sample->add_option("--k", sample_k, "elements to draw")->required();
    gen_sample->add_option("--m", sample_m, "power depth to keep collision-free")
        ->required();
    gen_sample->add_option("--seed", sample_seed, "RNG seed")->required();
    gen_sample->add_option("--max-attempts", sample_attempts, "rejection cap");
    gen_sample->callback([&] {
        SampleResult s =
            sample_X(sample_n, sample_k, sample_m, sample_seed, sample_attempts);
        Json j;
        j["n"] = sample_n;
        j["k"] = sample_k;
        j["m"] = sample_m;
        j["seed"] = sample_seed;
        j["x"] = s.X;
        j["attempts"] = s.attempts;
        j["diameter"] = s.diameter;
        out << j.dump(2) << "\n";
    });

    auto* cmd_expand = app.add_subcommand(
        "expand", "expand a word table into the full path system");
    std::string expand_file;
    cmd_expand->add_option("file", expand_file, "pathsys-invariant/v1 file")
        ->required();
    cmd_expand->callback([&] {
        PathSystem ps = build_from_words(load_invariant_file(expand_file));
        Graph g = ps.induced_graph();
        save_pathsys(out, ps, &g);
    });

    auto* cmd_fm = app.add_subcommand(
        "fm", "parametric elimination of an lp/v1 system over an interval");
    std::string fm_file, fm_interval, fm_order, fm_keep;
    cmd_fm->add_option("file", fm_file, "lp/v1 file")->required();
    cmd_fm->add_option("--param-interval", fm_interval, "closed interval \"a,b\"")
        ->required();
    cmd_fm->add_option("--order", fm_order, "variables to eliminate, in order")
        ->required();
    cmd_fm->add_option("--keep", fm_keep, "variable that must survive")->required();
    cmd_fm->callback([&] {
        std::ifstream in(fm_file);
        if (!in) throw FormatError("cannot open " + fm_file);
        ParsedLp plp = parse_lp(in);
        auto parts = detail::split_commas(fm_interval);
        if (parts.size() != 2)
            throw PathsysError("--param-interval expects \"a,b\"");
        RatInterval iv =
            closed_interval(parse_rational(parts[0]), parse_rational(parts[1]));
        if (iv.empty()) throw PathsysError("--param-interval is empty");
        plp.sys.interval = iv;
        auto var_index = [&](const std::string& name) {
            for (size_t i = 0; i < plp.names.size(); ++i)
                if (plp.names[i] == name) return static_cast<int>(i);
            throw PathsysError("unknown variable \"" + name + "\"");
        };
        std::vector<int> order;
        for (const auto& name : detail::split_commas(fm_order))
            order.push_back(var_index(name));
        int keep = var_index(fm_keep);
        for (int v : order)
            if (v == keep) throw PathsysError("--keep variable appears in --order");
        std::vector<CellResult> cells = parametric_eliminate(plp.sys, order);
        Json j;
        j["names"] = plp.names;
        j["keep"] = fm_keep;
        j["interval"] = detail::interval_json(iv);
        Json arr = Json::array();
        ParamSystem one;
        one.num_vars = plp.sys.num_vars;
        for (const auto& cell : cells) {
            Json cj;
            cj["interval"] = detail::interval_json(cell.cell);
            cj["sign_ambiguous"] = cell.sign_ambiguous;
            Json rows = Json::array();
            one.interval = cell.cell;
            for (const auto& row : cell.rows) {
                one.rows.assign(1, row);
                std::ostringstream ss;
                write_lp(ss, one, plp.names);
                std::string line = ss.str();
                if (!line.empty() && line.back() == '\n') line.pop_back();
                rows.push_back(line);
            }
            cj["rows"] = std::move(rows);
            arr.push_back(std::move(cj));
        }
        j["cells"] = std::move(arr);
        out << j.dump(2) << "\n";
    });

    auto* cmd_scaling = app.add_subcommand(
        "scaling", "run the Cayley-construction experiment from a config file");
    std::string scaling_config;
    bool scaling_csv = false;
    cmd_scaling->add_option("--config", scaling_config, "JSON config file")
        ->required();
    cmd_scaling->add_flag("--csv", scaling_csv, "emit CSV instead of JSON");
    cmd_scaling->callback([&] {
        std::ifstream in(scaling_config);
        if (!in) throw FormatError("cannot open " + scaling_config);
        ExperimentConfig cfg =
            parse_experiment_config(detail::parse_json(in, scaling_config));
        std::vector<ExperimentRow> rows = run_scaling_experiment(cfg);
        if (scaling_csv) detail::experiment_csv(out, rows);
        else out << detail::experiment_json(rows).dump(2) << "\n";
    });

    std::vector<const char*> argv;
    argv.push_back("pathsys");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const ResourceCap& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const PathsysError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace pathsys
