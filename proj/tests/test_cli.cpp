#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pathsys/cli.hpp"

using namespace pathsys;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = execute(args, out, err);
    return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("pathsys_cli_" + name)).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    f << content;
}

Json out_json(const RunResult& r) { return Json::parse(r.out); }

}  // namespace

TEST_CASE("gen petersen pipes into check") {
    RunResult gen = run({"gen", "petersen"});
    REQUIRE(gen.code == 0);
    Json j = out_json(gen);
    REQUIRE(j["format"] == "pathsys/v1");
    REQUIRE(j["n"] == 10);
    REQUIRE(j["paths"].size() == 45);
    REQUIRE(j["graph_edges"].size() == 15);

    std::string file = tmp("petersen.json");
    write_file(file, gen.out);
    RunResult chk = run({"check", file});
    REQUIRE(chk.code == 0);
    Json cj = out_json(chk);
    REQUIRE(cj["consistent"] == true);
    REQUIRE(cj["neighborly"] == true);
    REQUIRE_FALSE(cj.contains("violations"));
}

TEST_CASE("check reports violations as data, not errors") {
    std::string broken = tmp("broken.json");
    write_file(broken,
               R"({"format":"pathsys/v1","n":3,"paths":[{"u":0,"v":1,"seq":[0,1]}]})");
    RunResult r = run({"check", broken});
    REQUIRE(r.code == 0);
    Json j = out_json(r);
    REQUIRE(j["consistent"] == false);
    REQUIRE(j["violations"].size() >= 1);

    std::string inv = tmp("broken_inv.json");
    write_file(inv,
               R"({"format":"pathsys-invariant/v1","group":{"type":"cyclic","n":5},)"
               R"("words":{"1":[1]}})");
    RunResult ri = run({"check", inv});
    REQUIRE(ri.code == 0);
    Json ji = out_json(ri);
    REQUIRE(ji["consistent"] == false);
    REQUIRE(ji["violations"].size() == 1);
}

TEST_CASE("delta emits a bracket whose certificate re-verifies") {
    std::string file = tmp("petersen_delta.json");
    write_file(file, run({"gen", "petersen"}).out);
    std::string cert = tmp("petersen_cert.json");

    RunResult r = run({"delta", file, "--tol", "1/100", "--cert-out", cert});
    REQUIRE(r.code == 0);
    Json j = out_json(r);
    REQUIRE(j["lo"] == "1");
    REQUIRE(j["hi"] == "101/100");
    REQUIRE(j["probes"] == 2);
    REQUIRE(j["certificate"]["format"] == "metric-cert/v1");
    REQUIRE(j["lo_evidence"].size() >= 1);

    RunResult v = run({"verify", file, cert});
    REQUIRE(v.code == 0);
    Json vj = out_json(v);
    REQUIRE(vj["ok"] == true);
    REQUIRE(vj["violations"].empty());
    Rational ms = parse_rational(vj["max_stretch"].get<std::string>());
    REQUIRE(ms > 1);
    REQUIRE(ms <= Rational(101, 100));
}

TEST_CASE("is-metric distinguishes witnesses from refutations") {
    std::string pet = tmp("petersen_metric.json");
    write_file(pet, run({"gen", "petersen"}).out);
    RunResult r = run({"is-metric", pet});
    REQUIRE(r.code == 0);
    Json j = out_json(r);
    REQUIRE(j["metric"] == false);
    REQUIRE(j["farkas"].size() >= 1);
    REQUIRE_FALSE(j.contains("witness"));

    // a 3-vertex path is realized by any metric along the line
    std::string line = tmp("line.json");
    write_file(line, R"({"format":"pathsys/v1","n":3,"paths":[
        {"u":0,"v":1,"seq":[0,1]},{"u":1,"v":2,"seq":[1,2]},
        {"u":0,"v":2,"seq":[0,1,2]}]})");
    RunResult rm = run({"is-metric", line});
    REQUIRE(rm.code == 0);
    Json jm = out_json(rm);
    REQUIRE(jm["metric"] == true);
    REQUIRE(jm["witness"]["format"] == "metric-cert/v1");
    REQUIRE_FALSE(jm.contains("farkas"));
}

TEST_CASE("gen paley, expand, and check compose") {
    RunResult gen = run({"gen", "paley", "--p", "29"});
    REQUIRE(gen.code == 0);
    Json j = out_json(gen);
    REQUIRE(j["format"] == "pathsys-invariant/v1");
    REQUIRE(j["group"]["n"] == 29);
    REQUIRE(j["words"].size() == 28);

    std::string inv = tmp("paley29.json");
    write_file(inv, gen.out);
    RunResult chk = run({"check", inv});
    REQUIRE(chk.code == 0);
    REQUIRE(out_json(chk)["consistent"] == true);
    REQUIRE(out_json(chk)["neighborly"] == true);

    RunResult exp = run({"expand", inv});
    REQUIRE(exp.code == 0);
    Json ej = out_json(exp);
    REQUIRE(ej["format"] == "pathsys/v1");
    REQUIRE(ej["n"] == 29);
    REQUIRE(ej["paths"].size() == 29 * 28 / 2);

    std::string full = tmp("paley29_full.json");
    write_file(full, exp.out);
    RunResult chk2 = run({"check", full});
    REQUIRE(chk2.code == 0);
    REQUIRE(out_json(chk2)["consistent"] == true);
}

TEST_CASE("invariant delta is deterministic and certifies its bracket") {
    std::string inv = tmp("paley29_delta.json");
    write_file(inv, run({"gen", "paley", "--p", "29"}).out);
    std::string cert = tmp("paley29_cert.json");

    RunResult a = run({"delta", inv, "--invariant", "--tol", "1/10", "--cert-out", cert});
    REQUIRE(a.code == 0);
    RunResult b = run({"delta", inv, "--invariant", "--tol", "1/10"});
    REQUIRE(b.code == 0);
    REQUIRE(a.out == b.out);  // byte-identical across runs

    Json j = out_json(a);
    Rational lo = parse_rational(j["lo"].get<std::string>());
    Rational hi = parse_rational(j["hi"].get<std::string>());
    REQUIRE(lo > 1);
    REQUIRE(hi - lo <= Rational(1, 10));
    REQUIRE(j["certificate"]["kind"] == "class");

    RunResult v = run({"verify", inv, cert});
    REQUIRE(v.code == 0);
    Json vj = out_json(v);
    REQUIRE(vj["ok"] == true);
    REQUIRE(parse_rational(vj["max_stretch"].get<std::string>()) <= hi);
}

TEST_CASE("gen cayley reports the construction parameters") {
    RunResult r = run({"gen", "cayley", "--n", "101", "--x", "1,10", "--m", "9"});
    REQUIRE(r.code == 0);
    Json j = out_json(r);
    REQUIRE(j["format"] == "pathsys-invariant/v1");
    REQUIRE(j["params"]["n"] == 101);
    REQUIRE(j["params"]["x"].get<std::vector<int>>() ==
            std::vector<int>{1, 10, 91, 100});
    REQUIRE(j["params"]["m"] == 9);
    REQUIRE(j["params"]["d"] == 2);
    REQUIRE(j["params"]["bound"] == "9/8");

    // the extra params block must not break the invariant loader
    std::string inv = tmp("cayley101.json");
    write_file(inv, r.out);
    RunResult chk = run({"check", inv});
    REQUIRE(chk.code == 0);
    REQUIRE(out_json(chk)["consistent"] == true);

    RunResult bad = run({"gen", "cayley", "--n", "8", "--x", "2", "--m", "2"});
    REQUIRE(bad.code == 2);  // order condition fails
    REQUIRE(bad.err.find("error") != std::string::npos);
}

TEST_CASE("gen sample is seed-deterministic") {
    std::vector<std::string> args = {"gen",       "sample", "--n",    "101",
                                     "--k",       "4",      "--m",    "3",
                                     "--seed",    "42"};
    RunResult a = run(args);
    RunResult b = run(args);
    REQUIRE(a.code == 0);
    REQUIRE(a.out == b.out);
    Json j = out_json(a);
    REQUIRE(j["seed"] == 42);
    REQUIRE(j["x"].size() >= 1);
    REQUIRE(j["attempts"].get<int>() >= 1);
    REQUIRE(j["diameter"].get<int>() >= 1);
}

TEST_CASE("fm splits the interval at coefficient sign changes") {
    std::string lp = tmp("toy.lp");
    write_file(lp,
               "(t-2)*x <= -1 # flip\n"
               "-1*x <= -1\n"
               "1*y <= 7 # keepme\n");
    RunResult r = run({"fm", lp, "--param-interval", "1,3", "--order", "x",
                       "--keep", "y"});
    REQUIRE(r.code == 0);
    Json j = out_json(r);
    REQUIRE(j["names"].get<std::vector<std::string>>() ==
            std::vector<std::string>{"x", "y"});
    REQUIRE(j["cells"].size() >= 3);
    bool saw_point = false;
    for (const auto& cell : j["cells"]) {
        REQUIRE(cell["rows"].is_array());
        REQUIRE(cell["sign_ambiguous"] == false);
        if (cell["interval"]["lo"] == "2" && cell["interval"]["hi"] == "2")
            saw_point = true;
    }
    REQUIRE(saw_point);

    REQUIRE(run({"fm", lp, "--param-interval", "1,3", "--order", "x", "--keep",
                 "z"}).code == 2);
    REQUIRE(run({"fm", lp, "--param-interval", "1,3", "--order", "x", "--keep",
                 "x"}).code == 2);
    REQUIRE(run({"fm", lp, "--param-interval", "3,1", "--order", "x", "--keep",
                 "y"}).code == 2);
}

TEST_CASE("scaling runs the experiment from a config file") {
    std::string cfg = tmp("scaling.json");
    write_file(cfg, R"({"primes":[13],"x":[1,5],"m":2,"verify":true,"tol":"1/4"})");
    RunResult r = run({"scaling", "--config", cfg});
    REQUIRE(r.code == 0);
    Json j = out_json(r);
    REQUIRE(j["rows"].size() == 1);
    const Json& row = j["rows"][0];
    REQUIRE(row["n"] == 13);
    REQUIRE(row["k"] == 2);
    REQUIRE(row["x_size"] == 4);
    REQUIRE(row["d"] == 2);
    REQUIRE(row["bound"] == "1/4");
    REQUIRE(row["delta_lo"].is_string());
    REQUIRE(row["delta_hi"].is_string());
    REQUIRE(row["probes"].get<int>() >= 1);
    REQUIRE(row["error"] == "");

    RunResult csv = run({"scaling", "--config", cfg, "--csv"});
    REQUIRE(csv.code == 0);
    REQUIRE(csv.out.rfind("n,k,m,x_size,d,bound,delta_lo,delta_hi,probes,wall_ms,error\n",
                          0) == 0);
    REQUIRE(csv.out.substr(csv.out.find('\n') + 1).rfind("13,2,2,4,2,1/4,", 0) == 0);
}

TEST_CASE("scaling records per-prime failures in the row") {
    std::string cfg = tmp("scaling_err.json");
    write_file(cfg, R"({"primes":[2,13],"x":[1],"m":1})");
    RunResult r = run({"scaling", "--config", cfg});
    REQUIRE(r.code == 0);
    Json j = out_json(r);
    REQUIRE(j["rows"].size() == 2);
    REQUIRE_FALSE(j["rows"][0]["error"].get<std::string>().empty());
    REQUIRE(j["rows"][0]["x_size"].is_null());
    REQUIRE(j["rows"][1]["error"] == "");
    REQUIRE(j["rows"][1]["x_size"] == 2);

    std::string empty_cfg = tmp("scaling_empty.json");
    write_file(empty_cfg, R"({"primes":[],"k":3,"m":2})");
    RunResult e = run({"scaling", "--config", empty_cfg});
    REQUIRE(e.code == 0);
    REQUIRE(out_json(e)["rows"].empty());

    std::string bad_cfg = tmp("scaling_bad.json");
    write_file(bad_cfg, R"({"primes":[13],"x":[1]})");  // no m
    REQUIRE(run({"scaling", "--config", bad_cfg}).code == 2);
}

TEST_CASE("exit codes separate data from input errors") {
    REQUIRE(run({"check", "/nonexistent/file.json"}).code == 2);
    REQUIRE(run({"frobnicate"}).code == 2);
    REQUIRE(run({}).code == 2);
    REQUIRE(run({"gen", "paley", "--p", "10"}).code == 2);
    REQUIRE(run({"gen"}).code == 2);

    std::string pet = tmp("petersen_exit.json");
    write_file(pet, run({"gen", "petersen"}).out);
    REQUIRE(run({"delta", pet, "--tol", "0"}).code == 2);
    REQUIRE(run({"delta", pet, "--tol", "bogus"}).code == 2);

    RunResult help = run({"--help"});
    REQUIRE(help.code == 0);
    REQUIRE(help.out.find("pathsys") != std::string::npos);
}
