#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "pathsys/delta.hpp"
#include "pathsys/groups.hpp"
#include "pathsys/io.hpp"
#include "pathsys/lp_format.hpp"

using namespace pathsys;

TEST_CASE("path system files round-trip byte-identically") {
    PathSystem ps = petersen_system();
    Graph g = ps.induced_graph();
    std::ostringstream first;
    save_pathsys(first, ps, &g);

    std::istringstream in(first.str());
    LoadedSystem back = load_pathsys(in);
    REQUIRE(back.system.n == 10);
    REQUIRE(back.system.origin == SystemOrigin::Loaded);
    REQUIRE(back.system.paths == ps.paths);
    REQUIRE(back.graph.has_value());
    REQUIRE(back.graph->edges == g.edges);

    std::ostringstream second;
    save_pathsys(second, back.system, &*back.graph);
    REQUIRE(first.str() == second.str());
}

TEST_CASE("pathsys loader rejects malformed files") {
    auto load_str = [](const std::string& s) {
        std::istringstream in(s);
        return load_pathsys(in);
    };
    REQUIRE_THROWS_AS(load_str("not json"), FormatError);
    REQUIRE_THROWS_AS(load_str(R"({"format":"other/v1","n":2,"paths":[]})"),
                      FormatError);
    REQUIRE_THROWS_AS(load_str(R"({"format":"pathsys/v1","n":2})"), FormatError);
    REQUIRE_THROWS_AS(
        load_str(
            R"({"format":"pathsys/v1","n":2,"paths":[{"u":0,"v":1,"seq":[0,5]}]})"),
        FormatError);
    REQUIRE_THROWS_AS(
        load_str(
            R"({"format":"pathsys/v1","n":2,"paths":[{"u":1,"v":0,"seq":[1,0]}]})"),
        FormatError);
    // duplicate pair
    REQUIRE_THROWS_AS(
        load_str(R"({"format":"pathsys/v1","n":3,"paths":[
            {"u":0,"v":1,"seq":[0,1]},{"u":0,"v":1,"seq":[0,2,1]}]})"),
        FormatError);
    // seq endpoints must match the declared pair
    REQUIRE_THROWS_AS(
        load_str(
            R"({"format":"pathsys/v1","n":3,"paths":[{"u":0,"v":1,"seq":[0,2]}]})"),
        FormatError);
}

TEST_CASE("incomplete systems load; validation reports the gap") {
    std::istringstream in(
        R"({"format":"pathsys/v1","n":3,"paths":[{"u":0,"v":1,"seq":[0,1]}]})");
    LoadedSystem ls = load_pathsys(in);
    REQUIRE(ls.system.paths.size() == 1);
    REQUIRE_FALSE(validate_system(ls.system).consistent);
}

TEST_CASE("invariant files round-trip") {
    WordTable wt = paley_system(29);
    std::ostringstream first;
    save_invariant(first, wt);
    std::istringstream in(first.str());
    WordTable back = load_invariant(in);
    REQUIRE(back.n == 29);
    REQUIRE(back.words == wt.words);
    std::ostringstream second;
    save_invariant(second, back);
    REQUIRE(first.str() == second.str());
}

TEST_CASE("invariant loader rejects malformed files") {
    auto load_str = [](const std::string& s) {
        std::istringstream in(s);
        return load_invariant(in);
    };
    REQUIRE_THROWS_AS(
        load_str(R"({"format":"pathsys-invariant/v1","words":{}})"), FormatError);
    REQUIRE_THROWS_AS(
        load_str(
            R"({"format":"pathsys-invariant/v1","group":{"type":"dihedral","n":5},"words":{}})"),
        FormatError);
    REQUIRE_THROWS_AS(
        load_str(
            R"({"format":"pathsys-invariant/v1","group":{"type":"cyclic","n":5},"words":{"zero":[1]}})"),
        FormatError);
    REQUIRE_THROWS_AS(
        load_str(
            R"({"format":"pathsys-invariant/v1","group":{"type":"cyclic","n":5},"words":{"7":[1]}})"),
        FormatError);
}

TEST_CASE("certificates of both kinds round-trip") {
    MetricCertificate full;
    full.t = Rational(1001, 1000);
    full.kind = MetricCertificate::Kind::Full;
    full.weights.set(0, 1, Rational(1));
    full.weights.set(0, 2, Rational(7, 3));
    full.weights.set(1, 2, Rational(3, 2));

    std::ostringstream first;
    save_cert(first, full);
    std::istringstream in(first.str());
    MetricCertificate back = load_cert(in);
    REQUIRE(back.kind == MetricCertificate::Kind::Full);
    REQUIRE(back.t == full.t);
    REQUIRE(back.weights.w == full.weights.w);
    std::ostringstream second;
    save_cert(second, back);
    REQUIRE(first.str() == second.str());

    MetricCertificate cls;
    cls.t = Rational(6, 5);
    cls.kind = MetricCertificate::Kind::Class;
    cls.class_weights[1] = Rational(1);
    cls.class_weights[2] = Rational(49, 25);
    std::ostringstream cfirst;
    save_cert(cfirst, cls);
    std::istringstream cin2(cfirst.str());
    MetricCertificate cback = load_cert(cin2);
    REQUIRE(cback.kind == MetricCertificate::Kind::Class);
    REQUIRE(cback.class_weights == cls.class_weights);
}

TEST_CASE("certificate loader rejects malformed files") {
    auto load_str = [](const std::string& s) {
        std::istringstream in(s);
        return load_cert(in);
    };
    REQUIRE_THROWS_AS(
        load_str(R"({"format":"metric-cert/v1","t":1.001,"kind":"full","weights":{}})"),
        FormatError);  // t must be a rational string
    REQUIRE_THROWS_AS(
        load_str(R"({"format":"metric-cert/v1","t":"1","kind":"partial","weights":{}})"),
        FormatError);
    REQUIRE_THROWS_AS(
        load_str(
            R"({"format":"metric-cert/v1","t":"1","kind":"full","weights":{"ab":"1"}})"),
        FormatError);
    REQUIRE_THROWS_AS(
        load_str(
            R"({"format":"metric-cert/v1","t":"1","kind":"full","weights":{"1,0":"1"}})"),
        FormatError);
    REQUIRE_THROWS_AS(
        load_str(
            R"({"format":"metric-cert/v1","t":"1","kind":"class","weights":{"0":"1"}})"),
        FormatError);
}

TEST_CASE("rational parsing and formatting") {
    REQUIRE(format_rational(Rational(-3, 6)) == "-1/2");
    REQUIRE(format_rational(Rational(4)) == "4");
    REQUIRE(parse_rational("9/8") == Rational(9, 8));
    REQUIRE(parse_rational("-7") == -7);
    REQUIRE(parse_rational("1e-6") == Rational(1, 1000000));
    REQUIRE(parse_rational("1.25") == Rational(5, 4));
    REQUIRE_THROWS_AS(parse_rational("x"), FormatError);
    REQUIRE_THROWS_AS(parse_rational("1/0"), FormatError);
}

TEST_CASE("lp text round-trips through parse and write") {
    NamedParamSystem named = paley29_reduced_subsystem();
    std::ostringstream first;
    write_lp(first, named.sys, named.names);

    std::istringstream in(first.str());
    ParsedLp back = parse_lp(in);
    REQUIRE(back.sys.num_vars == named.sys.num_vars);
    REQUIRE(back.sys.rows.size() == named.sys.rows.size());

    // names may be discovered in a different order; compare through the map
    auto bvar = [&](const std::string& name) {
        for (size_t i = 0; i < back.names.size(); ++i)
            if (back.names[i] == name) return static_cast<int>(i);
        throw std::logic_error("missing variable " + name);
    };
    for (size_t r = 0; r < named.sys.rows.size(); ++r) {
        const ParamRow& a = named.sys.rows[r];
        const ParamRow& b = back.sys.rows[r];
        REQUIRE(a.tag == b.tag);
        REQUIRE(a.rhs == b.rhs);
        for (int v = 0; v < named.sys.num_vars; ++v)
            REQUIRE(a.coeffs[v] == b.coeffs[bvar(named.names[v])]);
    }

    // writing the parse gives a fixed point
    std::ostringstream second;
    write_lp(second, back.sys, back.names);
    std::istringstream in2(second.str());
    ParsedLp twice = parse_lp(in2);
    REQUIRE(twice.names == back.names);
    std::ostringstream third;
    write_lp(third, twice.sys, twice.names);
    REQUIRE(second.str() == third.str());
}

TEST_CASE("lp parser accepts comments, fractions, and polynomials") {
    std::istringstream in(
        "# header comment\n"
        "\n"
        "2*x + (t^2-1)*y <= 0 # mixed\n"
        "1/2*x + -3*z <= 5/2\n"
        "(-t+3)*y <= (2t)\n");
    ParsedLp lp = parse_lp(in);
    REQUIRE(lp.names == std::vector<std::string>{"x", "y", "z"});
    REQUIRE(lp.sys.rows.size() == 3);
    REQUIRE(lp.sys.rows[0].tag == "mixed");
    REQUIRE(lp.sys.rows[0].coeffs[1] ==
            IntPoly({Integer(-1), Integer(0), Integer(1)}));
    // row 2 was scaled by 2 to clear denominators
    REQUIRE(lp.sys.rows[1].coeffs[0] == IntPoly::constant(1));
    REQUIRE(lp.sys.rows[1].coeffs[2] == IntPoly::constant(-6));
    REQUIRE(lp.sys.rows[1].rhs == IntPoly::constant(5));
    REQUIRE(lp.sys.rows[2].coeffs[1] == IntPoly::linear(3, -1));
    REQUIRE(lp.sys.rows[2].rhs == IntPoly::linear(0, 2));

    std::istringstream bad("2*x <= ");
    REQUIRE_THROWS_AS(parse_lp(bad), FormatError);
}

TEST_CASE("file loaders surface missing paths as FormatError") {
    REQUIRE_THROWS_AS(load_pathsys_file("/nonexistent/x.json"), FormatError);
    REQUIRE_THROWS_AS(load_invariant_file("/nonexistent/x.json"), FormatError);
    REQUIRE_THROWS_AS(load_cert_file("/nonexistent/x.json"), FormatError);
}
