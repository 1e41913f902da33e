#include "fixtures.hpp"

#include "edsh/error.hpp"
#include "edsh/job.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <sstream>

using namespace edsh;
using fx::el;

namespace {

const char* kSilver1 =
    R"({"field":{"minpoly":["2","0","1"]},"curve":{"a1":["0"],"a2":["-1"],"a3":["1"],"a4":["0"],"a6":["0"]},"point":{"x":["2","1"],"y":["1","2"]}})";
const char* k37 = R"({"field":{"minpoly":["0","1"]},"curve":{"a3":["1"],"a4":["-1"]},"point":{"x":["0"],"y":["0"]}})";

Errc code_of(const std::string& doc) {
    try {
        parse_input(doc);
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::InvalidArgument;
}

struct Run {
    int rc;
    std::string out, err;
};

Run run(const std::string& cmd, JobSpec spec) {
    std::ostringstream out, err;
    const int rc = run_command(cmd, spec, out, err);
    return {rc, out.str(), err.str()};
}

nlohmann::json run_json(const std::string& cmd, JobSpec spec) {
    spec.parameters.json = true;
    const Run r = run(cmd, std::move(spec));
    REQUIRE(r.rc == 0);
    return nlohmann::json::parse(r.out);
}

}  // namespace

TEST_CASE("parsing the silver1 job") {
    const JobSpec s = parse_input(kSilver1);
    CHECK(s.field->degree() == 2);
    REQUIRE(s.curve);
    REQUIRE(s.point);
    const auto ref = fx::silver1();
    CHECK(s.curve->a2() == ref.curve.a2());
    CHECK(*s.point == ref.point);
    CHECK(s.notices.empty());
}

TEST_CASE("parsing details") {
    const JobSpec q = parse_input(R"({"field":{"minpoly":["0","1"]}})");
    CHECK(q.field->degree() == 1);
    CHECK(!q.curve);
    const JobSpec r = parse_input(R"({"curve":{"a3":["1"],"a4":["-1"]},"point":{"x":["1/4"],"y":["-5/8"]}})");
    REQUIRE(r.point);
    CHECK(r.point->is_integral());
    CHECK(r.point->x() == el(r.field, {1}));
    REQUIRE(r.notices.size() == 1);
    CHECK(r.notices[0].find("u = 2") != std::string::npos);
    // short vectors are zero-padded
    const JobSpec p = parse_input(R"({"field":{"minpoly":["1","0","1"]},"curve":{"a3":["4"],"a4":["0","6"]},"point":{"x":[],"y":["0"]}})");
    CHECK(p.curve->a3() == el(p.field, {4, 0}));
    const JobSpec params = parse_input(R"({"parameters":{"n":50,"method":"dpower","primes":["2","37"],"extrapolate":[10,20],"output":"json"}})");
    CHECK(params.parameters.n == 50);
    CHECK(params.parameters.method == HeightMethod::DPower);
    CHECK(params.parameters.primes.size() == 2);
    CHECK(params.parameters.json);
}

TEST_CASE("parse and validation errors") {
    CHECK(code_of(R"({"curve":{"a3":["1"],"a4":["-1"]},"point":{"x":["1"],"y":["1"]}})") == Errc::ValidationError);
    CHECK(code_of(R"({"curve":{"a4":["0"],"a6":["0"]}})") == Errc::ValidationError);
    CHECK(code_of(R"({"field":{"minpoly":["1","0","2"]}})") == Errc::ValidationError);
    CHECK(code_of("{\n\"curve\": [1,\n") == Errc::ParseError);
    CHECK(code_of(R"({"curve":{"a4":["x"]}})") == Errc::ParseError);
    CHECK(code_of(R"({"curve":{"a4":["1/0"]}})") == Errc::ParseError);
    CHECK(code_of(R"({"curve":{"a4":["1","2"]}})") == Errc::ParseError);
    CHECK(code_of(R"({"curve":{"b4":["1"]}})") == Errc::ParseError);
    CHECK(code_of(R"({"parameters":{"method":"tate"}})") == Errc::ParseError);
    try {
        parse_input("{\n  \"curve\": {\n    \"a4\": [1, }\n}");
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    try {
        parse_input(R"({"curve":{"a4":["1", "oops"]}})");
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("curve.a4[1]") != std::string::npos);
    }
}

TEST_CASE("height command") {
    JobSpec s = parse_input(kSilver1);
    s.parameters.n = 200;
    const auto j = run_json("height", s);
    CHECK(std::fabs(j["hhat"].get<double>() - 0.45753) < 1e-4);
    CHECK(j["n"] == 200);
    CHECK(j["d"] == 2);
    CHECK(j["method"] == "gcd-consecutive");
    CHECK(j["torsion"] == false);
    CHECK(j.contains("warnings"));
    s.parameters.json = false;
    const Run text = run("height", s);
    CHECK(text.rc == 0);
    CHECK(text.out.find("hhat") != std::string::npos);
}

TEST_CASE("other commands") {
    JobSpec s = parse_input(kSilver1);
    s.parameters.k = 6;
    CHECK(run_json("tate-check", s)["difference"].get<double>() <= 5e-3);

    JobSpec c = parse_input(k37);
    c.parameters.n = 8;
    const Run psi = run("psi", c);
    CHECK(psi.rc == 0);
    CHECK(psi.out == "5\n");

    JobSpec d = parse_input(R"({"curve":{"a4":["-16"],"a6":["16"]},"point":{"x":["0"],"y":["4"]}})");
    d.parameters.n = 150;
    d.parameters.primes = {2, 37};
    const auto dj = run_json("decompose", d);
    CHECK(dj["per_prime"].size() == 2);
    CHECK(std::fabs(dj["residual"].get<double>()) < 1e-6);
    JobSpec no_primes = d;
    no_primes.parameters.primes.clear();
    CHECK(run("decompose", no_primes).rc == 1);
    JobSpec bad_prime = d;
    bad_prime.parameters.primes = {5};
    CHECK(run("decompose", bad_prime).rc == 1);

    JobSpec a = parse_input(kSilver1);
    a.parameters.n = 300;
    const auto aj = run_json("arch", a);
    CHECK(aj["n"] == 512);
    CHECK(std::fabs(aj["arch"].get<double>() - 0.45754) < 1e-3);

    JobSpec g = parse_input(R"({"field":{"minpoly":["1","1","1"]},"seed":{"u2":["1","1"],"u3":["1","1"],"u4":["1","1"]}})");
    g.parameters.n = 512;
    CHECK(std::fabs(run_json("eds-growth", g)["hhat"].get<double>() - 0.01032) < 5e-5);

    JobSpec l = parse_input(R"({"field":{"minpoly":["0","1"]}})");
    l.parameters.extend_to = 128;
    const auto lj = run_json("lehmer-search", l);
    CHECK(lj["candidates"].size() > 0);
    CHECK(lj["candidates"][0]["caveat"] == true);
    CHECK(run("height", l).rc == 1);
    CHECK(run("nonsense", c).rc == 1);
}

TEST_CASE("torsion is a success") {
    JobSpec t = parse_input(R"({"curve":{"a4":["-1"]},"point":{"x":["0"],"y":["0"]}})");
    const auto j = run_json("height", t);
    CHECK(j["torsion"] == true);
    CHECK(j["hhat"].get<double>() == 0.0);
    CHECK(run_json("arch", t)["torsion"] == true);
    CHECK(run_json("psi", t)["torsion"] == true);
}

TEST_CASE("JSON output round-trips and is reproducible") {
    JobSpec s = parse_input(kSilver1);
    s.parameters.n = 100;
    s.parameters.json = true;
    const Run a = run("height", s);
    const Run b = run("height", s);
    CHECK(a.out == b.out);
    const auto j = nlohmann::ordered_json::parse(a.out);
    CHECK(j.dump() + "\n" == a.out);
    for (const char* key : {"hhat", "arch", "nonarch"}) {
        const double v = j[key].get<double>();
        CHECK(round12(v) == v);
    }
    s.parameters.threads = 1;
    CHECK(run("height", s).out == a.out);
}

TEST_CASE("overrides and defaults") {
    JobParameters base;
    base.N = 5;
    JobParameters flags;
    flags.n = 77;
    flags.method = HeightMethod::DPower;
    apply_overrides(base, flags);
    CHECK(base.n == 77);
    CHECK(!base.N);
    CHECK(base.method == HeightMethod::DPower);
    CHECK(parse_integer_list("2,37", "p") == std::vector<mpz_class>{2, 37});
    CHECK(parse_element(fx::qw(), "1,-1/2", "x") == FieldElement(fx::qw(), std::vector<mpq_class>{1, mpq_class(-1, 2)}));
    CHECK(default_precision_bits() >= 32);
}
