#include "helpers.hpp"

#include <doctest.h>

using namespace th;

TEST_CASE("statement parsing") {
    SUBCASE("ring with both blocks and a relation") {
        auto ws = dsl::parse("ring A = Q{T}[[Z]] / (T - Z);");
        const auto &p = ws.rings.at("A");
        CHECK(p->t_vars == std::vector<std::string>{"T"});
        CHECK(p->z_vars == std::vector<std::string>{"Z"});
        REQUIRE(p->relations.generators().size() == 1);
        CHECK(p->relations.generators()[0] == P(p->ring, "T - Z"));
    }
    SUBCASE("prime field ring") {
        auto ws = dsl::parse("ring A = Fp(7){x} / (x^7 - x);");
        CHECK(ws.rings.at("A")->field.p == 7);
    }
    SUBCASE("unresolved source ring is a semantic diagnostic") {
        try {
            dsl::parse("ring A = Q[[Z]]; map f : B -> A { };");
            FAIL("expected a parse error");
        } catch (const dsl::ParseError &e) {
            CHECK(e.kind == "semantic");
            CHECK(e.message.find("unresolved: B") != std::string::npos);
            CHECK(e.line >= 1);
        }
    }
    SUBCASE("points auto-zero the Z block and honor relations") {
        auto ws = dsl::parse("ring A = Q{T}[[Z]] / (T - Z); point x on A { };");
        const auto &x = ws.points.at("x");
        CHECK(x.coords[0].is_zero());
        CHECK(x.coords[1].is_zero());
        CHECK_THROWS_AS(dsl::parse("ring N = Q{x,y} / (x*y); point b on N { x = 1, y = 1 };"), dsl::ParseError);
        CHECK_THROWS_AS(dsl::parse("ring A = Q[[Z]]; point b on A { Z = 1 };"), dsl::ParseError);
    }
    SUBCASE("rational coordinates") {
        auto ws = dsl::parse("ring A = Q{T}; point x on A { T = 1/2 };");
        CHECK(ws.points.at("x").coords[0] == q(1, 2));
    }
    SUBCASE("lexical positions are tracked") {
        try {
            dsl::parse("ring A = Q{T};\nmap ;");
            FAIL("expected a parse error");
        } catch (const dsl::ParseError &e) {
            CHECK(e.line == 2);
        }
    }
}

TEST_CASE("round-trip over the fixture corpus") {
    for (const std::string name : {"basic.fsc", "corpus.fsc", "deform.fsc"}) {
        auto src = slurp(std::string(FIXTURE_DIR) + "/" + name);
        auto ws = dsl::parse(src);
        std::string printed = dsl::pretty_print(ws);
        auto ws2 = dsl::parse(printed);
        CHECK(dsl::workspace_equal(ws, ws2));
        // printing is a fixed point
        CHECK(dsl::pretty_print(ws2) == printed);
    }
}

TEST_CASE("command dispatch and exit codes") {
    auto src = slurp(std::string(FIXTURE_DIR) + "/corpus.fsc");
    RunOptions opts;
    SUBCASE("definite verdicts exit zero") {
        auto res = run_source(src, "unramified kappa", opts);
        CHECK(res.exit_code == 0);
        CHECK(res.report["verdict"] == "Unramified");
    }
    SUBCASE("unknown commands are usage errors") {
        CHECK(run_source(src, "frobnicate kappa", opts).exit_code == 1);
        CHECK(run_source(src, "unramified", opts).exit_code == 1);
    }
    SUBCASE("unknown names are usage errors") {
        CHECK(run_source(src, "unramified nosuch", opts).exit_code == 1);
    }
    SUBCASE("parse failures are diagnostics") {
        auto res = run_source("ring A = ;", "unramified f", opts);
        CHECK(res.exit_code == 2);
        CHECK(res.report["verdict"] == "diagnostics");
    }
    SUBCASE("malformed command fragments are diagnostics") {
        auto res = run_source(src, "complete Aff by (T", opts);
        CHECK(res.exit_code == 2);
        CHECK(res.report["verdict"] == "diagnostics");
    }
    SUBCASE("indeterminate verdicts exit three with a reason code") {
        auto res = run_source(src, "quasi-covering p9 at m9pt", opts);
        CHECK(res.exit_code == 3);
        REQUIRE(res.report["caveats"].size() > 0);
        CHECK(res.report["caveats"][0].contains("reason"));
        CHECK(res.report["caveats"][0].contains("bound"));
    }
    SUBCASE("validate reports diagnostics with exit two") {
        auto bad = "ring A = Q[[Z]] / (1);";
        auto res = run_source(bad, "validate A", opts);
        CHECK(res.exit_code == 2);
    }
}

TEST_CASE("reports are byte-identical across runs") {
    auto src = slurp(std::string(FIXTURE_DIR) + "/corpus.fsc");
    RunOptions opts;
    for (const std::string cmd :
         {"classify etale kappa at o2", "omega p2", "dimensions MixedA", "oracle kappa", "fseq1 kappa p1"}) {
        auto a = run_source(src, cmd, opts);
        auto b = run_source(src, cmd, opts);
        CHECK(a.report.dump(2) == b.report.dump(2));
    }
}

TEST_CASE("report skeleton carries the canonical keys") {
    auto src = slurp(std::string(FIXTURE_DIR) + "/basic.fsc");
    auto res = run_source(src, "dimensions Disc", RunOptions{});
    for (const std::string key : {"command", "verdict", "certificate", "witness", "caveats", "timing_ms"})
        CHECK(res.report.contains(key));
    CHECK(res.report["timing_ms"] == 0);
}
