#include "jetform/documents.hpp"
#include "jetform/textio.hpp"
#include "testutil.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <unistd.h>

using namespace jetform;
using testutil::ExprGen;

TEST_CASE("parser essentials") {
    auto ctx = testutil::ctx_u3();
    CHECK(print_expr(parse_expr("u_x2*u_x1", ctx)) == "u_x1*u_x2");
    CHECK(print_expr(DiffPoly::zero(ctx)) == "0");
    CHECK(parse_expr("1/2*u_x1*u_x2 - cos(u)", ctx) ==
          parse_expr("-cos(u) + u_x2*u_x1/2", ctx));
    auto akns = Context::make(2, {"q", "r"});
    CHECK(parse_expr("i/2*q_x1*r_x1", akns) ==
          parse_expr("q_x1*r_x1", akns).scaled(GaussRat::i() * GaussRat::rational(1, 2)));
}

TEST_CASE("parser errors carry position") {
    auto ctx = testutil::ctx_u3();
    CHECK_THROWS_AS(parse_expr("u_x9", ctx), SyntaxError);
    CHECK_THROWS_AS(parse_expr("w + 1", ctx), SyntaxError);
    CHECK_THROWS_AS(parse_expr("u_y1", ctx), SyntaxError);
    CHECK_THROWS_AS(parse_expr("sin(u_x1)", ctx), SyntaxError);
    CHECK_THROWS_AS(parse_expr("u_x1 * * u", ctx), SyntaxError);
    CHECK_THROWS_AS(parse_expr("1/(u)", ctx), SyntaxError);
    try {
        parse_expr("u +\n qq", ctx);
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 2);
    }
    auto no_trig = Context::make(2, {"u"});
    CHECK_THROWS_AS(parse_expr("sin(u)", no_trig), SyntaxError);
}

TEST_CASE("print is canonical and parse round-trips") {
    auto ctx = testutil::ctx_u3();
    DiffPoly e = euler(parse_expr("1/2*u_x1*u_x2 - cos(u)", ctx), Field{1}, {Axis{1}, Axis{2}});
    CHECK(print_expr(e) == "sin(u) - u_x1x2");
    ExprGen gen(Context::make(3, {"u", "w"}, {"u"}), 5150);
    for (int round = 0; round < 200; ++round) {
        DiffPoly f = gen.poly(5);
        REQUIRE(parse_expr(print_expr(f), f.context()) == f);
    }
}

TEST_CASE("mixed complex coefficients round-trip") {
    auto ctx = testutil::ctx_u2();
    DiffPoly f = parse_expr("u", ctx).scaled(GaussRat(mpq_class(3, 2), mpq_class(-5, 4)));
    CHECK(parse_expr(print_expr(f), ctx) == f);
    DiffPoly g = parse_expr("(1+i)*u + (1-i)*u_x1", ctx);
    CHECK(parse_expr(print_expr(g), ctx) == g);
}

TEST_CASE("documents round-trip and validate") {
    json ctxj{{"axes", {"x1", "x2", "x3"}}, {"fields", {"u"}}, {"trig_fields", {"u"}}};
    json mf{{"context", ctxj},
            {"degree", 2},
            {"coefficients",
             {{"12", "1/2*u_x1*u_x2 - cos(u)"}, {"23", "-1/2*u_x2*u_x3 + u_x1x1*u_x1x2"}}}};
    KForm form = multiform_from_json(mf);
    KForm again = multiform_from_json(multiform_to_json(form));
    for (auto& [tuple, coeff] : form.coefficients())
        REQUIRE(again.coefficient(tuple) == coeff);

    json bad = mf;
    bad["coefficients"] = json{{"21", "u"}};
    CHECK_THROWS_AS(multiform_from_json(bad), SchemaError);
    json dup = mf;
    dup["coefficients"] = json{{"12", "u"}, {"1 2", "u"}};
    CHECK_THROWS_AS(multiform_from_json(dup), SchemaError);
    json bad_axis = mf;
    bad_axis["context"]["axes"] = {"x1", "t", "x3"};
    CHECK_THROWS_AS(multiform_from_json(bad_axis), SchemaError);

    std::string path = std::string("/tmp/jetform_doc_") + std::to_string(::getpid()) + ".json";
    save_document(path, "multiform", multiform_to_json(form));
    json loaded = load_document(path, "multiform");
    KForm from_disk = multiform_from_json(loaded);
    for (auto& [tuple, coeff] : form.coefficients())
        REQUIRE(from_disk.coefficient(tuple) == coeff);
    std::remove(path.c_str());
}

TEST_CASE("eom document validation") {
    json ctxj{{"axes", {"x1", "x2"}}, {"fields", {"u"}}, {"trig_fields", json::array()}};
    json doc{{"context", ctxj},
             {"rules", {{{"field", "u"}, {"lead", {1, 1}}, {"rhs", "u^2"}}}}};
    EOMSystem sys = eom_from_json(doc);
    CHECK(sys.rules().size() == 1);
    json self = doc;
    self["rules"][0]["rhs"] = "u_x1x1x2";
    CHECK_THROWS_AS(eom_from_json(self), SchemaError);
    json short_lead = doc;
    short_lead["rules"][0]["lead"] = {1};
    CHECK_THROWS_AS(eom_from_json(short_lead), SchemaError);
}
