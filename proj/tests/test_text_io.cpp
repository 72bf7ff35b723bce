#include <doctest.h>

#include "fluted/errors.hpp"
#include "fluted/generators.hpp"
#include "fluted/model.hpp"
#include "fluted/text_io.hpp"
#include "oracles.hpp"

using namespace fluted;

TEST_CASE("parse_formula builds the expected tree") {
    Formula f = parse_formula("forall x1 (student(x1) -> ~ forall x2 (prof(x2) -> admires(x1,x2)))");
    CHECK(f == Formula::forall(1, Formula::implies(Formula::atom("student", {1}),
                                                   Formula::negation(Formula::forall(
                                                       2, Formula::implies(Formula::atom("prof", {2}),
                                                                           Formula::atom("admires", {1, 2})))))));
    Formula g = parse_formula("p & ~p");
    REQUIRE(g.op() == Op::And);
    CHECK(g.child(0) == Formula::atom("p", {}));
    CHECK(g.child(1) == Formula::negation(Formula::atom("p", {})));
}

TEST_CASE("connective precedence and associativity") {
    Formula p = Formula::atom("p", {}), q = Formula::atom("q", {}), r = Formula::atom("r", {});
    CHECK(parse_formula("p | q & r") == Formula::disjunction({p, Formula::conjunction({q, r})}));
    CHECK(parse_formula("p -> q -> r") == Formula::implies(p, Formula::implies(q, r)));
    CHECK(parse_formula("p -> q <-> r") == Formula::iff(Formula::implies(p, q), r));
    CHECK(parse_formula("~p & q") == Formula::conjunction({Formula::negation(p), q}));
}

TEST_CASE("syntax errors carry a span inside the input") {
    for (std::string text : {"forall x1 (p(x1)", "p(x1", "p &", "forall y (p(y))", "p(x0)", "(p", "p q"}) {
        CAPTURE(text);
        try {
            parse_formula(text);
            FAIL("no error");
        } catch (const SyntaxError& e) {
            CHECK(e.span.start <= e.span.end);
            CHECK(e.span.end <= text.size());
        }
    }
}

TEST_CASE("rendering is fully parenthesised and round-trips") {
    CHECK(render_formula(Formula::atom("q", {})) == "q");
    for (const char* text :
         {"forall x1 (student(x1) -> ~ forall x2 (prof(x2) -> admires(x1,x2)))", "p | q & r", "p -> q -> r",
          "~(p <-> q)", "exists x1 (p(x1) & forall x2 (r(x1,x2) | ~ p(x2)))"}) {
        Formula f = parse_formula(text);
        CHECK(parse_formula(render_formula(f)) == f);
        CHECK(render_formula(parse_formula(render_formula(f))) == render_formula(f));
    }
    Formula phi = gen_phi(1, 2).sentence;
    CHECK(parse_formula(render_formula(phi)) == phi);
}

TEST_CASE("tptp export") {
    std::string t = render_formula_tptp(parse_formula("forall x1 (p(x1) -> exists x2 r(x1,x2))"), "ax");
    CHECK(t.find("fof(ax, axiom,") == 0);
    CHECK(t.find("! [X1] :") != std::string::npos);
    CHECK(t.find("? [X2] :") != std::string::npos);
    CHECK(t.find("=>") != std::string::npos);
}

TEST_CASE("structure text format") {
    Structure s = parse_structure("domain 2\np: 0\n");
    CHECK(s.size() == 2);
    CHECK(s.holds("p", {0}));
    CHECK_FALSE(s.holds("p", {1}));

    Structure t = parse_structure("% comment\ndomain 3\nr: 2 1\nq:\np: 1\nr: 0 0\n");
    std::string canon = render_structure(t);
    CHECK(render_structure(parse_structure(canon)) == canon);
    CHECK(parse_structure(canon) == t);
    CHECK(t.holds("q", {}));

    CHECK_THROWS_AS(parse_structure("domain 2\np: 2\n"), ElementOutOfRange);
    CHECK_THROWS_AS(parse_structure("domain two\n"), SyntaxError);
    CHECK_THROWS_AS(parse_structure("domain 2\np 0\n"), SyntaxError);
}

TEST_CASE("canonical model survives a render/parse trip") {
    Structure m = parse_structure(render_structure(canonical_phi_model(1, 1)));
    CHECK(oracle::truth(m, gen_phi(1, 1).sentence));
}
