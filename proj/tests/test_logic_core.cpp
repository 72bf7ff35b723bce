#include <doctest.h>

#include "fluted/formula.hpp"
#include "fluted/generators.hpp"
#include "fluted/text_io.hpp"

using namespace fluted;

namespace {
// No student admires every professor.
const char* kStudents = "forall x1 (student(x1) -> ~ forall x2 (prof(x2) -> admires(x1,x2)))";
// No lecturer introduces any professor to every student.
const char* kLecturers =
    "forall x1 (lecturer(x1) -> ~ exists x2 (prof(x2) & forall x3 (student(x3) -> intro(x1,x2,x3))))";
}  // namespace

TEST_CASE("infer_signature reads arities") {
    CHECK(infer_signature(Formula::atom("p", {1, 2})) == Signature{{"p", 2}});
    CHECK(infer_signature(parse_formula(kLecturers)) ==
          Signature{{"lecturer", 1}, {"prof", 1}, {"student", 1}, {"intro", 3}});
    CHECK_THROWS_AS(infer_signature(parse_formula("p(x1) & p(x1,x2)")), ArityConflict);
}

TEST_CASE("signature order is by arity then name") {
    Signature s{{"z", 1}, {"a", 2}, {"b", 1}, {"q", 0}};
    auto ps = s.predicates();
    REQUIRE(ps.size() == 4);
    CHECK(ps[0].name == "q");
    CHECK(ps[1].name == "b");
    CHECK(ps[2].name == "z");
    CHECK(ps[3].name == "a");
}

TEST_CASE("fluted_status on the textbook sentences") {
    auto r = fluted_status(parse_formula(kStudents));
    CHECK(r.is_fluted);
    REQUIRE(r.level.has_value());
    CHECK(*r.level == 0);
    CHECK(r.width == 2);
    CHECK(r.violations.empty());

    auto r3 = fluted_status(parse_formula(kLecturers));
    CHECK(r3.is_fluted);
    CHECK(r3.width == 3);
}

TEST_CASE("fluted_status rejects bad argument lists and mixed levels") {
    auto a = fluted_status(parse_formula("r(x2,x1)"));
    CHECK_FALSE(a.is_fluted);
    CHECK_FALSE(a.violations.empty());

    auto b = fluted_status(parse_formula("p(x1) & q(x2)"));
    CHECK_FALSE(b.is_fluted);

    // gaps in the argument list
    CHECK_FALSE(fluted_status(parse_formula("forall x1 forall x2 forall x3 r(x1,x3)")).is_fluted);
    // the quantifier must bind the variable its body ends at
    CHECK_FALSE(fluted_status(parse_formula("exists x1 forall x3 p(x3)")).is_fluted);
    // an open formula may start above level 1
    CHECK(fluted_status(parse_formula("forall x2 p(x2)")).is_fluted);
    // atoms must end at the current level
    CHECK_FALSE(fluted_status(parse_formula("forall x1 forall x2 p(x1)")).is_fluted);
}

TEST_CASE("fluted formulas with free variables report their level") {
    auto r = fluted_status(parse_formula("r(x1,x2) & p(x2)"));
    CHECK(r.is_fluted);
    CHECK(*r.level == 2);
    auto q = fluted_status(parse_formula("q & ~q"));
    CHECK(q.is_fluted);
    CHECK(*q.level == 0);
}

TEST_CASE("width is the largest variable index") {
    CHECK(width(parse_formula("q & ~q")) == 0);
    CHECK(width(parse_formula(kStudents)) == 2);
    CHECK(width(parse_formula(kLecturers)) == 3);
}

TEST_CASE("fluted_status survives re-rendering") {
    for (const char* text : {kStudents, kLecturers, "r(x2,x1)", "p(x1) & q(x2)"}) {
        Formula f = parse_formula(text);
        auto a = fluted_status(f);
        auto b = fluted_status(parse_formula(render_formula(f)));
        CHECK(a.is_fluted == b.is_fluted);
        CHECK(a.level == b.level);
        CHECK(a.width == b.width);
    }
}

TEST_CASE("generated sentences are fluted with width at most 2m") {
    for (auto [m, n] : {std::pair{1, 1}, {1, 3}, {2, 1}, {2, 2}, {3, 1}}) {
        auto g = gen_phi(m, n);
        auto r = fluted_status(g.sentence);
        CHECK(r.is_fluted);
        CHECK(r.width <= 2 * m);
        CHECK(*r.level == 0);
    }
}

TEST_CASE("folding builders simplify constants") {
    Formula p = Formula::atom("p", {});
    CHECK(mk_and({}) == Formula::top());
    CHECK(mk_or({}) == Formula::bottom());
    CHECK(mk_and({p}) == p);
    CHECK(mk_and({p, Formula::bottom()}) == Formula::bottom());
    CHECK(mk_or({p, Formula::top()}) == Formula::top());
    CHECK(mk_implies(Formula::top(), p) == p);
    CHECK(mk_implies(Formula::bottom(), p) == Formula::top());
    CHECK(mk_not(Formula::top()) == Formula::bottom());
}
