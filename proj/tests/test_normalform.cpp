#include <doctest.h>

#include "fluted/fl3.hpp"
#include "fluted/model.hpp"
#include "fluted/normal_form.hpp"
#include "fluted/reducer.hpp"
#include "fluted/text_io.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace fluted;

namespace {
const char* kStudents = "forall x1 (student(x1) -> ~ forall x2 (prof(x2) -> admires(x1,x2)))";

// restricted to the predicates of f
Structure restrict_to(Structure s, const Formula& f) {
    Signature sig = infer_signature(f);
    s.retain([&](const std::string& n) { return sig.contains(n); });
    return s;
}
}  // namespace

TEST_CASE("a lone existential gets a fresh propositional guard") {
    NormalForm nf = normalize(parse_formula("exists x1 p(x1)"));
    CHECK(nf.k == 1);
    REQUIRE(nf.s() == 1);
    CHECK(nf.t() == 0);
    const Predicate& g = nf.vocab[nf.existentials[0].guard];
    CHECK(g.arity == 0);
    CHECK(is_fresh_name(g.name));
    auto m = find_model_upto(to_formula(nf), 2);
    REQUIRE(m.model.has_value());
    CHECK(m.model->size() == 1);
}

TEST_CASE("normal form of the student sentence") {
    Formula f = parse_formula(kStudents);
    NormalForm nf = normalize(f);
    CHECK(nf.k == 2);
    CHECK(nf.s() == 1);
    Formula g = to_formula(nf);
    CHECK(fluted_status(g).is_fluted);
    for (int n = 1; n <= 3; ++n) {
        auto mg = find_model_of_size(g, n);
        CHECK(mg.has_value() == find_model_of_size(f, n).has_value());
        if (mg) CHECK(oracle::truth(restrict_to(*mg, f), f));
    }
}

TEST_CASE("normal-form input keeps its shape") {
    Formula f = parse_formula("forall x1 forall x2 (r(x1,x2) | ~p(x2))");
    NormalForm nf = normalize(f);
    CHECK(nf.k == 2);
    CHECK(nf.s() == 0);
    CHECK(nf.t() == 0);
    REQUIRE(nf.statics.size() == 1);
    CHECK(nf.statics[0] == make_clause(nf.vocab, 2, {{"r", true}, {"p", false}}));
    CHECK(render_normal_form(normalize(to_formula(nf))) == render_normal_form(nf));
}

TEST_CASE("normalize rejects bad input") {
    CHECK_THROWS_AS(normalize(parse_formula("r(x2,x1)")), NotFluted);
    CHECK_THROWS_AS(normalize(parse_formula("q & ~q")), WidthZero);
}

TEST_CASE("normalization preserves satisfiability per domain size") {
    random::Rng rng(31);
    std::vector<std::vector<int>> arities{{1, 2}, {0, 1, 2}, {1, 1, 2}, {1, 2, 3}};
    int sat = 0;
    for (int round = 0; round < 80; ++round) {
        Formula f = random::random_sentence(rng, arities[static_cast<std::size_t>(round) % arities.size()], 3, 4);
        if (width(f) == 0) continue;
        NormalForm nf = normalize(f);
        Formula g = to_formula(nf);
        for (int n = 1; n <= 2; ++n) {
            auto mg = find_model_of_size(g, n);
            auto mf = find_model_of_size(f, n);
            CHECK(mg.has_value() == mf.has_value());
            if (mg) {
                ++sat;
                CHECK(oracle::truth(restrict_to(*mg, f), f));
            }
        }
    }
    CHECK(sat > 0);
}

TEST_CASE("proposition branches") {
    NormalForm plain = normalize(parse_formula(kStudents));
    auto one = eliminate_propositions(plain);
    REQUIRE(one.size() == 1);
    CHECK(one[0].assignment.empty());

    NormalForm withq = normalize(parse_formula("(q | exists x1 p(x1)) & forall x1 (q -> p(x1))"));
    auto two = eliminate_propositions(withq);
    bool has_q = false;
    for (const auto& b : two) has_q = has_q || b.assignment.count("q");
    CHECK(has_q);
    for (const auto& b : two) CHECK(proposition_free(b.nf));

    // q and ~q as statics: every branch carries the empty clause
    NormalForm clash = normalize(parse_formula("q & ~q & exists x1 p(x1)"));
    auto cb = eliminate_propositions(clash);
    CHECK(cb.size() >= 2);
    for (const auto& b : cb) {
        bool empty = false;
        for (const auto& c : b.nf.statics) empty = empty || c.empty();
        CHECK(empty);
        CHECK_FALSE(decide_fl3(pad_to(b.nf, std::max(b.nf.k, 1))).sat);
    }
    CHECK_FALSE(decide(parse_formula("q & ~q & exists x1 p(x1)")).sat);
}
