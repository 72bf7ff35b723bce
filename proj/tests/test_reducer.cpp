#include <doctest.h>

#include "fluted/generators.hpp"
#include "fluted/model.hpp"
#include "fluted/reducer.hpp"
#include "fluted/text_io.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace fluted;

namespace {

// g(x1,x2,x3) -> exists x4 (p(x4) | r(x1,x2,x3,x4))
NormalForm one_existential() {
    NormalForm nf;
    nf.k = 4;
    nf.vocab = Vocabulary(Signature{{"g", 3}, {"r", 4}, {"p", 1}});
    nf.existentials.push_back({nf.vocab.at("g"), {make_clause(nf.vocab, 4, {{"r", true}, {"p", true}})}});
    return nf;
}

std::size_t fresh_count(const NormalForm& nf, char kind) {
    std::size_t n = 0;
    for (const auto& p : nf.vocab.predicates())
        if (is_fresh_name(p.name) && p.name.size() > 1 && p.name[1] == kind) ++n;
    return n;
}

}  // namespace

TEST_CASE("reduce_once with one existential and no universals") {
    NormalForm nf = one_existential();
    NormalForm r = reduce_once(nf);
    CHECK(r.k == 3);
    CHECK(r.s() == 1);
    CHECK(fresh_count(r, 'p') == 1);
    CHECK(fresh_count(r, 'q') == 1);
    CHECK_FALSE(r.vocab.index("r").has_value());
    CHECK(r.vocab.arity(r.vocab.at(existential_guard_name(0, 0, 0))) == 2);
}

TEST_CASE("reduce_once sizes grow with the universal subsets") {
    random::Rng rng(40);
    random::NfShape shape;
    shape.k = 4;
    shape.arities = {1, 2, 4};
    shape.min_s = 2;
    shape.max_s = 2;
    for (int round = 0; round < 10; ++round) {
        NormalForm nf = random::random_nf(rng, shape);
        NormalForm r = reduce_once(nf);
        const std::size_t subsets = std::size_t{1} << nf.t();
        CHECK(r.s() == subsets * nf.s());
        CHECK(fresh_count(r, 'p') == subsets * nf.s());
        CHECK(fresh_count(r, 'q') == subsets);
        CHECK(fluted_status(to_formula(r)).is_fluted);
    }
    CHECK_THROWS_AS(reduce_once(normalize(parse_formula("forall x1 exists x2 r(x1,x2)"))), WidthTooLow);
}

TEST_CASE("lifting a model of the reduced form") {
    NormalForm nf = one_existential();
    NormalForm r = reduce_once(nf);
    Verdict v = decide_fl3(r);
    REQUIRE(v.sat);
    Structure lifted = lift_model(nf, *v.model);
    CHECK(lifted.size() == v.model->size());
    CHECK(evaluate(lifted, to_formula(nf)));

    Structure bad = *v.model;
    bad.declare("r", 4);
    CHECK_THROWS_AS(lift_model(nf, bad), LiftFailure);
}

TEST_CASE("decide examples") {
    CHECK_FALSE(decide(parse_formula("q & ~q")).sat);
    CHECK(decide(parse_formula("q | ~q")).sat);
    CHECK_FALSE(decide(parse_formula("(exists x1 p(x1)) & (forall x1 ~p(x1))")).sat);

    Formula phi = gen_phi(1, 1).sentence;
    DecideResult r = decide(phi);
    REQUIRE(r.sat);
    REQUIRE(r.model.has_value());
    CHECK(oracle::truth(*r.model, phi));
    CHECK(r.model->predicate_names().size() == infer_signature(phi).size());
    CHECK(render_structure(*decide(phi).model) == render_structure(*r.model));
}

TEST_CASE("random width-4 normal forms survive the reduction") {
    random::Rng rng(41);
    std::vector<std::vector<int>> sigs{{1, 4}, {2, 4}, {1, 2, 4}, {3, 4}};
    int sat = 0;
    for (int round = 0; round < 24; ++round) {
        random::NfShape shape;
        shape.k = 4;
        shape.arities = sigs[static_cast<std::size_t>(round) % sigs.size()];
        shape.min_s = 1;
        shape.max_s = 2;
        NormalForm nf = random::random_nf(rng, shape);
        Formula orig = to_formula(nf);
        auto found = find_model_upto(orig, 2);
        NormalForm red = reduce_once(nf);
        Fl3Options o;
        o.domain_cap = 6;
        Verdict v;
        try {
            v = decide_fl3(red, o);
        } catch (const CapExceeded&) {
            CHECK_FALSE(found.model.has_value());
            continue;
        }
        if (found.model) CHECK(v.sat);
        if (!v.sat) continue;
        ++sat;
        Structure lifted = lift_model(nf, *v.model);
        CHECK(static_cast<std::size_t>(lifted.size()) == nf.s() * static_cast<std::size_t>(v.model->size()));
        CHECK(evaluate(lifted, orig));
    }
    CHECK(sat > 5);
}
