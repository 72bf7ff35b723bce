#include <doctest.h>

#include "fluted/generators.hpp"
#include "fluted/model.hpp"
#include "fluted/text_io.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace fluted;

TEST_CASE("evaluate small cases") {
    Structure s = parse_structure("domain 2\np: 0\n");
    CHECK(evaluate(s, parse_formula("exists x1 p(x1)")));
    CHECK_FALSE(evaluate(s, parse_formula("forall x1 p(x1)")));
    CHECK(evaluate(s, parse_formula("p(x1)"), {-1, 0}));
    CHECK_THROWS_AS(evaluate(s, parse_formula("p(x1)")), UnboundVariable);
    CHECK(evaluate(canonical_phi_model(1, 2), gen_phi(1, 2).sentence));
}

TEST_CASE("evaluate agrees with direct recursion") {
    random::Rng rng(21);
    std::vector<std::vector<int>> arities{{1, 2}, {1, 2, 3}, {0, 1, 2}, {2, 3, 1, 1}};
    for (int round = 0; round < 400; ++round) {
        const auto& ar = arities[static_cast<std::size_t>(round) % arities.size()];
        Formula f = random::random_sentence(rng, ar, 3, 4);
        Structure s = random::random_structure(rng, infer_signature(f), 1 + static_cast<int>(rng() % 4));
        CHECK(evaluate(s, f) == oracle::truth(s, f));
    }
}

TEST_CASE("ftp reads the fluted type") {
    Structure s(1);
    s.declare("r", 2);
    s.set("p", {0});
    Vocabulary v(Signature{{"p", 1}, {"r", 2}});
    KType t = ftp(s, v, {0});
    CHECK(t.holds(v.at("p")));
    random::Rng rng(2);
    Signature sig = random::signature_of({1, 2, 3});
    Vocabulary w(sig);
    Structure m = random::random_structure(rng, sig, 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(ftp(m, w, {a, b}) == oracle::type_of(m, w, {a, b}));
}

TEST_CASE("multiply copies the domain") {
    Structure s = parse_structure("domain 2\np: 1\nr: 0 1\n");
    Structure one = multiply(s, 1);
    CHECK(one == s);
    Structure three = multiply(s, 3);
    CHECK(three.size() == 6);
    CHECK(three.holds("p", {5}));
    CHECK_FALSE(three.holds("p", {4}));
    CHECK(three.holds("r", {2, 5}));
    CHECK(three.holds("r", {0, 3}));
}

TEST_CASE("multiply preserves truth and multiplies witnesses") {
    random::Rng rng(9);
    for (int round = 0; round < 150; ++round) {
        Formula f = random::random_sentence(rng, {1, 2, 2, 3}, 3, 4);
        Structure s = random::random_structure(rng, infer_signature(f), 1 + static_cast<int>(rng() % 3));
        int z = 1 + static_cast<int>(rng() % 3);
        Structure m = multiply(s, z);
        CHECK(evaluate(m, f) == evaluate(s, f));
        for (const auto& q : oracle::quantified_subformulas(f)) CHECK(oracle::min_witnesses(m, q) >= z);
    }
}

TEST_CASE("find_model_upto") {
    auto one = find_model_upto(parse_formula("exists x1 p(x1)"), 3);
    REQUIRE(one.model.has_value());
    CHECK(one.model->size() == 1);

    auto none = find_model_upto(parse_formula("(exists x1 p(x1)) & (forall x1 ~p(x1))"), 4);
    CHECK_FALSE(none.model.has_value());
    CHECK(none.searched_upto == 4);

    Formula phi = gen_phi(1, 2).sentence;
    CHECK_FALSE(find_model_upto(phi, 3).model.has_value());
    auto four = find_model_upto(phi, 4);
    REQUIRE(four.model.has_value());
    CHECK(four.model->size() == 4);
    CHECK(oracle::truth(*four.model, phi));
}

TEST_CASE("find_model_upto agrees with exhaustive search on tiny inputs") {
    random::Rng rng(4);
    for (int round = 0; round < 60; ++round) {
        Formula f = random::random_sentence(rng, {1, 1, 2}, 2, 3);
        for (int n = 1; n <= 2; ++n) {
            bool brute = oracle::brute_force_model(f, n).has_value();
            auto got = find_model_of_size(f, n);
            CHECK(got.has_value() == brute);
            if (got) CHECK(oracle::truth(*got, f));
        }
    }
}
