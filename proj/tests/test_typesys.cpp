#include <doctest.h>

#include "fluted/text_io.hpp"
#include "fluted/types.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace fluted;

namespace {
Vocabulary pr() { return Vocabulary(Signature{{"p", 1}, {"r", 2}}); }
}  // namespace

TEST_CASE("fluted atoms end at the current level") {
    auto v = pr();
    auto two = enumerate_fluted_atoms(v, 2);
    REQUIRE(two.size() == 2);
    CHECK(render_formula(two[0]) == "p(x2)");
    CHECK(render_formula(two[1]) == "r(x1,x2)");
    auto one = enumerate_fluted_atoms(v, 1);
    REQUIRE(one.size() == 1);
    CHECK(render_formula(one[0]) == "p(x1)");
}

TEST_CASE("clause and type counts") {
    auto v = pr();
    CHECK(enumerate_k_clauses(v, 2).size() == 16);
    CHECK(enumerate_k_clauses(Vocabulary(Signature{{"p", 1}, {"q", 1}, {"r", 2}}), 2).size() == 64);
    CHECK(enumerate_k_types(v, 2).size() == 4);
    CHECK(enumerate_k_types(Vocabulary(Signature{{"p", 1}}), 1).size() == 2);
    CHECK(enumerate_k_types(Vocabulary(Signature{{"p", 1}, {"q", 1}, {"r", 2}}), 2).size() == 8);
    CHECK_THROWS_AS(enumerate_k_types(v, 2, 1), CapExceeded);
}

TEST_CASE("type index round trip") {
    auto v = Vocabulary(Signature{{"p", 1}, {"q", 1}, {"r", 2}});
    for (std::uint64_t i = 0; i < 8; ++i) CHECK(type_index(type_from_index(v, 2, i)) == i);
}

TEST_CASE("shift_up and drop_first") {
    auto v1 = Vocabulary(Signature{{"p", 1}});
    KType t = type_from_index(v1, 1, 1);  // p(x1)
    LiteralSet up = shift_up(v1, t);
    CHECK(up.level == 2);
    CHECK(render_literals(v1, up, " & ") == "p(x2)");

    auto v = pr();
    KType two;
    two.level = 2;
    two.truth.resize(2);
    two.truth.set(v.at("r"));  // r(x1,x2), ~p(x2)
    KType one = drop_first(v, two);
    CHECK(one.level == 1);
    CHECK_FALSE(one.holds(v.at("p")));
}

TEST_CASE("drop_first agrees with the types read off a structure") {
    random::Rng rng(7);
    for (int round = 0; round < 50; ++round) {
        Signature sig = random::signature_of({1, 2, 3, 2});
        Vocabulary v(sig);
        Structure s = random::random_structure(rng, sig, 3);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c) {
                    CHECK(drop_first(v, oracle::type_of(s, v, {a, b, c})) == oracle::type_of(s, v, {b, c}));
                    CHECK(drop_first(v, oracle::type_of(s, v, {b, c})) == oracle::type_of(s, v, {c}));
                }
    }
}

TEST_CASE("consistent on small cases") {
    auto v = pr();
    std::vector<KClause> none;
    CHECK(consistent(v, 2, none));
    std::vector<KClause> bottom{LiteralSet(v, 2)};
    CHECK_FALSE(consistent(v, 2, bottom));

    // ~r(x1,x2), p(x2) together with the clause r(x1,x2)
    LiteralSet tau(v, 2);
    tau.neg.set(v.at("r"));
    tau.pos.set(v.at("p"));
    std::vector<KClause> cl{make_clause(v, 2, {{"r", true}})};
    std::vector<LiteralSet> fixed{tau};
    CHECK_FALSE(consistent(v, 2, cl, fixed));
    CHECK_FALSE(oracle::consistent_by_table(v, 2, cl, fixed));
}

TEST_CASE("consistent matches truth tables on random clause sets") {
    random::Rng rng(11);
    Vocabulary v(random::signature_of({1, 1, 2, 3, 3}));
    for (int round = 0; round < 400; ++round) {
        std::vector<KClause> cs;
        int n = static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) cs.push_back(random::random_clause(v, 3, rng, 3));
        std::vector<LiteralSet> fixed;
        if (rng() % 2) fixed.push_back(random::random_clause(v, 3, rng, 2));
        bool expect = oracle::consistent_by_table(v, 3, cs, fixed);
        CHECK(consistent(v, 3, cs, fixed) == expect);
        auto t = find_consistent(v, 3, cs, fixed);
        REQUIRE(t.has_value() == expect);
        if (t)
            for (const auto& c : cs) CHECK(satisfies(*t, c));
    }
}
