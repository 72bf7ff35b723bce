#include <doctest.h>

#include <algorithm>

#include "fluted/resolution.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace fluted;

namespace {
Vocabulary pqr() { return Vocabulary(Signature{{"p", 1}, {"q", 1}, {"r", 2}}); }
bool has(const std::vector<KClause>& cs, const KClause& c) { return std::find(cs.begin(), cs.end(), c) != cs.end(); }
}  // namespace

TEST_CASE("single resolution steps") {
    auto v = pqr();
    auto g = make_clause(v, 2, {{"r", true}, {"p", false}});
    auto d = make_clause(v, 2, {{"r", false}, {"q", true}});
    auto res = fluted_resolve(v, g, d);
    REQUIRE(res.has_value());
    CHECK(*res == make_clause(v, 2, {{"p", false}, {"q", true}}));

    // no arity-2 atom to resolve on
    CHECK_FALSE(fluted_resolve(v, make_clause(v, 2, {{"p", true}}), d).has_value());

    auto bottom = fluted_resolve(v, make_clause(v, 2, {{"r", true}}), make_clause(v, 2, {{"r", false}}));
    REQUIRE(bottom.has_value());
    CHECK(bottom->empty());
}

TEST_CASE("closure and its zero restriction") {
    auto v = pqr();
    std::vector<KClause> flat{make_clause(v, 2, {{"p", true}, {"q", false}})};
    CHECK(closure(v, flat) == flat);

    std::vector<KClause> clash{make_clause(v, 2, {{"r", true}}), make_clause(v, 2, {{"r", false}})};
    auto cc = closure(v, clash);
    CHECK(has(cc, LiteralSet(v, 2)));
    auto zc = zero_restrict(v, cc);
    REQUIRE(zc.size() == 1);
    CHECK(zc[0].empty());

    CHECK(zero_restrict(v, {make_clause(v, 2, {{"r", true}})}).empty());

    std::vector<KClause> two{make_clause(v, 2, {{"r", true}, {"p", true}}),
                             make_clause(v, 2, {{"r", false}, {"q", true}})};
    auto z = zero_restrict(v, closure(v, two));
    REQUIRE(z.size() == 1);
    CHECK(z[0] == make_clause(v, 1, {{"p", true}, {"q", true}}));
    CHECK(oracle::entails_by_table(v, 2, two, make_clause(v, 2, {{"p", true}, {"q", true}})));
}

TEST_CASE("closure is idempotent") {
    random::Rng rng(5);
    Vocabulary v(random::signature_of({1, 2, 3, 3}));
    for (int round = 0; round < 100; ++round) {
        std::vector<KClause> cs;
        for (int i = 0; i < 5; ++i) cs.push_back(random::random_clause(v, 3, rng, 3));
        auto c1 = closure(v, cs);
        CHECK(closure(v, c1) == c1);
    }
}

TEST_CASE("extend_type examples") {
    auto v = Vocabulary(Signature{{"p", 1}, {"r", 2}});
    KType none = type_from_index(v, 1, 0);  // ~p(x1)
    KType t = extend_type(v, 2, {}, none);
    CHECK(t.holds(v.at("r")));
    CHECK_FALSE(t.holds(v.at("p")));

    std::vector<KClause> g{make_clause(v, 2, {{"r", false}, {"p", true}})};
    KType u = extend_type(v, 2, g, none);
    CHECK_FALSE(u.holds(v.at("r")));

    std::vector<KClause> bad{make_clause(v, 2, {{"p", true}})};
    CHECK_THROWS_AS(extend_type(v, 2, bad, none), Inconsistent);
}

TEST_CASE("closure clauses are entailed and extensions are complete") {
    random::Rng rng(17);
    int tried = 0;
    for (int round = 0; round < 300; ++round) {
        Vocabulary v(random::signature_of({1, 2, 2, 3, 3}));
        std::vector<KClause> g;
        int n = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) g.push_back(random::random_clause(v, 3, rng, 3));
        auto cl = closure(v, g);
        for (const auto& c : cl) CHECK(oracle::entails_by_table(v, 3, g, c));
        auto zero = zero_restrict(v, cl);
        KType tau = type_from_index(v, 2, rng() % (std::uint64_t{1} << v.prefix(2)));
        std::vector<LiteralSet> fixed{as_literals(tau)};
        if (!consistent(v, 2, zero, fixed)) {
            CHECK_THROWS_AS(extend_type(v, 3, g, tau), Inconsistent);
            continue;
        }
        ++tried;
        KType plus = extend_type(v, 3, g, tau);
        CHECK(drop_first(v, plus) == tau);
        for (const auto& c : g) CHECK(satisfies(plus, c));
    }
    CHECK(tried > 50);
}
