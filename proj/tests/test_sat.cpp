#include <doctest.h>

#include "fluted/sat.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace fluted;

TEST_CASE("sat basics") {
    Cnf f;
    f.add({1});
    f.add({-1});
    CHECK_FALSE(solve(f).has_value());

    Cnf empty;
    empty.num_vars = 3;
    auto a = solve(empty);
    REQUIRE(a.has_value());
    CHECK(a->values == std::vector<bool>{false, false, false});

    Cnf e;
    e.num_vars = 1;
    e.clauses.push_back({});
    CHECK_FALSE(solve(e).has_value());
    CHECK_THROWS(f.add({0}));
}

TEST_CASE("three pigeons do not fit two holes") {
    // var 2*p + h + 1: pigeon p in hole h
    Cnf f;
    auto x = [](int p, int h) { return 2 * p + h + 1; };
    for (int p = 0; p < 3; ++p) f.add({x(p, 0), x(p, 1)});
    for (int h = 0; h < 2; ++h)
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 3; ++q) f.add({-x(p, h), -x(q, h)});
    CHECK_FALSE(oracle::brute_force_sat(f).has_value());
    CHECK_FALSE(solve(f).has_value());
}

TEST_CASE("random 3-cnf against brute force") {
    random::Rng rng(3);
    int sat = 0;
    for (int round = 0; round < 1000; ++round) {
        Cnf f;
        f.num_vars = 4 + static_cast<int>(rng() % 9);
        int clauses = static_cast<int>(f.num_vars * (3 + rng() % 3));
        for (int c = 0; c < clauses; ++c) {
            std::vector<int> cl;
            for (int i = 0; i < 3; ++i) {
                int v = 1 + static_cast<int>(rng() % static_cast<unsigned>(f.num_vars));
                cl.push_back(rng() % 2 ? v : -v);
            }
            f.add(cl);
        }
        auto expect = oracle::brute_force_sat(f);
        auto got = solve(f);
        REQUIRE(got.has_value() == expect.has_value());
        if (got) {
            ++sat;
            CHECK(satisfies(f, *got));
        }
    }
    // both outcomes occur
    CHECK(sat > 100);
    CHECK(sat < 900);
}

TEST_CASE("dimacs") {
    Cnf f;
    f.add({1, -2});
    CHECK(to_dimacs(f) == "p cnf 2 1\n1 -2 0\n");
}
