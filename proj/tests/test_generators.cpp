#include <doctest.h>

#include "fluted/generators.hpp"
#include "fluted/model.hpp"
#include "fluted/text_io.hpp"

using namespace fluted;

namespace {
TilingSystem one_colour() { return parse_tiling_system("colors: a\ninitial: a\nh: a a\nv: a a\n"); }
TilingSystem stripes() {
    return parse_tiling_system("% alternate columns\ncolors: a b\ninitial: a\nh: a b\nh: b a\nv: a a\nv: b b\n");
}
}  // namespace

TEST_CASE("tower table") {
    CHECK(tower(0, 5) == 5);
    CHECK(tower(1, 3) == 8);
    CHECK(tower(2, 2) == 16);
    CHECK(tower(2, 1) == 4);
    CHECK(tower(3, 1) == 16);
    CHECK(tower(4, 1) == 65536);
    CHECK(tower(1, 62) == (std::uint64_t{1} << 62));
    CHECK_THROWS_AS(tower(1, 63), Overflow);
    CHECK_THROWS_AS(tower(3, 3), Overflow);
}

TEST_CASE("generated sentences are fluted with the expected width") {
    for (auto [m, n] : {std::pair{1, 1}, {1, 3}, {2, 1}, {2, 2}, {3, 1}}) {
        Generated g = gen_phi(m, n);
        auto rep = fluted_status(g.sentence);
        CHECK(rep.is_fluted);
        CHECK(rep.width <= 2 * m);
        CHECK(*rep.level == 0);
        for (const auto& c : g.conjuncts) CHECK(fluted_status(c.formula).is_fluted);
    }
    Generated t = gen_tiling(2, 1, one_colour());
    auto rt = fluted_status(t.sentence);
    CHECK(rt.is_fluted);
    CHECK(rt.width <= 4);
    CHECK_THROWS_AS(gen_phi(7, 1), CapExceeded);
    CHECK_THROWS_AS(gen_tiling(1, 1, one_colour()), Error);
}

TEST_CASE("canonical models satisfy the generated sentences") {
    for (auto [m, n] : {std::pair{1, 1}, {1, 2}, {1, 3}, {2, 1}}) {
        Structure s = canonical_phi_model(m, n);
        CHECK(static_cast<std::uint64_t>(s.size()) >= tower(m, static_cast<std::uint64_t>(n)));
        CHECK(evaluate(s, gen_phi(m, n).sentence));
    }
    auto f = find_tiling(one_colour(), 4);
    REQUIRE(f.has_value());
    CHECK(evaluate(canonical_tiling_model(2, 1, one_colour(), *f), gen_tiling(2, 1, one_colour()).sentence));
}

TEST_CASE("the canonical model is not a model of the wrong sentence") {
    CHECK_FALSE(evaluate(canonical_phi_model(1, 1), gen_phi(1, 2).sentence));
}

TEST_CASE("tiling systems and tilings") {
    TilingSystem s = stripes();
    CHECK(parse_tiling_system(render_tiling_system(s)).horizontal == s.horizontal);
    auto f = find_tiling(s, 4);
    REQUIRE(f.has_value());
    CHECK_NOTHROW(check_tiling(s, *f));
    CHECK(f->at(1, 0) == "b");
    CHECK_FALSE(find_tiling(s, 3).has_value());

    Tiling wrong_start = *f;
    for (auto& c : wrong_start.cells) c = c == "a" ? "b" : "a";
    CHECK_THROWS_AS(check_tiling(s, wrong_start), InvalidTiling);

    Tiling broken_row = *f;
    broken_row.cells[2] = "b";  // (2,0) next to (1,0) = b
    CHECK_THROWS_AS(check_tiling(s, broken_row), InvalidTiling);

    CHECK_THROWS_AS(parse_tiling_system("colors: a\n"), SyntaxError);
    CHECK_THROWS_AS(validate(parse_tiling_system("colors: a\ninitial: c\n")), InvalidTiling);
}

TEST_CASE("sentence size grows quadratically in n") {
    std::size_t prev = 0;
    for (int n : {2, 4, 8, 16}) {
        std::size_t c = symbol_count(gen_phi(1, n).sentence);
        CHECK(c > prev);
        if (prev) CHECK(static_cast<double>(c) / static_cast<double>(prev) <= 4.5);
        prev = c;
    }
    CHECK(symbol_count(parse_formula("forall x1 (p(x1) -> q(x1))")) == 7);
}
