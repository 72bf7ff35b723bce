#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fluted/formula.hpp"
#include "fluted/structure.hpp"

namespace fluted {

// tower(0,n) = n, tower(k+1,n) = 2^tower(k,n); Overflow past 2^63.
std::uint64_t tower(int k, std::uint64_t n);

struct LabeledConjunct {
    std::string label;
    Formula formula;
};

struct Generated {
    Signature signature;
    Formula sentence;
    std::vector<LabeledConjunct> conjuncts;
};

struct GenLimits {
    int max_m = 6;
    int max_n = 4096;
};

// Sentence of width 2m whose models have at least tower(m,n) elements.
Generated gen_phi(int m, int n, const GenLimits& lim = {});

// Layers of k-integers 0..tower(k,n)-1 for k = 1..m with every predicate of
// gen_phi(m,n) given its intended meaning.
Structure canonical_phi_model(int m, int n, std::uint64_t domain_cap = 4096);

struct TilingSystem {
    std::vector<std::string> colors;
    std::string initial;
    std::set<std::pair<std::string, std::string>> horizontal;  // (left, right)
    std::set<std::pair<std::string, std::string>> vertical;    // (below, above)
};

// "colors: a b", "initial: a", "h: a b", "v: a b" lines; '%' starts a comment.
TilingSystem parse_tiling_system(std::string_view text);
std::string render_tiling_system(const TilingSystem& t);
// throws InvalidTiling
void validate(const TilingSystem& t);

// f(i, j) with i the horizontal and j the vertical coordinate, toroidal.
struct Tiling {
    int size = 0;
    std::vector<std::string> cells;  // cells[j * size + i]
    const std::string& at(int i, int j) const {
        return cells[static_cast<std::size_t>(j) * static_cast<std::size_t>(size) + static_cast<std::size_t>(i)];
    }
};

void check_tiling(const TilingSystem& t, const Tiling& f);
// First tiling in row-major backtracking order, if any.
std::optional<Tiling> find_tiling(const TilingSystem& t, int size);

inline std::string color_predicate(const std::string& c) { return "col." + c; }

// Satisfiable iff the system tiles the tower(m,n) torus; m >= 2.
Generated gen_tiling(int m, int n, const TilingSystem& t, const GenLimits& lim = {});

// Integer layers 1..m-1 plus one vertex per cell of a tower(m,n) torus.
Structure canonical_tiling_model(int m, int n, const TilingSystem& t, const Tiling& f,
                                 std::uint64_t domain_cap = 4096);

// Tokens of the rendered formula other than parentheses and commas.
std::size_t symbol_count(const Formula& f);

}  // namespace fluted
