#pragma once

#include <random>
#include <vector>

#include "fluted/formula.hpp"
#include "fluted/normal_form.hpp"
#include "fluted/structure.hpp"
#include "fluted/types.hpp"

namespace fluted::random {

using Rng = std::mt19937_64;

struct NfShape {
    int k = 3;
    std::vector<int> arities;  // one predicate per entry; at least one of arity <= k-1
    int max_s = 2;
    int max_t = 2;
    int min_s = 0;
    int max_statics = 2;
    int max_body = 2;   // clauses per existential body
    int max_lits = 3;   // literals per clause
};

Signature signature_of(const std::vector<int>& arities);
KClause random_clause(const Vocabulary& v, int k, Rng& rng, int max_lits);
// proposition free; guards are random predicates of arity <= k-1
NormalForm random_nf(Rng& rng, const NfShape& shape);

// Fluted sentence of width <= max_width over the given predicates.
Formula random_sentence(Rng& rng, const std::vector<int>& arities, int max_width, int depth);

Structure random_structure(Rng& rng, const Signature& sig, int n, double density = 0.5);

}  // namespace fluted::random
