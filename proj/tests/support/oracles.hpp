#pragma once

// Slow reference implementations the library is checked against. None of them
// call the code under test beyond data-structure accessors.

#include <optional>
#include <span>
#include <vector>

#include "fluted/formula.hpp"
#include "fluted/sat.hpp"
#include "fluted/structure.hpp"
#include "fluted/types.hpp"

namespace fluted::oracle {

// Tarskian truth by direct recursion; env[v] = value of x_v.
bool truth(const Structure& s, const Formula& f, std::vector<int>& env);
bool truth(const Structure& s, const Formula& f);

// Every assignment in turn; only for a handful of variables.
std::optional<std::vector<bool>> brute_force_sat(const Cnf& f);

// Truth-table questions over the level-k atoms (at most ~20 atoms).
bool clause_true(const KClause& c, std::uint64_t assignment);
bool consistent_by_table(const Vocabulary& v, int k, std::span<const KClause> clauses,
                         std::span<const LiteralSet> fixed = {});
bool entails_by_table(const Vocabulary& v, int k, std::span<const KClause> premises, const KClause& c);

// First structure of size n (all relations enumerated) satisfying f; tiny only.
std::optional<Structure> brute_force_model(const Formula& f, int n);

// Fluted k-type of a tuple read straight off the relations.
KType type_of(const Structure& s, const Vocabulary& v, const std::vector<int>& tuple);

}  // namespace fluted::oracle

namespace fluted::oracle {

// Quantified subformulas of f, outermost first.
std::vector<Formula> quantified_subformulas(const Formula& f);
// Smallest nonzero count, over all assignments to x1..x(v-1), of values of x_v
// making the body of q true, and likewise false. 0 when no count is nonzero.
int min_witnesses(const Structure& s, const Formula& q);

}  // namespace fluted::oracle
