#pragma once

#include <optional>
#include <vector>

#include "fluted/types.hpp"

namespace fluted {

// Resolves on the first arity-k atom occurring positively in g and negatively in d.
std::optional<KClause> fluted_resolve(const Vocabulary& v, const KClause& g, const KClause& d);

// Smallest superset closed under fluted resolution; tautologies are dropped.
// Sorted, duplicate free.
std::vector<KClause> closure(const Vocabulary& v, std::vector<KClause> clauses,
                             std::size_t cap = std::size_t{1} << 20);

// The clauses with no arity-k literal, re-read at level k-1.
std::vector<KClause> zero_restrict(const Vocabulary& v, const std::vector<KClause>& closed);

// Extends a (k-1)-type, read on x2..xk, to a k-type consistent with the clauses.
// Throws Inconsistent when the restriction of the closure is inconsistent with t.
KType extend_type(const Vocabulary& v, int k, const std::vector<KClause>& clauses, const KType& t);
// Variant taking an already computed closure.
KType extend_type_closed(const Vocabulary& v, int k, const std::vector<KClause>& closed,
                         const KType& t);

}  // namespace fluted
