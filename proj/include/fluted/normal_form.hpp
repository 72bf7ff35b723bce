#pragma once

#include <map>
#include <string>
#include <vector>

#include "fluted/formula.hpp"
#include "fluted/types.hpp"

namespace fluted {

struct ExistentialConjunct {
    std::size_t guard;           // vocabulary index of a predicate of arity <= k-1
    std::vector<KClause> body;   // level k
};

struct UniversalConjunct {
    std::size_t guard;
    KClause body;
};

// Conjunction of
//   forall x1..xk  /\ statics
//   forall x1..x(k-1) (alpha_i -> exists xk /\ Gamma_i)     for each existential
//   forall x1..x(k-1) (beta_j -> forall xk delta_j)         for each universal
struct NormalForm {
    int k = 1;
    Vocabulary vocab;
    std::vector<KClause> statics;
    std::vector<ExistentialConjunct> existentials;
    std::vector<UniversalConjunct> universals;

    std::size_t s() const { return existentials.size(); }
    std::size_t t() const { return universals.size(); }
    Signature signature() const { return vocab.signature(); }
};

// Names created by the library start with this character.
inline constexpr char kFreshPrefix = '@';
inline bool is_fresh_name(const std::string& name) {
    return !name.empty() && name[0] == kFreshPrefix;
}

std::vector<Formula> conjuncts(const NormalForm& nf);
Formula to_formula(const NormalForm& nf);
// one conjunct per line, continuation lines prefixed by "& "
std::string render_normal_form(const NormalForm& nf);

// Throws NotFluted or WidthZero.
NormalForm normalize(const Formula& f);

struct PropositionBranch {
    std::map<std::string, bool> assignment;
    NormalForm nf;
};
// One branch per truth assignment to the arity-0 predicates, in binary counting
// order with the first proposition as the low bit.
std::vector<PropositionBranch> eliminate_propositions(const NormalForm& nf);

// Same clauses read at a higher level (the new leading variables are unused).
NormalForm pad_to(const NormalForm& nf, int k);

// Moves every clause of nf onto another vocabulary containing its predicates.
KClause remap(const Vocabulary& from, const Vocabulary& to, const KClause& c, int level);

bool proposition_free(const NormalForm& nf);

}  // namespace fluted
