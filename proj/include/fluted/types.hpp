#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fluted/formula.hpp"

namespace fluted {

using AtomSet = boost::dynamic_bitset<std::uint64_t>;

// The predicates of a signature in (arity, name) order. Atom i at level k is
// p_i(x_{k-ar+1}, ..., x_k) and exists when ar <= k, so the level-k atoms are
// a prefix of the level-(k+1) atoms. Every bit-vector below is indexed by this
// order and sized to the prefix of its level.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(const Signature& sig);

    const std::vector<Predicate>& predicates() const { return preds_; }
    std::size_t size() const { return preds_.size(); }
    const Predicate& operator[](std::size_t i) const { return preds_[i]; }
    int arity(std::size_t i) const { return preds_[i].arity; }
    std::optional<std::size_t> index(const std::string& name) const;
    std::size_t at(const std::string& name) const;  // throws if absent
    // number of atoms at level k
    std::size_t prefix(int k) const;
    Signature signature() const;
    int max_arity() const { return preds_.empty() ? 0 : preds_.back().arity; }

    bool operator==(const Vocabulary& o) const { return preds_ == o.preds_; }

private:
    std::vector<Predicate> preds_;
    std::map<std::string, std::size_t> index_;
};

// A set of fluted k-literals. Read as a disjunction it is a k-clause; read as a
// conjunction it is a partial k-type. Canonical by construction.
struct LiteralSet {
    int level = 0;
    AtomSet pos;
    AtomSet neg;

    LiteralSet() = default;
    LiteralSet(const Vocabulary& v, int k);

    std::size_t size() const { return pos.count() + neg.count(); }
    bool empty() const { return pos.none() && neg.none(); }
    bool tautology() const { return pos.intersects(neg); }
    // true iff some literal of the set has an atom of arity exactly `level`
    bool touches_top(const Vocabulary& v) const;

    bool operator==(const LiteralSet& o) const {
        return level == o.level && pos == o.pos && neg == o.neg;
    }
    bool operator<(const LiteralSet& o) const;
};

using KClause = LiteralSet;

// Total polarity map over the level-k atoms.
struct KType {
    int level = 0;
    AtomSet truth;

    bool holds(std::size_t atom) const { return truth.test(atom); }
    bool operator==(const KType& o) const { return level == o.level && truth == o.truth; }
    bool operator<(const KType& o) const;
};

struct LiteralSetHash {
    std::size_t operator()(const LiteralSet& s) const;
};
struct KTypeHash {
    std::size_t operator()(const KType& t) const;
};

Formula atom_formula(const Vocabulary& v, std::size_t atom, int level);
std::vector<Formula> enumerate_fluted_atoms(const Vocabulary& v, int k);
Formula clause_formula(const Vocabulary& v, const KClause& c);
// conjunction of the literals
Formula literals_formula(const Vocabulary& v, const LiteralSet& s);

// Build a clause from (predicate name, polarity) pairs.
KClause make_clause(const Vocabulary& v, int k,
                    std::initializer_list<std::pair<const char*, bool>> lits);

std::vector<KType> enumerate_k_types(const Vocabulary& v, int k, std::size_t cap = 20);
// every subset of the 2*#atoms literals, tautologies included
std::vector<KClause> enumerate_k_clauses(const Vocabulary& v, int k, std::size_t cap = 10);
KType type_from_index(const Vocabulary& v, int k, std::uint64_t index);
std::uint64_t type_index(const KType& t);

LiteralSet as_literals(const KType& t);
// increments every variable index: a level-k type becomes a set of (k+1)-literals
LiteralSet shift_up(const Vocabulary& v, const KType& t);
// removes the arity-k literals and decrements the remaining indices
KType drop_first(const Vocabulary& v, const KType& t);

bool satisfies(const KType& t, const KClause& c);
// a partial type violates c iff it contains the complement of each literal of c
bool violates(const LiteralSet& partial, const KClause& c);
// a partial type contradicts itself
bool contradictory(const LiteralSet& s);
LiteralSet merge(const LiteralSet& a, const LiteralSet& b);
LiteralSet resized(const Vocabulary& v, const LiteralSet& s, int level);

// Is there a total level-k map satisfying all clauses and containing every fixed
// literal set? Contradictory fixed literals give false.
bool consistent(const Vocabulary& v, int k, std::span<const KClause> clauses,
                std::span<const LiteralSet> fixed = {});
// Same question; returns the map found by the SAT core.
std::optional<KType> find_consistent(const Vocabulary& v, int k, std::span<const KClause> clauses,
                                     std::span<const LiteralSet> fixed = {});

std::string render_literals(const Vocabulary& v, const LiteralSet& s, const char* sep = " | ");

}  // namespace fluted
