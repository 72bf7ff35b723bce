#include "random_instances.hpp"

#include <stdexcept>
#include <string>

namespace fluted::random {

namespace {
int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }
}  // namespace

Signature signature_of(const std::vector<int>& arities) {
    Signature sig;
    for (std::size_t i = 0; i < arities.size(); ++i)
        sig.add({std::string(1, static_cast<char>('a' + i)), arities[i]});
    return sig;
}

KClause random_clause(const Vocabulary& v, int k, Rng& rng, int max_lits) {
    KClause c(v, k);
    const int atoms = static_cast<int>(v.prefix(k));
    if (atoms == 0) return c;
    const int n = uniform(rng, 1, max_lits);
    for (int i = 0; i < n; ++i) {
        auto a = static_cast<std::size_t>(uniform(rng, 0, atoms - 1));
        if (coin(rng)) c.pos.set(a); else c.neg.set(a);
    }
    return c;
}

NormalForm random_nf(Rng& rng, const NfShape& shape) {
    NormalForm nf;
    nf.k = shape.k;
    nf.vocab = Vocabulary(signature_of(shape.arities));
    std::vector<std::size_t> guards;
    for (std::size_t i = 0; i < nf.vocab.size(); ++i)
        if (nf.vocab.arity(i) >= 1 && nf.vocab.arity(i) <= shape.k - 1) guards.push_back(i);
    if (guards.empty()) throw std::invalid_argument("no predicate can serve as a guard");
    auto guard = [&] { return guards[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(guards.size()) - 1))]; };
    auto clause = [&] {
        // tautologies say nothing; draw again
        for (;;) {
            KClause c = random_clause(nf.vocab, shape.k, rng, shape.max_lits);
            if (!c.tautology()) return c;
        }
    };

    const int statics = uniform(rng, 0, shape.max_statics);
    for (int i = 0; i < statics; ++i) nf.statics.push_back(clause());
    const int s = uniform(rng, shape.min_s, shape.max_s);
    for (int i = 0; i < s; ++i) {
        ExistentialConjunct e{guard(), {}};
        const int b = uniform(rng, 1, shape.max_body);
        for (int j = 0; j < b; ++j) e.body.push_back(clause());
        nf.existentials.push_back(std::move(e));
    }
    const int t = uniform(rng, 0, shape.max_t);
    for (int j = 0; j < t; ++j) nf.universals.push_back({guard(), clause()});
    return nf;
}

namespace {

Formula sentence_at(Rng& rng, const std::vector<int>& arities, int level, int max_width, int depth) {
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < arities.size(); ++i)
        if (arities[i] <= level) usable.push_back(i);
    const bool can_quantify = level < max_width;
    const int roll = uniform(rng, 0, 9);
    if (depth <= 0 || (roll < 3 && !usable.empty()) || (!can_quantify && roll < 6 && !usable.empty())) {
        if (usable.empty()) {
            return mk_forall(level + 1, sentence_at(rng, arities, level + 1, max_width, 0));
        }
        std::size_t p = usable[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(usable.size()) - 1))];
        std::vector<int> args;
        for (int v = level - arities[p] + 1; v <= level; ++v) args.push_back(v);
        Formula a = Formula::atom(std::string(1, static_cast<char>('a' + p)), args);
        return coin(rng, 0.3) ? Formula::negation(a) : a;
    }
    if (roll < 5 || !can_quantify) {
        Formula l = sentence_at(rng, arities, level, max_width, depth - 1);
        Formula r = sentence_at(rng, arities, level, max_width, depth - 1);
        switch (uniform(rng, 0, 3)) {
            case 0: return Formula::conjunction({l, r});
            case 1: return Formula::disjunction({l, r});
            case 2: return Formula::implies(l, r);
            default: return Formula::negation(l);
        }
    }
    Formula body = sentence_at(rng, arities, level + 1, max_width, depth - 1);
    return coin(rng) ? Formula::forall(level + 1, body) : Formula::exists(level + 1, body);
}

}  // namespace

Formula random_sentence(Rng& rng, const std::vector<int>& arities, int max_width, int depth) {
    return sentence_at(rng, arities, 0, max_width, depth);
}

Structure random_structure(Rng& rng, const Signature& sig, int n, double density) {
    Structure s(n);
    for (const auto& p : sig.predicates()) {
        Relation& r = s.declare(p.name, p.arity);
        for (auto& b : r.bits) b = coin(rng, density) ? 1 : 0;
    }
    return s;
}

}  // namespace fluted::random
