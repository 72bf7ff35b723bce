#include "fluted/resolution.hpp"

#include <algorithm>
#include <unordered_set>

namespace fluted {

namespace {

AtomSet top_mask(const Vocabulary& v, int k) {
    AtomSet m(v.prefix(k));
    for (std::size_t i = v.prefix(k - 1); i < m.size(); ++i) m.set(i);
    return m;
}

KClause resolvent(const KClause& g, const KClause& d, std::size_t atom) {
    KClause r = g;
    r.pos |= d.pos;
    r.neg |= d.neg;
    r.pos.reset(atom);
    r.neg.reset(atom);
    return r;
}

}  // namespace

std::optional<KClause> fluted_resolve(const Vocabulary& v, const KClause& g, const KClause& d) {
    if (g.level != d.level || g.level < 1) return std::nullopt;
    AtomSet clash = g.pos & d.neg & top_mask(v, g.level);
    std::size_t i = clash.find_first();
    if (i == AtomSet::npos) return std::nullopt;
    return resolvent(g, d, i);
}

std::vector<KClause> closure(const Vocabulary& v, std::vector<KClause> clauses, std::size_t cap) {
    std::unordered_set<KClause, LiteralSetHash> seen;
    std::vector<KClause> all;
    if (clauses.empty()) return all;
    const int k = clauses.front().level;
    const AtomSet top = top_mask(v, k);

    std::size_t head = 0;
    auto push = [&](KClause c) {
        if (c.tautology()) return;
        if (seen.insert(c).second) {
            if (seen.size() > cap)
                throw CapExceeded("resolution closure exceeded " + std::to_string(cap) +
                                  " clauses");
            all.push_back(std::move(c));
        }
    };
    for (auto& c : clauses) push(std::move(c));

    while (head < all.size()) {
        const std::size_t cur = head++;
        const KClause a = all[cur];  // copy: push may reallocate
        if (!a.touches_top(v)) continue;
        for (std::size_t j = 0; j < cur; ++j) {
            AtomSet ab = a.pos & all[j].neg & top;
            AtomSet ba = a.neg & all[j].pos & top;
            // two or more clashes only give tautologies
            if (ab.count() + ba.count() != 1) continue;
            std::size_t i = ab.any() ? ab.find_first() : ba.find_first();
            KClause r = resolvent(a, all[j], i);
            push(std::move(r));
        }
    }
    std::sort(all.begin(), all.end());
    return all;
}

std::vector<KClause> zero_restrict(const Vocabulary& v, const std::vector<KClause>& closed) {
    std::vector<KClause> out;
    for (const auto& c : closed) {
        if (c.touches_top(v)) continue;
        out.push_back(resized(v, c, c.level - 1));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

KType extend_type_closed(const Vocabulary& v, int k, const std::vector<KClause>& closed,
                         const KType& t) {
    if (t.level != k - 1) throw Error("extend_type: type level must be k-1");
    for (const auto& c : closed) {
        if (c.touches_top(v)) continue;
        if (!satisfies(t, resized(v, c, k - 1)))
            throw Inconsistent("type violates the restricted closure");
    }
    LiteralSet partial = shift_up(v, t);
    const std::size_t lo = v.prefix(k - 1), hi = v.prefix(k);
    // clauses whose literals are all among atoms < i can be checked once i is decided
    std::vector<std::vector<const KClause*>> by_max(hi);
    for (const auto& c : closed) {
        AtomSet u = c.pos | c.neg;
        std::size_t last = AtomSet::npos;
        for (std::size_t i = u.find_first(); i != AtomSet::npos; i = u.find_next(i)) last = i;
        if (last != AtomSet::npos && last >= lo) by_max[last].push_back(&c);
    }
    for (std::size_t i = lo; i < hi; ++i) {
        bool ok = false;
        for (bool positive : {true, false}) {
            LiteralSet trial = partial;
            (positive ? trial.pos : trial.neg).set(i);
            bool bad = false;
            for (const KClause* c : by_max[i])
                if (violates(trial, *c)) {
                    bad = true;
                    break;
                }
            if (!bad) {
                partial = std::move(trial);
                ok = true;
                break;
            }
        }
        if (!ok) throw InternalInconsistency("extend_type: both polarities violate the closure");
    }
    return KType{k, partial.pos};
}

KType extend_type(const Vocabulary& v, int k, const std::vector<KClause>& clauses, const KType& t) {
    return extend_type_closed(v, k, closure(v, clauses), t);
}

}  // namespace fluted
