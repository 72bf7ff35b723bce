#include "fluted/types.hpp"

#include <algorithm>

#include "fluted/sat.hpp"

namespace fluted {

Vocabulary::Vocabulary(const Signature& sig) : preds_(sig.predicates()) {
    for (std::size_t i = 0; i < preds_.size(); ++i) index_[preds_[i].name] = i;
}

std::optional<std::size_t> Vocabulary::index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Vocabulary::at(const std::string& name) const {
    auto i = index(name);
    if (!i) throw Error("predicate '" + name + "' not in vocabulary");
    return *i;
}

std::size_t Vocabulary::prefix(int k) const {
    std::size_t n = 0;
    while (n < preds_.size() && preds_[n].arity <= k) ++n;
    return n;
}

Signature Vocabulary::signature() const {
    Signature s;
    for (const auto& p : preds_) s.add(p);
    return s;
}

LiteralSet::LiteralSet(const Vocabulary& v, int k)
    : level(k), pos(v.prefix(k)), neg(v.prefix(k)) {}

bool LiteralSet::touches_top(const Vocabulary& v) const {
    for (std::size_t i = v.prefix(level - 1); i < pos.size(); ++i)
        if (pos.test(i) || neg.test(i)) return true;
    return false;
}

bool LiteralSet::operator<(const LiteralSet& o) const {
    if (level != o.level) return level < o.level;
    if (pos.size() != o.pos.size()) return pos.size() < o.pos.size();
    if (pos != o.pos) return pos < o.pos;
    return neg < o.neg;
}

bool KType::operator<(const KType& o) const {
    if (level != o.level) return level < o.level;
    if (truth.size() != o.truth.size()) return truth.size() < o.truth.size();
    return truth < o.truth;
}

std::size_t LiteralSetHash::operator()(const LiteralSet& s) const {
    std::size_t h = std::hash<AtomSet>()(s.pos);
    h ^= std::hash<AtomSet>()(s.neg) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h ^ static_cast<std::size_t>(s.level);
}

std::size_t KTypeHash::operator()(const KType& t) const {
    return std::hash<AtomSet>()(t.truth) ^ static_cast<std::size_t>(t.level);
}

Formula atom_formula(const Vocabulary& v, std::size_t atom, int level) {
    int ar = v.arity(atom);
    std::vector<int> args;
    for (int i = level - ar + 1; i <= level; ++i) args.push_back(i);
    return Formula::atom(v[atom].name, std::move(args));
}

std::vector<Formula> enumerate_fluted_atoms(const Vocabulary& v, int k) {
    std::vector<Formula> out;
    for (std::size_t i = 0; i < v.prefix(k); ++i) out.push_back(atom_formula(v, i, k));
    return out;
}

namespace {
std::vector<Formula> literal_formulas(const Vocabulary& v, const LiteralSet& s) {
    std::vector<Formula> lits;
    for (std::size_t i = 0; i < s.pos.size(); ++i) {
        if (s.pos.test(i)) lits.push_back(atom_formula(v, i, s.level));
        if (s.neg.test(i)) lits.push_back(Formula::negation(atom_formula(v, i, s.level)));
    }
    return lits;
}
}  // namespace

Formula clause_formula(const Vocabulary& v, const KClause& c) {
    return mk_or(literal_formulas(v, c));
}

Formula literals_formula(const Vocabulary& v, const LiteralSet& s) {
    return mk_and(literal_formulas(v, s));
}

KClause make_clause(const Vocabulary& v, int k,
                    std::initializer_list<std::pair<const char*, bool>> lits) {
    KClause c(v, k);
    for (const auto& [name, positive] : lits) {
        std::size_t i = v.at(name);
        if (i >= c.pos.size()) throw Error(std::string("predicate '") + name + "' above level");
        (positive ? c.pos : c.neg).set(i);
    }
    return c;
}

KType type_from_index(const Vocabulary& v, int k, std::uint64_t index) {
    KType t{k, AtomSet(v.prefix(k))};
    for (std::size_t i = 0; i < t.truth.size(); ++i)
        if ((index >> i) & 1U) t.truth.set(i);
    return t;
}

std::uint64_t type_index(const KType& t) {
    if (t.truth.size() > 63) throw CapExceeded("type too wide to index");
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < t.truth.size(); ++i)
        if (t.truth.test(i)) x |= std::uint64_t{1} << i;
    return x;
}

std::vector<KType> enumerate_k_types(const Vocabulary& v, int k, std::size_t cap) {
    std::size_t n = v.prefix(k);
    if (n > cap || n > 62)
        throw CapExceeded(std::to_string(n) + " atoms exceed the type enumeration cap " +
                          std::to_string(cap));
    std::vector<KType> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << n); ++t) out.push_back(type_from_index(v, k, t));
    return out;
}

std::vector<KClause> enumerate_k_clauses(const Vocabulary& v, int k, std::size_t cap) {
    std::size_t n = v.prefix(k);
    if (n > cap)
        throw CapExceeded(std::to_string(n) + " atoms exceed the clause enumeration cap " +
                          std::to_string(cap));
    std::vector<KClause> out;
    const std::uint64_t total = std::uint64_t{1} << (2 * n);
    out.reserve(total);
    for (std::uint64_t x = 0; x < total; ++x) {
        KClause c(v, k);
        for (std::size_t i = 0; i < n; ++i) {
            if ((x >> (2 * i)) & 1U) c.pos.set(i);
            if ((x >> (2 * i + 1)) & 1U) c.neg.set(i);
        }
        out.push_back(std::move(c));
    }
    return out;
}

LiteralSet as_literals(const KType& t) {
    LiteralSet s;
    s.level = t.level;
    s.pos = t.truth;
    s.neg = ~t.truth;
    return s;
}

LiteralSet shift_up(const Vocabulary& v, const KType& t) {
    LiteralSet s(v, t.level + 1);
    for (std::size_t i = 0; i < t.truth.size(); ++i) (t.truth.test(i) ? s.pos : s.neg).set(i);
    return s;
}

KType drop_first(const Vocabulary& v, const KType& t) {
    if (t.level < 2) throw LevelTooLow("drop_first needs a type of level at least 2");
    KType r{t.level - 1, t.truth};
    r.truth.resize(v.prefix(t.level - 1));
    return r;
}

bool satisfies(const KType& t, const KClause& c) {
    if (c.pos.intersects(t.truth)) return true;
    return !c.neg.is_subset_of(t.truth);
}

bool violates(const LiteralSet& partial, const KClause& c) {
    return c.pos.is_subset_of(partial.neg) && c.neg.is_subset_of(partial.pos);
}

bool contradictory(const LiteralSet& s) { return s.pos.intersects(s.neg); }

LiteralSet resized(const Vocabulary& v, const LiteralSet& s, int level) {
    LiteralSet r = s;
    r.level = level;
    r.pos.resize(v.prefix(level));
    r.neg.resize(v.prefix(level));
    return r;
}

LiteralSet merge(const LiteralSet& a, const LiteralSet& b) {
    LiteralSet r = a;
    r.pos |= b.pos;
    r.neg |= b.neg;
    return r;
}

std::optional<KType> find_consistent(const Vocabulary& v, int k, std::span<const KClause> clauses,
                                     std::span<const LiteralSet> fixed) {
    const std::size_t n = v.prefix(k);
    AtomSet fpos(n), fneg(n);
    for (const auto& f : fixed) {
        LiteralSet g = f.pos.size() == n ? f : resized(v, f, k);
        fpos |= g.pos;
        fneg |= g.neg;
    }
    if (fpos.intersects(fneg)) return std::nullopt;

    Cnf cnf;
    cnf.num_vars = static_cast<int>(n);
    std::vector<int> lits;
    for (const auto& c : clauses) {
        if (c.pos.intersects(fpos) || c.neg.intersects(fneg)) continue;
        lits.clear();
        for (std::size_t i = c.pos.find_first(); i != AtomSet::npos; i = c.pos.find_next(i))
            if (!fneg.test(i)) lits.push_back(static_cast<int>(i) + 1);
        for (std::size_t i = c.neg.find_first(); i != AtomSet::npos; i = c.neg.find_next(i))
            if (!fpos.test(i)) lits.push_back(-static_cast<int>(i) - 1);
        if (lits.empty()) return std::nullopt;
        cnf.clauses.push_back(lits);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (fpos.test(i)) cnf.clauses.push_back({static_cast<int>(i) + 1});
        if (fneg.test(i)) cnf.clauses.push_back({-static_cast<int>(i) - 1});
    }
    auto a = solve(cnf);
    if (!a) return std::nullopt;
    KType t{k, AtomSet(n)};
    for (std::size_t i = 0; i < n; ++i)
        if ((*a)[static_cast<int>(i) + 1]) t.truth.set(i);
    return t;
}

bool consistent(const Vocabulary& v, int k, std::span<const KClause> clauses,
                std::span<const LiteralSet> fixed) {
    return find_consistent(v, k, clauses, fixed).has_value();
}

std::string render_literals(const Vocabulary& v, const LiteralSet& s, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < s.pos.size(); ++i) {
        for (int sign = 0; sign < 2; ++sign) {
            if (!(sign == 0 ? s.pos : s.neg).test(i)) continue;
            if (!out.empty()) out += sep;
            if (sign) out += "~";
            out += v[i].name;
            int ar = v.arity(i);
            if (ar > 0) {
                out += "(";
                for (int j = s.level - ar + 1; j <= s.level; ++j) {
                    if (j > s.level - ar + 1) out += ",";
                    out += "x" + std::to_string(j);
                }
                out += ")";
            }
        }
    }
    return out.empty() ? std::string("false") : out;
}

}  // namespace fluted
