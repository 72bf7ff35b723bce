#include "oracles.hpp"

#include <algorithm>
#include <stdexcept>

namespace fluted::oracle {

bool truth(const Structure& s, const Formula& f, std::vector<int>& env) {
    switch (f.op()) {
        case Op::True: return true;
        case Op::False: return false;
        case Op::Atom: {
            std::vector<int> t;
            for (int v : f.args()) t.push_back(env.at(static_cast<std::size_t>(v)));
            return s.holds(f.pred(), t);
        }
        case Op::Not: return !truth(s, f.body(), env);
        case Op::And:
            for (const auto& c : f.children())
                if (!truth(s, c, env)) return false;
            return true;
        case Op::Or:
            for (const auto& c : f.children())
                if (truth(s, c, env)) return true;
            return false;
        case Op::Implies: return !truth(s, f.child(0), env) || truth(s, f.child(1), env);
        case Op::Iff: return truth(s, f.child(0), env) == truth(s, f.child(1), env);
        case Op::Forall:
        case Op::Exists: {
            const auto v = static_cast<std::size_t>(f.var());
            if (env.size() <= v) env.resize(v + 1, -1);
            const int saved = env[v];
            bool all = true, some = false;
            for (int a = 0; a < s.size(); ++a) {
                env[v] = a;
                bool b = truth(s, f.body(), env);
                all = all && b;
                some = some || b;
            }
            env[v] = saved;
            return f.op() == Op::Forall ? all : some;
        }
    }
    throw std::logic_error("unknown connective");
}

bool truth(const Structure& s, const Formula& f) {
    std::vector<int> env(static_cast<std::size_t>(width(f)) + 1, -1);
    return truth(s, f, env);
}

std::optional<std::vector<bool>> brute_force_sat(const Cnf& f) {
    if (f.num_vars > 24) throw std::invalid_argument("too many variables for brute force");
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << f.num_vars); ++m) {
        bool ok = true;
        for (const auto& c : f.clauses) {
            bool sat = false;
            for (int lit : c) {
                bool val = (m >> (std::abs(lit) - 1)) & 1U;
                if ((lit > 0) == val) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok) {
            std::vector<bool> out;
            for (int v = 0; v < f.num_vars; ++v) out.push_back((m >> v) & 1U);
            return out;
        }
    }
    return std::nullopt;
}

bool clause_true(const KClause& c, std::uint64_t assignment) {
    for (std::size_t i = 0; i < c.pos.size(); ++i) {
        bool val = (assignment >> i) & 1U;
        if (c.pos.test(i) && val) return true;
        if (c.neg.test(i) && !val) return true;
    }
    return false;
}

namespace {
bool contains(const LiteralSet& fixed, std::uint64_t assignment) {
    for (std::size_t i = 0; i < fixed.pos.size(); ++i) {
        bool val = (assignment >> i) & 1U;
        if (fixed.pos.test(i) && !val) return false;
        if (fixed.neg.test(i) && val) return false;
    }
    return true;
}
}  // namespace

bool consistent_by_table(const Vocabulary& v, int k, std::span<const KClause> clauses,
                         std::span<const LiteralSet> fixed) {
    const std::size_t atoms = v.prefix(k);
    if (atoms > 22) throw std::invalid_argument("too many atoms for a truth table");
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << atoms); ++m) {
        bool ok = true;
        for (const auto& c : clauses) ok = ok && clause_true(c, m);
        for (const auto& f : fixed) ok = ok && contains(f, m);
        if (ok) return true;
    }
    return false;
}

bool entails_by_table(const Vocabulary& v, int k, std::span<const KClause> premises, const KClause& c) {
    const std::size_t atoms = v.prefix(k);
    if (atoms > 22) throw std::invalid_argument("too many atoms for a truth table");
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << atoms); ++m) {
        bool all = true;
        for (const auto& p : premises) all = all && clause_true(p, m);
        if (all && !clause_true(c, m)) return false;
    }
    return true;
}

std::optional<Structure> brute_force_model(const Formula& f, int n) {
    const auto preds = infer_signature(f).predicates();
    std::vector<std::uint64_t> cells;
    std::uint64_t total_bits = 0;
    for (const auto& p : preds) {
        std::uint64_t c = 1;
        for (int i = 0; i < p.arity; ++i) c *= static_cast<std::uint64_t>(n);
        cells.push_back(c);
        total_bits += c;
    }
    if (total_bits > 22) throw std::invalid_argument("too many cells for brute force");
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << total_bits); ++m) {
        Structure s(n);
        std::uint64_t bit = 0;
        for (std::size_t i = 0; i < preds.size(); ++i) {
            Relation& r = s.declare(preds[i].name, preds[i].arity);
            for (std::uint64_t c = 0; c < cells[i]; ++c, ++bit) r.bits[c] = (m >> bit) & 1U;
        }
        if (truth(s, f)) return s;
    }
    return std::nullopt;
}

KType type_of(const Structure& s, const Vocabulary& v, const std::vector<int>& tuple) {
    const int k = static_cast<int>(tuple.size());
    KType t;
    t.level = k;
    t.truth.resize(v.prefix(k));
    for (std::size_t i = 0; i < v.prefix(k); ++i) {
        const int ar = v.arity(i);
        std::vector<int> args(tuple.end() - ar, tuple.end());
        t.truth[i] = s.holds(v[i].name, args);
    }
    return t;
}

}  // namespace fluted::oracle

namespace fluted::oracle {

namespace {
void collect(const Formula& f, std::vector<Formula>& out) {
    if (f.is_quantifier()) out.push_back(f);
    for (const auto& c : f.children()) collect(c, out);
}
}  // namespace

std::vector<Formula> quantified_subformulas(const Formula& f) {
    std::vector<Formula> out;
    collect(f, out);
    return out;
}

int min_witnesses(const Structure& s, const Formula& q) {
    const int v = q.var();
    const int n = s.size();
    std::vector<int> env(static_cast<std::size_t>(std::max(v, width(q))) + 1, -1);
    int best = 0;
    auto note = [&](int c) {
        if (c > 0 && (best == 0 || c < best)) best = c;
    };
    // odometer over x1..x(v-1)
    std::vector<int> tuple(static_cast<std::size_t>(v - 1), 0);
    for (;;) {
        for (int i = 1; i < v; ++i) env[static_cast<std::size_t>(i)] = tuple[static_cast<std::size_t>(i - 1)];
        int yes = 0;
        for (int a = 0; a < n; ++a) {
            env[static_cast<std::size_t>(v)] = a;
            if (truth(s, q.body(), env)) ++yes;
        }
        note(yes);
        note(n - yes);
        int i = v - 2;
        while (i >= 0 && ++tuple[static_cast<std::size_t>(i)] == n) tuple[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
    }
    return best;
}

}  // namespace fluted::oracle
