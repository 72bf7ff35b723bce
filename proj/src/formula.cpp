#include "fluted/formula.hpp"

#include <algorithm>

namespace fluted {

Signature::Signature(std::initializer_list<Predicate> preds) {
    for (const auto& p : preds) add(p);
}

void Signature::add(const Predicate& p) {
    auto [it, inserted] = arity_.emplace(p.name, p.arity);
    if (!inserted && it->second != p.arity)
        throw ArityConflict("predicate '" + p.name + "' used with arities " +
                            std::to_string(it->second) + " and " + std::to_string(p.arity));
}

void Signature::merge(const Signature& other) {
    for (const auto& [n, a] : other.arity_) add({n, a});
}

std::optional<int> Signature::arity(const std::string& name) const {
    auto it = arity_.find(name);
    if (it == arity_.end()) return std::nullopt;
    return it->second;
}

std::vector<Predicate> Signature::predicates() const {
    std::vector<Predicate> out;
    out.reserve(arity_.size());
    for (const auto& [n, a] : arity_) out.push_back({n, a});
    std::stable_sort(out.begin(), out.end(), predicate_less);
    return out;
}

// ---------------------------------------------------------------------------

Formula::Formula() : Formula(top()) {}

Formula Formula::make(Node n) { return Formula(std::make_shared<const Node>(std::move(n))); }

Formula Formula::top() {
    static const Formula t = make(Node{Op::True, {}, {}, 0, {}});
    return t;
}

Formula Formula::bottom() {
    static const Formula f = make(Node{Op::False, {}, {}, 0, {}});
    return f;
}

Formula Formula::atom(std::string pred, std::vector<int> args) {
    if (pred.empty()) throw Error("empty predicate name");
    for (int a : args)
        if (a < 1) throw Error("variable index must be positive");
    return make(Node{Op::Atom, std::move(pred), std::move(args), 0, {}});
}

Formula Formula::negation(Formula f) { return make(Node{Op::Not, {}, {}, 0, {std::move(f)}}); }

Formula Formula::conjunction(std::vector<Formula> fs) {
    return make(Node{Op::And, {}, {}, 0, std::move(fs)});
}

Formula Formula::disjunction(std::vector<Formula> fs) {
    return make(Node{Op::Or, {}, {}, 0, std::move(fs)});
}

Formula Formula::implies(Formula a, Formula b) {
    return make(Node{Op::Implies, {}, {}, 0, {std::move(a), std::move(b)}});
}

Formula Formula::iff(Formula a, Formula b) {
    return make(Node{Op::Iff, {}, {}, 0, {std::move(a), std::move(b)}});
}

Formula Formula::forall(int var, Formula body) {
    if (var < 1) throw Error("variable index must be positive");
    return make(Node{Op::Forall, {}, {}, var, {std::move(body)}});
}

Formula Formula::exists(int var, Formula body) {
    if (var < 1) throw Error("variable index must be positive");
    return make(Node{Op::Exists, {}, {}, var, {std::move(body)}});
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.op == y.op && x.pred == y.pred && x.args == y.args && x.var == y.var &&
           x.kids == y.kids;
}

// ---------------------------------------------------------------------------

Formula mk_not(const Formula& f) {
    switch (f.op()) {
        case Op::True: return Formula::bottom();
        case Op::False: return Formula::top();
        default: return Formula::negation(f);
    }
}

Formula mk_and(std::vector<Formula> fs) {
    std::vector<Formula> kept;
    for (auto& f : fs) {
        if (f.op() == Op::False) return Formula::bottom();
        if (f.op() == Op::True) continue;
        kept.push_back(std::move(f));
    }
    if (kept.empty()) return Formula::top();
    if (kept.size() == 1) return kept[0];
    return Formula::conjunction(std::move(kept));
}

Formula mk_or(std::vector<Formula> fs) {
    std::vector<Formula> kept;
    for (auto& f : fs) {
        if (f.op() == Op::True) return Formula::top();
        if (f.op() == Op::False) continue;
        kept.push_back(std::move(f));
    }
    if (kept.empty()) return Formula::bottom();
    if (kept.size() == 1) return kept[0];
    return Formula::disjunction(std::move(kept));
}

Formula mk_implies(const Formula& a, const Formula& b) {
    if (a.op() == Op::True) return b;
    if (a.op() == Op::False || b.op() == Op::True) return Formula::top();
    if (b.op() == Op::False) return mk_not(a);
    return Formula::implies(a, b);
}

Formula mk_iff(const Formula& a, const Formula& b) {
    if (a.op() == Op::True) return b;
    if (b.op() == Op::True) return a;
    if (a.op() == Op::False) return mk_not(b);
    if (b.op() == Op::False) return mk_not(a);
    return Formula::iff(a, b);
}

Formula mk_forall(int var, const Formula& body) {
    if (body.op() == Op::True || body.op() == Op::False) return body;
    return Formula::forall(var, body);
}

Formula mk_exists(int var, const Formula& body) {
    if (body.op() == Op::True || body.op() == Op::False) return body;
    return Formula::exists(var, body);
}

// ---------------------------------------------------------------------------

namespace {

void collect_signature(const Formula& f, Signature& sig) {
    if (f.op() == Op::Atom) {
        sig.add({f.pred(), static_cast<int>(f.args().size())});
        return;
    }
    for (const auto& c : f.children()) collect_signature(c, sig);
}

// nullopt level means "belongs to every FL^[k]" (no variables at all)
struct LevelResult {
    bool ok = true;
    std::optional<int> level;
};

std::string child_path(const std::string& path, std::size_t i) {
    return path.empty() ? std::to_string(i) : path + "." + std::to_string(i);
}

LevelResult check(const Formula& f, const std::string& path, std::vector<Violation>& out) {
    switch (f.op()) {
        case Op::True:
        case Op::False: return {true, std::nullopt};
        case Op::Atom: {
            const auto& a = f.args();
            if (a.empty()) return {true, std::nullopt};
            for (std::size_t i = 1; i < a.size(); ++i) {
                if (a[i] != a[i - 1] + 1) {
                    out.push_back({path, "arguments of '" + f.pred() +
                                             "' are not a contiguous ascending run"});
                    return {false, std::nullopt};
                }
            }
            return {true, a.back()};
        }
        case Op::Forall:
        case Op::Exists: {
            LevelResult b = check(f.body(), child_path(path, 0), out);
            if (!b.ok) return b;
            if (b.level && *b.level != f.var()) {
                out.push_back({path, "quantifier binds x" + std::to_string(f.var()) +
                                         " but its body is at level " +
                                         std::to_string(*b.level)});
                return {false, std::nullopt};
            }
            return {true, f.var() - 1};
        }
        default: {
            std::optional<int> level;
            bool ok = true;
            for (std::size_t i = 0; i < f.children().size(); ++i) {
                LevelResult c = check(f.child(i), child_path(path, i), out);
                if (!c.ok) {
                    ok = false;
                    continue;
                }
                if (!c.level) continue;
                if (level && *level != *c.level) {
                    out.push_back({path, "connective mixes levels " + std::to_string(*level) +
                                             " and " + std::to_string(*c.level)});
                    ok = false;
                    continue;
                }
                level = c.level;
            }
            return {ok, ok ? level : std::nullopt};
        }
    }
}

void collect_free(const Formula& f, std::set<int>& out, std::multiset<int>& bound) {
    switch (f.op()) {
        case Op::Atom:
            for (int v : f.args())
                if (!bound.count(v)) out.insert(v);
            return;
        case Op::Forall:
        case Op::Exists: {
            auto it = bound.insert(f.var());
            collect_free(f.body(), out, bound);
            bound.erase(it);
            return;
        }
        default:
            for (const auto& c : f.children()) collect_free(c, out, bound);
    }
}

}  // namespace

Signature infer_signature(const Formula& f) {
    Signature sig;
    collect_signature(f, sig);
    return sig;
}

FlutedReport fluted_status(const Formula& f) {
    FlutedReport r;
    r.width = width(f);
    LevelResult res = check(f, "", r.violations);
    r.is_fluted = res.ok && r.violations.empty();
    if (r.is_fluted) r.level = res.level.value_or(0);
    return r;
}

int width(const Formula& f) {
    int w = 0;
    if (f.op() == Op::Atom)
        for (int v : f.args()) w = std::max(w, v);
    if (f.is_quantifier()) w = std::max(w, f.var());
    for (const auto& c : f.children()) w = std::max(w, width(c));
    return w;
}

std::set<int> free_variables(const Formula& f) {
    std::set<int> out;
    std::multiset<int> bound;
    collect_free(f, out, bound);
    return out;
}

std::size_t formula_size(const Formula& f) {
    std::size_t n = 1;
    for (const auto& c : f.children()) n += formula_size(c);
    return n;
}

}  // namespace fluted
