#include "fluted/model.hpp"

#include <algorithm>
#include <unordered_map>

#include "fluted/sat.hpp"

namespace fluted {

struct Evaluator::Node {
    Op op = Op::True;
    const Relation* rel = nullptr;
    std::vector<int> args;
    int var = 0;
    std::vector<std::unique_ptr<Node>> kids;
};

Evaluator::Evaluator(const Structure& s, const Formula& f) : s_(s), width_(width(f)) {
    struct Builder {
        const Structure& s;
        std::unique_ptr<Node> operator()(const Formula& f) const {
            auto n = std::make_unique<Node>();
            n->op = f.op();
            if (f.op() == Op::Atom) {
                n->rel = s.relation(f.pred());
                if (n->rel && n->rel->arity != static_cast<int>(f.args().size()))
                    throw ArityConflict("structure interprets '" + f.pred() +
                                        "' with another arity");
                n->args = f.args();
            }
            n->var = f.var();
            for (const auto& c : f.children()) n->kids.push_back((*this)(c));
            return n;
        }
    };
    root_ = Builder{s}(f);
}

Evaluator::~Evaluator() = default;

namespace {

bool eval_node(const Evaluator::Node& n, std::vector<int>& env, std::uint64_t N) {
    switch (n.op) {
        case Op::True: return true;
        case Op::False: return false;
        case Op::Atom: {
            std::uint64_t idx = 0;
            for (int a : n.args) {
                int val = env[static_cast<std::size_t>(a)];
                if (val < 0) throw UnboundVariable("x" + std::to_string(a) + " has no value");
                idx = idx * N + static_cast<std::uint64_t>(val);
            }
            return n.rel && n.rel->bits[idx] != 0;
        }
        case Op::Not: return !eval_node(*n.kids[0], env, N);
        case Op::And:
            for (const auto& k : n.kids)
                if (!eval_node(*k, env, N)) return false;
            return true;
        case Op::Or:
            for (const auto& k : n.kids)
                if (eval_node(*k, env, N)) return true;
            return false;
        case Op::Implies: return !eval_node(*n.kids[0], env, N) || eval_node(*n.kids[1], env, N);
        case Op::Iff: return eval_node(*n.kids[0], env, N) == eval_node(*n.kids[1], env, N);
        case Op::Forall:
        case Op::Exists: {
            const bool all = n.op == Op::Forall;
            int saved = env[static_cast<std::size_t>(n.var)];
            bool result = all;
            for (std::uint64_t d = 0; d < N; ++d) {
                env[static_cast<std::size_t>(n.var)] = static_cast<int>(d);
                if (eval_node(*n.kids[0], env, N) != all) {
                    result = !all;
                    break;
                }
            }
            env[static_cast<std::size_t>(n.var)] = saved;
            return result;
        }
    }
    return false;
}

}  // namespace

bool Evaluator::operator()(std::vector<int>& env) const {
    if (env.size() < static_cast<std::size_t>(width_) + 1)
        env.resize(static_cast<std::size_t>(width_) + 1, -1);
    return eval_node(*root_, env, static_cast<std::uint64_t>(s_.size()));
}

bool Evaluator::operator()() const {
    std::vector<int> env(static_cast<std::size_t>(width_) + 1, -1);
    return (*this)(env);
}

bool evaluate(const Structure& s, const Formula& f, std::vector<int> env) {
    Evaluator e(s, f);
    return e(env);
}

KType ftp(const Structure& s, const Vocabulary& v, std::span<const int> tuple) {
    const int k = static_cast<int>(tuple.size());
    KType t{k, AtomSet(v.prefix(k))};
    for (std::size_t i = 0; i < t.truth.size(); ++i) {
        int ar = v.arity(i);
        if (s.holds(v[i].name, tuple.subspan(static_cast<std::size_t>(k - ar))))
            t.truth.set(i);
    }
    return t;
}

Structure multiply(const Structure& s, int z) {
    if (z < 1) throw Error("multiply needs z >= 1");
    const std::uint64_t n = static_cast<std::uint64_t>(s.size());
    const std::uint64_t big = n * static_cast<std::uint64_t>(z);
    Structure out(static_cast<int>(big));
    for (const auto& [name, rel] : s.relations()) {
        Relation& r = out.declare(name, rel.arity);
        for (std::uint64_t idx = 0; idx < r.bits.size(); ++idx) {
            // digits of idx in base big, reduced mod n, re-packed in base n
            std::uint64_t rest = idx, base_idx = 0, scale = 1;
            for (int i = 0; i < rel.arity; ++i) {
                base_idx += ((rest % big) % n) * scale;
                rest /= big;
                scale *= n;
            }
            r.bits[idx] = rel.bits[base_idx];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Grounding

namespace {

struct KeyHash {
    std::size_t operator()(const std::pair<const void*, std::uint64_t>& k) const {
        return std::hash<const void*>()(k.first) ^ (k.second * 0x9e3779b97f4a7c15ULL);
    }
};

class Grounder {
public:
    Grounder(const Formula& f, int n, std::size_t clause_cap)
        : root_(f), n_(n), cap_(clause_cap), sig_(infer_signature(f)) {
        truth_ = cnf_.new_var();
        cnf_.add({truth_});
        collect_free(f);
        for (const auto& p : sig_.predicates()) {
            std::uint64_t cells = 1;
            for (int i = 0; i < p.arity; ++i) {
                cells *= static_cast<std::uint64_t>(n);
                if (cells > Structure::kMaxCells)
                    throw CapExceeded("grounding '" + p.name + "' at size " + std::to_string(n));
            }
            atoms_[p.name].assign(cells, 0);
        }
    }

    std::optional<Structure> run() {
        std::vector<int> env(static_cast<std::size_t>(width(root_)) + 1, -1);
        assert_true(root_, env);
        auto a = solve(cnf_);
        if (!a) return std::nullopt;
        Structure s(n_);
        for (const auto& p : sig_.predicates()) {
            Relation& r = s.declare(p.name, p.arity);
            const auto& vars = atoms_[p.name];
            for (std::size_t i = 0; i < vars.size(); ++i)
                if (vars[i] && (*a)[vars[i]]) r.bits[i] = 1;
        }
        return s;
    }

private:
    using Key = std::pair<const void*, std::uint64_t>;

    const std::vector<int>& collect_free(const Formula& f) {
        auto it = free_.find(f.id());
        if (it != free_.end()) return it->second;
        std::vector<int> fv;
        if (f.op() == Op::Atom) {
            fv = f.args();
        } else {
            for (const auto& c : f.children()) {
                const auto& cf = collect_free(c);
                fv.insert(fv.end(), cf.begin(), cf.end());
            }
            if (f.is_quantifier()) fv.erase(std::remove(fv.begin(), fv.end(), f.var()), fv.end());
        }
        std::sort(fv.begin(), fv.end());
        fv.erase(std::unique(fv.begin(), fv.end()), fv.end());
        return free_.emplace(f.id(), std::move(fv)).first->second;
    }

    void add_clause(std::vector<int> c) {
        if (cnf_.clauses.size() >= cap_)
            throw CapExceeded("ground CNF exceeds " + std::to_string(cap_) + " clauses");
        cnf_.clauses.push_back(std::move(c));
    }

    int atom_var(const Formula& f, const std::vector<int>& env) {
        std::uint64_t idx = 0;
        for (int a : f.args()) {
            int val = env[static_cast<std::size_t>(a)];
            if (val < 0) throw UnboundVariable("x" + std::to_string(a) + " is free in the sentence");
            idx = idx * static_cast<std::uint64_t>(n_) + static_cast<std::uint64_t>(val);
        }
        int& v = atoms_[f.pred()][idx];
        if (!v) v = cnf_.new_var();
        return v;
    }

    bool is_true(int l) const { return l == truth_; }
    bool is_false(int l) const { return l == -truth_; }

    // fresh g with g <-> (all lits), or g <-> (any lit) when disjunctive
    int define(std::vector<int> lits, bool conj) {
        std::vector<int> kept;
        for (int l : lits) {
            if (conj ? is_false(l) : is_true(l)) return conj ? -truth_ : truth_;
            if (conj ? is_true(l) : is_false(l)) continue;
            kept.push_back(l);
        }
        if (kept.empty()) return conj ? truth_ : -truth_;
        if (kept.size() == 1) return kept[0];
        int g = cnf_.new_var();
        std::vector<int> big{conj ? g : -g};
        for (int l : kept) {
            add_clause(conj ? std::vector<int>{-g, l} : std::vector<int>{g, -l});
            big.push_back(conj ? -l : l);
        }
        add_clause(std::move(big));
        return g;
    }

    int encode(const Formula& f, std::vector<int>& env) {
        switch (f.op()) {
            case Op::True: return truth_;
            case Op::False: return -truth_;
            case Op::Atom: return atom_var(f, env);
            case Op::Not: return -encode(f.body(), env);
            default: break;
        }
        const auto& fv = free_.at(f.id());
        std::uint64_t code = 0;
        for (int v : fv) {
            int val = env[static_cast<std::size_t>(v)];
            if (val < 0) throw UnboundVariable("x" + std::to_string(v) + " is free in the sentence");
            code = code * static_cast<std::uint64_t>(n_) + static_cast<std::uint64_t>(val);
        }
        Key key{f.id(), code};
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;

        int lit = 0;
        switch (f.op()) {
            case Op::And:
            case Op::Or: {
                std::vector<int> lits;
                for (const auto& c : f.children()) lits.push_back(encode(c, env));
                lit = define(std::move(lits), f.op() == Op::And);
                break;
            }
            case Op::Implies:
                lit = define({-encode(f.child(0), env), encode(f.child(1), env)}, false);
                break;
            case Op::Iff: {
                int a = encode(f.child(0), env), b = encode(f.child(1), env);
                if (is_true(a)) lit = b;
                else if (is_false(a)) lit = -b;
                else if (is_true(b)) lit = a;
                else if (is_false(b)) lit = -a;
                else {
                    int g = cnf_.new_var();
                    add_clause({-g, -a, b});
                    add_clause({-g, a, -b});
                    add_clause({g, a, b});
                    add_clause({g, -a, -b});
                    lit = g;
                }
                break;
            }
            case Op::Forall:
            case Op::Exists: {
                std::vector<int> lits;
                auto& slot = env[static_cast<std::size_t>(f.var())];
                int saved = slot;
                for (int d = 0; d < n_; ++d) {
                    slot = d;
                    lits.push_back(encode(f.body(), env));
                }
                slot = saved;
                lit = define(std::move(lits), f.op() == Op::Forall);
                break;
            }
            default: break;
        }
        cache_.emplace(key, lit);
        return lit;
    }

    // top-level conjunctions and universal prefixes are asserted without definitions
    void assert_true(const Formula& f, std::vector<int>& env) {
        switch (f.op()) {
            case Op::True: return;
            case Op::And:
                for (const auto& c : f.children()) assert_true(c, env);
                return;
            case Op::Forall: {
                auto& slot = env[static_cast<std::size_t>(f.var())];
                int saved = slot;
                for (int d = 0; d < n_; ++d) {
                    slot = d;
                    assert_true(f.body(), env);
                }
                slot = saved;
                return;
            }
            case Op::Or:
            case Op::Implies: {
                std::vector<int> c;
                if (f.op() == Op::Or) {
                    for (const auto& k : f.children()) c.push_back(encode(k, env));
                } else {
                    c = {-encode(f.child(0), env), encode(f.child(1), env)};
                }
                std::vector<int> kept;
                for (int l : c) {
                    if (is_true(l)) return;
                    if (!is_false(l)) kept.push_back(l);
                }
                add_clause(std::move(kept));
                return;
            }
            default: {
                int l = encode(f, env);
                if (is_true(l)) return;
                add_clause({l});
            }
        }
    }

    Formula root_;
    int n_;
    std::size_t cap_;
    Signature sig_;
    Cnf cnf_;
    int truth_ = 0;
    std::unordered_map<const void*, std::vector<int>> free_;
    std::map<std::string, std::vector<int>> atoms_;
    std::unordered_map<Key, int, KeyHash> cache_;
};

}  // namespace

std::optional<Structure> find_model_of_size(const Formula& f, int n, const SearchLimits& lim) {
    if (n < 1) throw Error("domain size must be positive");
    if (n > lim.domain_cap)
        throw CapExceeded("domain size " + std::to_string(n) + " exceeds cap " +
                          std::to_string(lim.domain_cap));
    auto m = Grounder(f, n, lim.clause_cap).run();
    if (m && !evaluate(*m, f))
        throw InternalInconsistency("decoded ground model does not satisfy the sentence");
    return m;
}

ModelSearch find_model_upto(const Formula& f, int n_max, const SearchLimits& lim, int first) {
    if (n_max > lim.domain_cap)
        throw CapExceeded("search bound " + std::to_string(n_max) + " exceeds domain cap " +
                          std::to_string(lim.domain_cap));
    ModelSearch r;
    for (int n = std::max(first, 1); n <= n_max; ++n) {
        r.searched_upto = n;
        if (auto m = find_model_of_size(f, n, lim)) {
            r.model = std::move(m);
            return r;
        }
    }
    return r;
}

}  // namespace fluted
