#include "fluted/normal_form.hpp"

#include <algorithm>

#include "fluted/text_io.hpp"

namespace fluted {

namespace {

Formula forall_block(int from, int to, Formula body) {
    for (int v = to; v >= from; --v) body = Formula::forall(v, body);
    return body;
}

Formula guard_atom(const Vocabulary& v, std::size_t g, int level) {
    return atom_formula(v, g, level);
}

Formula clause_conjunction(const Vocabulary& v, const std::vector<KClause>& cs) {
    std::vector<Formula> parts;
    for (const auto& c : cs) parts.push_back(clause_formula(v, c));
    return mk_and(std::move(parts));
}

}  // namespace

std::vector<Formula> conjuncts(const NormalForm& nf) {
    std::vector<Formula> out;
    const int k = nf.k;
    if (!nf.statics.empty()) out.push_back(forall_block(1, k, clause_conjunction(nf.vocab, nf.statics)));
    for (const auto& e : nf.existentials) {
        Formula body = Formula::implies(guard_atom(nf.vocab, e.guard, k - 1),
                                        Formula::exists(k, clause_conjunction(nf.vocab, e.body)));
        out.push_back(forall_block(1, k - 1, body));
    }
    for (const auto& u : nf.universals) {
        Formula body = Formula::implies(guard_atom(nf.vocab, u.guard, k - 1),
                                        Formula::forall(k, clause_formula(nf.vocab, u.body)));
        out.push_back(forall_block(1, k - 1, body));
    }
    return out;
}

Formula to_formula(const NormalForm& nf) { return mk_and(conjuncts(nf)); }

std::string render_normal_form(const NormalForm& nf) {
    auto cs = conjuncts(nf);
    if (cs.empty()) return "true\n";
    std::string out;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i) out += "& ";
        out += render_formula(cs[i]);
        out += '\n';
    }
    return out;
}

KClause remap(const Vocabulary& from, const Vocabulary& to, const KClause& c, int level) {
    KClause r(to, level);
    for (std::size_t i = c.pos.find_first(); i != AtomSet::npos; i = c.pos.find_next(i))
        r.pos.set(to.at(from[i].name));
    for (std::size_t i = c.neg.find_first(); i != AtomSet::npos; i = c.neg.find_next(i))
        r.neg.set(to.at(from[i].name));
    return r;
}

NormalForm pad_to(const NormalForm& nf, int k) {
    if (k < nf.k) throw Error("pad_to cannot lower the level");
    NormalForm r = nf;
    r.k = k;
    auto lift = [&](KClause& c) { c = resized(nf.vocab, c, k); };
    for (auto& c : r.statics) lift(c);
    for (auto& e : r.existentials)
        for (auto& c : e.body) lift(c);
    for (auto& u : r.universals) lift(u.body);
    return r;
}

bool proposition_free(const NormalForm& nf) { return nf.vocab.prefix(0) == 0; }

// ---------------------------------------------------------------------------

namespace {

using SymLit = std::pair<std::string, bool>;
using SymClause = std::vector<SymLit>;

// Products of disjunct CNFs above this size get their composite parts named.
constexpr std::size_t kDistributeLimit = 32;

class Normalizer {
public:
    explicit Normalizer(const Formula& f) : sig_(infer_signature(f)) {}

    NormalForm run(const Formula& f, int k) {
        k_ = k;
        collect_top(nnf(f, true), 0);

        NormalForm nf;
        nf.k = k;
        nf.vocab = Vocabulary(sig_);
        for (const auto& c : statics_)
            if (auto kc = convert(nf.vocab, c)) nf.statics.push_back(*kc);
        canonical(nf.statics);
        for (const auto& e : ex_) {
            ExistentialConjunct x{nf.vocab.at(e.guard), {}};
            for (const auto& c : e.body)
                if (auto kc = convert(nf.vocab, c)) x.body.push_back(*kc);
            canonical(x.body);
            nf.existentials.push_back(std::move(x));
        }
        for (const auto& u : un_)
            if (auto kc = convert(nf.vocab, u.body))
                nf.universals.push_back({nf.vocab.at(u.guard), *kc});
        return nf;
    }

private:
    struct SymEx {
        std::string guard;
        std::vector<SymClause> body;
    };
    struct SymUn {
        std::string guard;
        SymClause body;
    };

    static void canonical(std::vector<KClause>& cs) {
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    }

    std::optional<KClause> convert(const Vocabulary& v, const SymClause& c) const {
        KClause r(v, k_);
        for (const auto& [name, positive] : c) (positive ? r.pos : r.neg).set(v.at(name));
        if (r.tautology()) return std::nullopt;
        return r;
    }

    std::string fresh(const char* kind, int arity) {
        std::string name;
        do {
            name = std::string(1, kFreshPrefix) + kind + std::to_string(++counter_);
        } while (sig_.contains(name));
        sig_.add({name, arity});
        return name;
    }

    static Formula nnf(const Formula& f, bool pos) {
        switch (f.op()) {
            case Op::True: return pos ? f : Formula::bottom();
            case Op::False: return pos ? f : Formula::top();
            case Op::Atom: return pos ? f : Formula::negation(f);
            case Op::Not: return nnf(f.body(), !pos);
            case Op::And:
            case Op::Or: {
                std::vector<Formula> kids;
                for (const auto& c : f.children()) kids.push_back(nnf(c, pos));
                bool conj = (f.op() == Op::And) == pos;
                return conj ? Formula::conjunction(std::move(kids))
                            : Formula::disjunction(std::move(kids));
            }
            case Op::Implies:
                if (pos) return Formula::disjunction({nnf(f.child(0), false), nnf(f.child(1), true)});
                return Formula::conjunction({nnf(f.child(0), true), nnf(f.child(1), false)});
            case Op::Iff: {
                const Formula& a = f.child(0);
                const Formula& b = f.child(1);
                if (pos)
                    return Formula::conjunction(
                        {Formula::disjunction({nnf(a, false), nnf(b, true)}),
                         Formula::disjunction({nnf(a, true), nnf(b, false)})});
                return Formula::disjunction({Formula::conjunction({nnf(a, true), nnf(b, false)}),
                                             Formula::conjunction({nnf(a, false), nnf(b, true)})});
            }
            case Op::Forall:
            case Op::Exists: {
                bool all = (f.op() == Op::Forall) == pos;
                Formula body = nnf(f.body(), pos);
                return all ? Formula::forall(f.var(), body) : Formula::exists(f.var(), body);
            }
        }
        return f;
    }

    void collect_top(const Formula& f, int d) {
        switch (f.op()) {
            case Op::True: return;
            case Op::And:
                for (const auto& c : f.children()) collect_top(c, d);
                return;
            case Op::Forall:
                collect_top(f.body(), d + 1);
                return;
            default:
                for (auto& c : cnf(abstract(f, d), d)) statics_.push_back(std::move(c));
        }
    }

    // arity of a fluted atom at level d whose arguments cover the formula's variables
    static int suffix_arity(const Formula& f, int d) {
        auto fv = free_variables(f);
        if (fv.empty()) return 0;
        return d - *fv.begin() + 1;
    }

    Formula abstract(const Formula& f, int d) {
        switch (f.op()) {
            case Op::And:
            case Op::Or: {
                std::vector<Formula> kids;
                for (const auto& c : f.children()) kids.push_back(abstract(c, d));
                return f.op() == Op::And ? Formula::conjunction(std::move(kids))
                                         : Formula::disjunction(std::move(kids));
            }
            case Op::Exists: {
                auto body = cnf(abstract(f.body(), d + 1), d + 1);
                if (body.empty()) return Formula::top();
                int ar = suffix_arity(f, d);
                std::string g = fresh("e", ar);
                ex_.push_back({g, std::move(body)});
                return guard(g, ar, d);
            }
            case Op::Forall: {
                auto body = cnf(abstract(f.body(), d + 1), d + 1);
                if (body.empty()) return Formula::top();
                int ar = suffix_arity(f, d);
                std::string g = fresh("a", ar);
                for (auto& c : body) un_.push_back({g, std::move(c)});
                return guard(g, ar, d);
            }
            default: return f;
        }
    }

    static Formula guard(const std::string& name, int arity, int d) {
        std::vector<int> args;
        for (int i = d - arity + 1; i <= d; ++i) args.push_back(i);
        return Formula::atom(name, std::move(args));
    }

    std::vector<SymClause> cnf(const Formula& f, int d) {
        switch (f.op()) {
            case Op::True: return {};
            case Op::False: return {SymClause{}};
            case Op::Atom: return {SymClause{{f.pred(), true}}};
            case Op::Not: return {SymClause{{f.body().pred(), false}}};
            case Op::And: {
                std::vector<SymClause> out;
                for (const auto& c : f.children()) {
                    auto part = cnf(c, d);
                    out.insert(out.end(), part.begin(), part.end());
                }
                return out;
            }
            case Op::Or: {
                std::vector<std::vector<SymClause>> parts;
                std::size_t product = 1;
                for (const auto& c : f.children()) {
                    auto part = cnf(c, d);
                    if (part.empty()) return {};
                    product = std::min<std::size_t>(product * part.size(), kDistributeLimit + 1);
                    parts.push_back(std::move(part));
                }
                if (product > kDistributeLimit) {
                    for (std::size_t i = 0; i < parts.size(); ++i) {
                        if (parts[i].size() < 2) continue;
                        int ar = suffix_arity(f.child(i), d);
                        std::string e = fresh("d", ar);
                        for (auto c : parts[i]) {
                            c.push_back({e, false});
                            statics_.push_back(std::move(c));
                        }
                        parts[i] = {SymClause{{e, true}}};
                    }
                }
                std::vector<SymClause> acc{SymClause{}};
                for (const auto& part : parts) {
                    std::vector<SymClause> next;
                    for (const auto& a : acc)
                        for (const auto& c : part) {
                            SymClause u = a;
                            u.insert(u.end(), c.begin(), c.end());
                            next.push_back(std::move(u));
                        }
                    acc = std::move(next);
                }
                return acc;
            }
            default: throw Error("cnf: formula is not quantifier-free negation normal form");
        }
    }

    Signature sig_;
    int k_ = 1;
    int counter_ = 0;
    std::vector<SymClause> statics_;
    std::vector<SymEx> ex_;
    std::vector<SymUn> un_;
};

}  // namespace

NormalForm normalize(const Formula& f) {
    FlutedReport r = fluted_status(f);
    if (!r.is_fluted) {
        std::string why = r.violations.empty() ? "" : ": " + r.violations.front().reason;
        throw NotFluted("input is not fluted" + why);
    }
    if (*r.level != 0) throw NotFluted("input has free variables");
    if (r.width == 0) throw WidthZero("propositional input has no normal form");
    return Normalizer(f).run(f, r.width);
}

// ---------------------------------------------------------------------------

std::vector<PropositionBranch> eliminate_propositions(const NormalForm& nf) {
    const std::size_t p = nf.vocab.prefix(0);
    if (p == 0) return {PropositionBranch{{}, nf}};
    if (p > 20) throw CapExceeded(std::to_string(p) + " propositions to case-split");

    Signature base;
    for (std::size_t i = p; i < nf.vocab.size(); ++i) base.add(nf.vocab[i]);
    std::string top = std::string(1, kFreshPrefix) + "top";
    for (int n = 1; nf.vocab.index(top); ++n) top = std::string(1, kFreshPrefix) + "top" + std::to_string(n);

    std::vector<PropositionBranch> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p); ++mask) {
        auto value = [&](std::size_t i) { return ((mask >> i) & 1U) != 0; };

        bool need_top = false;
        for (const auto& e : nf.existentials)
            if (e.guard < p && value(e.guard)) need_top = true;

        Signature sig = base;
        if (need_top) sig.add({top, 1});
        NormalForm r;
        r.k = need_top ? std::max(nf.k, 2) : nf.k;
        r.vocab = Vocabulary(sig);

        // nullopt when satisfied by the assignment
        auto simplify = [&](const KClause& c) -> std::optional<KClause> {
            for (std::size_t i = 0; i < p; ++i)
                if ((c.pos.test(i) && value(i)) || (c.neg.test(i) && !value(i))) return std::nullopt;
            KClause stripped = c;
            for (std::size_t i = 0; i < p; ++i) {
                stripped.pos.reset(i);
                stripped.neg.reset(i);
            }
            return remap(nf.vocab, r.vocab, stripped, r.k);
        };

        for (const auto& c : nf.statics)
            if (auto s = simplify(c)) r.statics.push_back(*s);
        for (const auto& e : nf.existentials) {
            std::size_t g;
            if (e.guard < p) {
                if (!value(e.guard)) continue;
                g = r.vocab.at(top);
            } else {
                g = r.vocab.at(nf.vocab[e.guard].name);
            }
            ExistentialConjunct x{g, {}};
            for (const auto& c : e.body)
                if (auto s = simplify(c)) x.body.push_back(*s);
            std::sort(x.body.begin(), x.body.end());
            x.body.erase(std::unique(x.body.begin(), x.body.end()), x.body.end());
            r.existentials.push_back(std::move(x));
        }
        for (const auto& u : nf.universals) {
            auto s = simplify(u.body);
            if (!s) continue;
            if (u.guard < p) {
                if (value(u.guard)) r.statics.push_back(*s);
                continue;
            }
            r.universals.push_back({r.vocab.at(nf.vocab[u.guard].name), *s});
        }
        if (need_top) {
            KClause unit(r.vocab, r.k);
            unit.pos.set(r.vocab.at(top));
            r.statics.push_back(unit);
        }
        std::sort(r.statics.begin(), r.statics.end());
        r.statics.erase(std::unique(r.statics.begin(), r.statics.end()), r.statics.end());

        PropositionBranch b;
        for (std::size_t i = 0; i < p; ++i) b.assignment[nf.vocab[i].name] = value(i);
        b.nf = std::move(r);
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace fluted
