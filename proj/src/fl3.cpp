#include "fluted/fl3.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "fluted/model.hpp"
#include "fluted/sat.hpp"

namespace fluted {

namespace {

void sort_unique(std::vector<KType>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool meets(const std::vector<KType>& a, const std::vector<KType>& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) ++i;
        else if (*j < *i) ++j;
        else return true;
    }
    return false;
}

bool contains(const std::vector<KType>& a, const KType& t) {
    return std::binary_search(a.begin(), a.end(), t);
}

}  // namespace

bool ConnectorType::operator<(const ConnectorType& o) const {
    if (!(pi == o.pi)) return pi < o.pi;
    if (inputs != o.inputs) return inputs < o.inputs;
    return outputs < o.outputs;
}

ConnectorType make_connector(KType pi, std::vector<KType> inputs, std::vector<KType> outputs) {
    sort_unique(inputs);
    sort_unique(outputs);
    return ConnectorType{std::move(pi), std::move(inputs), std::move(outputs)};
}

ConnectorType connector_of(const Structure& s, const Vocabulary& v, int b) {
    std::vector<KType> in, out;
    for (int a = 0; a < s.size(); ++a) {
        in.push_back(ftp(s, v, {a, b}));
        out.push_back(ftp(s, v, {b, a}));
    }
    return make_connector(ftp(s, v, {b}), std::move(in), std::move(out));
}

std::vector<ConnectorType> connectors_of(const Structure& s, const Vocabulary& v) {
    std::vector<ConnectorType> out;
    for (int b = 0; b < s.size(); ++b) out.push_back(connector_of(s, v, b));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool gc_exists(const std::vector<ConnectorType>& d) {
    std::vector<KType> all_in;
    for (const auto& c : d) all_in.insert(all_in.end(), c.inputs.begin(), c.inputs.end());
    sort_unique(all_in);
    for (const auto& c : d)
        for (const auto& t : c.outputs)
            if (!contains(all_in, t)) return false;
    return true;
}

bool gc_forall(const std::vector<ConnectorType>& d) {
    for (const auto& c : d)
        for (const auto& e : d)
            if (!meets(c.outputs, e.inputs)) return false;
    return true;
}

// ---------------------------------------------------------------------------

std::size_t CompatibilityOracle::KeyHash::operator()(const Key& k) const {
    std::size_t h = std::hash<AtomSet>()(k.active);
    h ^= std::hash<AtomSet>()(k.tau2) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h ^ static_cast<std::size_t>(k.existential + 1);
}

CompatibilityOracle::CompatibilityOracle(const NormalForm& nf) {
    if (!proposition_free(nf)) throw Error("connector types need a proposition-free normal form");
    if (nf.k > 3) throw Error("connector types are defined for width at most 3");
    nf_ = nf.k < 3 ? pad_to(nf, 3) : nf;
}

std::vector<std::size_t> CompatibilityOracle::active_universals(const KType& tau) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < nf_.universals.size(); ++j)
        if (tau.holds(nf_.universals[j].guard)) out.push_back(j);
    return out;
}

bool CompatibilityOracle::guard_holds(std::size_t i, const KType& tau) const {
    return tau.holds(nf_.existentials.at(i).guard);
}

std::optional<KType> CompatibilityOracle::three_type(std::optional<std::size_t> existential,
                                                     const KType& tau, const KType& tau2) {
    Key key{existential ? static_cast<long>(*existential) : -1L,
            AtomSet(nf_.universals.size()), tau2.truth};
    for (std::size_t j : active_universals(tau)) key.active.set(j);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    std::vector<KClause> clauses = nf_.statics;
    if (existential) {
        const auto& body = nf_.existentials.at(*existential).body;
        clauses.insert(clauses.end(), body.begin(), body.end());
    }
    for (std::size_t j = key.active.find_first(); j != AtomSet::npos; j = key.active.find_next(j))
        clauses.push_back(nf_.universals[j].body);
    LiteralSet fixed = shift_up(nf_.vocab, tau2);
    ++sat_calls_;
    auto r = find_consistent(nf_.vocab, 3, clauses, std::span<const LiteralSet>(&fixed, 1));
    cache_.emplace(std::move(key), r);
    return r;
}

bool CompatibilityOracle::compatible(std::optional<std::size_t> existential, const KType& tau,
                                     const KType& tau2) {
    return three_type(existential, tau, tau2).has_value();
}

bool locally_compatible(const ConnectorType& c, CompatibilityOracle& oracle) {
    const std::size_t s = oracle.nf().existentials.size();
    for (const auto& tau : c.inputs) {
        for (std::size_t i = 0; i < s; ++i) {
            if (!oracle.guard_holds(i, tau)) continue;
            bool found = false;
            for (const auto& tau2 : c.outputs)
                if (oracle.compatible(i, tau, tau2)) {
                    found = true;
                    break;
                }
            if (!found) return false;
        }
        for (const auto& tau2 : c.outputs)
            if (!oracle.compatible(std::nullopt, tau, tau2)) return false;
    }
    return true;
}

bool locally_compatible(const ConnectorType& c, const NormalForm& nf) {
    CompatibilityOracle o(nf);
    return locally_compatible(c, o);
}

// ---------------------------------------------------------------------------

std::optional<std::vector<ConnectorType>> coherent_subset(const std::vector<ConnectorType>& cands,
                                                          std::size_t cap) {
    if (cands.size() > cap)
        throw CapExceeded(std::to_string(cands.size()) + " candidate connector types exceed cap " +
                          std::to_string(cap));
    if (cands.empty()) return std::nullopt;

    // intern 2-types and the distinct input / output sets
    std::map<KType, int> type_id;
    for (const auto& c : cands) {
        for (const auto& t : c.inputs) type_id.emplace(t, 0);
        for (const auto& t : c.outputs) type_id.emplace(t, 0);
    }
    int next = 0;
    for (auto& [t, id] : type_id) id = next++;
    auto as_set = [&](const std::vector<KType>& ts) {
        AtomSet s(static_cast<std::size_t>(next));
        for (const auto& t : ts) s.set(static_cast<std::size_t>(type_id.at(t)));
        return s;
    };

    Cnf f;
    const int n = static_cast<int>(cands.size());
    f.num_vars = n;  // sel(c) = c + 1
    std::map<AtomSet, int> out_var, in_var;
    std::vector<int> out_of(cands.size()), in_of(cands.size());
    std::map<int, std::vector<int>> members_with_input;  // in-set var -> sel vars
    for (int c = 0; c < n; ++c) {
        AtomSet o = as_set(cands[static_cast<std::size_t>(c)].outputs);
        AtomSet i = as_set(cands[static_cast<std::size_t>(c)].inputs);
        auto [oit, onew] = out_var.emplace(o, 0);
        if (onew) oit->second = f.new_var();
        auto [iit, inew] = in_var.emplace(i, 0);
        if (inew) iit->second = f.new_var();
        out_of[static_cast<std::size_t>(c)] = oit->second;
        in_of[static_cast<std::size_t>(c)] = iit->second;
        f.clauses.push_back({-(c + 1), oit->second});
        f.clauses.push_back({-(c + 1), iit->second});
        members_with_input[iit->second].push_back(c + 1);
    }
    for (const auto& [iv, sels] : members_with_input) {
        std::vector<int> cl{-iv};
        cl.insert(cl.end(), sels.begin(), sels.end());
        f.clauses.push_back(std::move(cl));
    }
    // every output type must be some selected member's input type
    std::vector<int> used(static_cast<std::size_t>(next), 0);
    for (const auto& [oset, ov] : out_var)
        for (std::size_t t = oset.find_first(); t != AtomSet::npos; t = oset.find_next(t)) {
            if (!used[t]) used[t] = f.new_var();
            f.clauses.push_back({-ov, used[t]});
        }
    for (int t = 0; t < next; ++t) {
        if (!used[static_cast<std::size_t>(t)]) continue;
        std::vector<int> cl{-used[static_cast<std::size_t>(t)]};
        for (const auto& [iset, iv] : in_var)
            if (iset.test(static_cast<std::size_t>(t))) cl.push_back(iv);
        f.clauses.push_back(std::move(cl));
    }
    // every ordered pair of selected members shares an output/input type
    for (const auto& [oset, ov] : out_var)
        for (const auto& [iset, iv] : in_var)
            if (!oset.intersects(iset)) f.clauses.push_back({-ov, -iv});
    std::vector<int> some;
    for (int c = 1; c <= n; ++c) some.push_back(c);
    f.clauses.push_back(std::move(some));

    auto a = solve(f);
    if (!a) return std::nullopt;
    std::vector<ConnectorType> d;
    for (int c = 0; c < n; ++c)
        if ((*a)[c + 1]) d.push_back(cands[static_cast<std::size_t>(c)]);
    if (!globally_coherent(d)) throw InternalInconsistency("coherent_subset returned an incoherent set");
    return d;
}

std::vector<ConnectorType> shrink(const std::vector<ConnectorType>& d) {
    if (d.empty()) return {};
    std::vector<ConnectorType> out{d.front()};
    std::set<KType> covered(d.front().inputs.begin(), d.front().inputs.end());
    for (;;) {
        std::optional<KType> missing;
        for (const auto& c : out) {
            for (const auto& t : c.outputs)
                if (!covered.count(t)) {
                    missing = t;
                    break;
                }
            if (missing) break;
        }
        if (!missing) return out;
        auto it = std::find_if(d.begin(), d.end(),
                               [&](const ConnectorType& c) { return contains(c.inputs, *missing); });
        if (it == d.end()) throw InternalInconsistency("shrink: input set is not coherent");
        out.push_back(*it);
        covered.insert(it->inputs.begin(), it->inputs.end());
    }
}

// ---------------------------------------------------------------------------

Structure build_model(const std::vector<ConnectorType>& d, const NormalForm& nf_in) {
    if (d.empty()) throw InternalInconsistency("build_model: empty connector set");
    CompatibilityOracle oracle(nf_in);
    const NormalForm& nf = oracle.nf();
    const Vocabulary& v = nf.vocab;
    const std::size_t s = std::max<std::size_t>(nf.existentials.size(), 1);

    // intern the 2-types in play
    std::vector<KType> types;
    std::map<KType, int> tid;
    auto intern = [&](const KType& t) {
        auto [it, fresh] = tid.emplace(t, static_cast<int>(types.size()));
        if (fresh) types.push_back(t);
        return it->second;
    };

    struct Block {
        std::size_t conn;
        int type;
        int first;  // element id of copy 0
    };
    std::vector<Block> blocks;
    std::vector<std::size_t> conn_of;  // element -> connector
    int n = 0;
    for (std::size_t c = 0; c < d.size(); ++c)
        for (const auto& t : d[c].inputs) {
            blocks.push_back({c, intern(t), n});
            for (std::size_t i = 0; i < s; ++i) conn_of.push_back(c);
            n += static_cast<int>(s);
        }
    for (const auto& c : d)
        for (const auto& t : c.outputs) intern(t);

    // first block of connector with the given input type
    auto block_for = [&](int type) -> const Block* {
        for (const auto& b : blocks)
            if (b.type == type) return &b;
        return nullptr;
    };

    std::vector<int> tp(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), -1);
    auto tp_at = [&](int a, int b) -> int& {
        return tp[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)];
    };

    // each output type of b is realised towards a whole block
    std::vector<std::map<int, const Block*>> out_block(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b) {
        const auto& c = d[conn_of[static_cast<std::size_t>(b)]];
        for (const auto& t : c.outputs) {
            int id = tid.at(t);
            const Block* blk = block_for(id);
            if (!blk) throw InternalInconsistency("build_model: output type is nobody's input");
            out_block[static_cast<std::size_t>(b)][id] = blk;
            for (std::size_t i = 0; i < s; ++i) tp_at(b, blk->first + static_cast<int>(i)) = id;
        }
    }
    // remaining pairs take the least common type
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a) {
            if (tp_at(b, a) >= 0) continue;
            const auto& cb = d[conn_of[static_cast<std::size_t>(b)]];
            const auto& ca = d[conn_of[static_cast<std::size_t>(a)]];
            int best = -1;
            for (const auto& t : cb.outputs)
                if (contains(ca.inputs, t)) {
                    best = tid.at(t);
                    break;
                }
            if (best < 0) throw InternalInconsistency("build_model: set is not globally coherent");
            tp_at(b, a) = best;
        }

    Structure m(n);
    for (std::size_t i = 0; i < v.size(); ++i) m.declare(v[i].name, std::max(v.arity(i), 0));
    const std::size_t p1 = v.prefix(1), p2 = v.prefix(2), p3 = v.prefix(3);
    for (int a = 0; a < n; ++a) {
        const KType& pi = d[conn_of[static_cast<std::size_t>(a)]].pi;
        for (std::size_t i = 0; i < p1; ++i)
            if (pi.holds(i)) m.set(v[i].name, {a});
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const KType& t = types[static_cast<std::size_t>(tp_at(a, b))];
            for (std::size_t i = 0; i < p1; ++i)
                if (t.holds(i) != d[conn_of[static_cast<std::size_t>(b)]].pi.holds(i))
                    throw InternalInconsistency("build_model: 2-type disagrees with 1-type");
            for (std::size_t i = p1; i < p2; ++i)
                if (t.holds(i)) m.set(v[i].name, {a, b});
        }

    std::vector<char> done(p3 > p2 ? static_cast<std::size_t>(n) * n * n : 0, 0);
    auto put_triple = [&](int a, int b, int c, const KType& t3) {
        std::size_t cell = (static_cast<std::size_t>(a) * n + b) * n + c;
        done[cell] = 1;
        for (std::size_t i = p2; i < p3; ++i)
            if (t3.holds(i)) m.set(v[i].name, {a, b, c});
    };
    if (p3 > p2) {
        // witnesses first: copy i of the block serves existential i
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const KType& tau = types[static_cast<std::size_t>(tp_at(a, b))];
                const auto& cb = d[conn_of[static_cast<std::size_t>(b)]];
                for (std::size_t i = 0; i < nf.existentials.size(); ++i) {
                    if (!oracle.guard_holds(i, tau)) continue;
                    bool placed = false;
                    for (const auto& tau2 : cb.outputs) {
                        auto t3 = oracle.three_type(i, tau, tau2);
                        if (!t3) continue;
                        const Block* blk = out_block[static_cast<std::size_t>(b)].at(tid.at(tau2));
                        put_triple(a, b, blk->first + static_cast<int>(i), *t3);
                        placed = true;
                        break;
                    }
                    if (!placed) throw InternalInconsistency("build_model: no witness type");
                }
            }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    if (done[(static_cast<std::size_t>(a) * n + b) * n + c]) continue;
                    auto t3 = oracle.three_type(std::nullopt,
                                                types[static_cast<std::size_t>(tp_at(a, b))],
                                                types[static_cast<std::size_t>(tp_at(b, c))]);
                    if (!t3) throw InternalInconsistency("build_model: incompatible triple");
                    put_triple(a, b, c, *t3);
                }
    }
    return m;
}

// ---------------------------------------------------------------------------

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Connector: return "connector";
        case Strategy::Bounded: return "bounded";
        case Strategy::Auto: return "auto";
    }
    return "auto";
}

Strategy parse_strategy(const std::string& s) {
    if (s == "connector") return Strategy::Connector;
    if (s == "bounded") return Strategy::Bounded;
    if (s == "auto") return Strategy::Auto;
    throw Error("unknown strategy '" + s + "'");
}

std::uint64_t two_type_count(const NormalForm& nf) {
    std::size_t atoms = nf.vocab.prefix(2);
    if (atoms >= 63) return ~std::uint64_t{0};
    return std::uint64_t{1} << atoms;
}

std::uint64_t small_model_bound(const NormalForm& nf) {
    std::uint64_t t = two_type_count(nf);
    std::uint64_t s = std::max<std::uint64_t>(nf.existentials.size(), 1);
    if (t > (std::uint64_t{1} << 20)) return ~std::uint64_t{0};
    std::uint64_t sq = t * t;
    if (sq > ~std::uint64_t{0} / s) return ~std::uint64_t{0};
    return s * sq;
}

namespace {

using Mask = std::uint64_t;

// Pairwise compatibility over all 2-types and the largest set of 2-types that
// could be realised together: each one tolerates some realised output, has a
// realised witness for every existential its guard triggers, and is tolerated
// by some realised input.
struct TypeTable {
    std::vector<KType> two;
    std::vector<AtomSet> all_ok;               // outputs compatible with every pair of this type
    std::vector<std::vector<AtomSet>> ex_ok;   // per triggered existential, usable witnesses
    AtomSet viable;
};

TypeTable type_table(CompatibilityOracle& oracle) {
    const NormalForm& nf = oracle.nf();
    const std::size_t T = static_cast<std::size_t>(two_type_count(nf));
    TypeTable tt;
    for (std::size_t t = 0; t < T; ++t) tt.two.push_back(type_from_index(nf.vocab, 2, t));
    tt.all_ok.assign(T, AtomSet(T));
    tt.ex_ok.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t u = 0; u < T; ++u)
            if (oracle.compatible(std::nullopt, tt.two[t], tt.two[u])) tt.all_ok[t].set(u);
        for (std::size_t i = 0; i < nf.existentials.size(); ++i) {
            if (!oracle.guard_holds(i, tt.two[t])) continue;
            AtomSet w(T);
            for (std::size_t u = 0; u < T; ++u)
                if (tt.all_ok[t].test(u) && oracle.compatible(i, tt.two[t], tt.two[u])) w.set(u);
            tt.ex_ok[t].push_back(std::move(w));
        }
    }
    tt.viable = AtomSet(T);
    tt.viable.set();
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t t = 0; t < T; ++t) {
            if (!tt.viable.test(t)) continue;
            bool ok = tt.all_ok[t].intersects(tt.viable);
            for (const auto& w : tt.ex_ok[t]) ok = ok && w.intersects(tt.viable);
            if (ok) {
                ok = false;
                for (std::size_t u = tt.viable.find_first(); u != AtomSet::npos && !ok;
                     u = tt.viable.find_next(u))
                    ok = tt.all_ok[u].test(t);
            }
            if (!ok) {
                tt.viable.reset(t);
                changed = true;
            }
        }
    }
    return tt;
}

std::vector<KType> mask_types(const std::vector<KType>& local, Mask m) {
    std::vector<KType> out;
    for (std::size_t t = 0; t < local.size(); ++t)
        if ((m >> t) & 1U) out.push_back(local[t]);
    return out;
}

struct MaskConnector {
    Mask pi;
    Mask in;
    Mask out;
};

// Connector types over the viable 2-types only; every realised connector type
// lives there.
void run_connector(const TypeTable& tt, CompatibilityOracle& oracle, const NormalForm& nf,
                   const Fl3Options& opts, Verdict& verdict) {
    const Vocabulary& v = oracle.vocab();
    const Mask P = Mask{1} << v.prefix(1);
    std::vector<std::size_t> global;
    for (std::size_t t = tt.viable.find_first(); t != AtomSet::npos; t = tt.viable.find_next(t))
        global.push_back(t);
    const std::size_t r = global.size();
    std::vector<KType> local;
    std::vector<Mask> all_ok(r, 0);
    std::vector<std::vector<Mask>> ex_ok(r);
    for (std::size_t a = 0; a < r; ++a) {
        local.push_back(tt.two[global[a]]);
        for (std::size_t b = 0; b < r; ++b) {
            if (tt.all_ok[global[a]].test(global[b])) all_ok[a] |= Mask{1} << b;
        }
        for (const auto& w : tt.ex_ok[global[a]]) {
            Mask m = 0;
            for (std::size_t b = 0; b < r; ++b)
                if (w.test(global[b])) m |= Mask{1} << b;
            ex_ok[a].push_back(m);
        }
    }

    std::vector<MaskConnector> cands;
    const Mask full = (Mask{1} << r) - 1;
    for (Mask pi = 0; pi < P; ++pi) {
        Mask in_space = 0;
        for (std::size_t a = 0; a < r; ++a)
            if ((global[a] & (P - 1)) == pi) in_space |= Mask{1} << a;
        for (Mask in = in_space; in; in = (in - 1) & in_space) {
            Mask allowed = full;
            std::vector<Mask> needs;
            for (std::size_t a = 0; a < r; ++a) {
                if (!((in >> a) & 1U)) continue;
                allowed &= all_ok[a];
                needs.insert(needs.end(), ex_ok[a].begin(), ex_ok[a].end());
            }
            if (std::any_of(needs.begin(), needs.end(), [&](Mask m) { return !(m & allowed); }))
                continue;
            for (Mask out = allowed; out; out = (out - 1) & allowed)
                if (std::all_of(needs.begin(), needs.end(), [&](Mask m) { return (out & m) != 0; }))
                    cands.push_back({pi, in, out});
        }
    }
    verdict.stats.candidates = cands.size();

    // a member meets itself, and its outputs are someone's inputs
    std::vector<MaskConnector> kept;
    for (const auto& c : cands)
        if (c.in & c.out) kept.push_back(c);
    for (;;) {
        Mask inputs = 0;
        for (const auto& c : kept) inputs |= c.in;
        std::size_t before = kept.size();
        std::erase_if(kept, [&](const MaskConnector& c) { return (c.out & ~inputs) != 0; });
        if (kept.size() == before) break;
    }
    verdict.stats.after_prefilter = kept.size();

    std::vector<ConnectorType> conns;
    conns.reserve(kept.size());
    for (const auto& c : kept)
        conns.push_back(make_connector(type_from_index(v, 1, c.pi), mask_types(local, c.in),
                                       mask_types(local, c.out)));
    auto subset = coherent_subset(conns, opts.subset_cap);
    if (!subset) return;
    verdict.sat = true;
    verdict.witness = shrink(*subset);
    verdict.model = build_model(verdict.witness, nf);
}

Verdict decide_bounded(const NormalForm& nf, const Fl3Options& opts) {
    Verdict verdict;
    verdict.strategy = Strategy::Bounded;
    const std::uint64_t bound = small_model_bound(nf);
    verdict.stats.bound = bound;
    const int limit = static_cast<int>(std::min<std::uint64_t>(bound, static_cast<std::uint64_t>(opts.domain_cap)));
    SearchLimits lim;
    lim.domain_cap = opts.domain_cap;
    ModelSearch r = find_model_upto(to_formula(nf), limit, lim);
    verdict.stats.searched_upto = r.searched_upto;
    if (r.model) {
        verdict.sat = true;
        verdict.model = std::move(r.model);
        return verdict;
    }
    if (bound > static_cast<std::uint64_t>(opts.domain_cap))
        throw CapExceeded("no model up to the domain cap " + std::to_string(opts.domain_cap) +
                          " and the small-model bound is " + std::to_string(bound));
    return verdict;
}

std::size_t connector_limit(const Fl3Options& opts) { return std::min<std::size_t>(opts.type_cap, 16); }

}  // namespace

std::vector<KType> viable_two_types(const NormalForm& nf) {
    CompatibilityOracle oracle(nf);
    if (two_type_count(oracle.nf()) > (std::uint64_t{1} << 16))
        throw CapExceeded("too many fluted 2-types to tabulate");
    TypeTable tt = type_table(oracle);
    std::vector<KType> out;
    for (std::size_t t = tt.viable.find_first(); t != AtomSet::npos; t = tt.viable.find_next(t))
        out.push_back(tt.two[t]);
    return out;
}

Verdict decide_fl3(const NormalForm& nf, const Fl3Options& opts) {
    if (!proposition_free(nf)) throw Error("decide_fl3 needs a proposition-free normal form");
    if (nf.k > 3) throw Error("decide_fl3 handles width at most 3");
    const std::uint64_t T = two_type_count(nf);
    Strategy s = opts.strategy;
    Verdict v;
    // the diagonal tuple of any element satisfies the statics
    if (!find_consistent(nf.vocab, nf.k, nf.statics, {})) {
        v.strategy = s == Strategy::Auto ? Strategy::Connector : s;
        return v;
    }
    if (s != Strategy::Bounded && T > opts.elimination_cap) {
        if (s == Strategy::Connector)
            throw CapExceeded(std::to_string(T) + " fluted 2-types exceed the tabulation cap " +
                              std::to_string(opts.elimination_cap));
        s = Strategy::Bounded;
    }
    if (s == Strategy::Bounded) {
        v = decide_bounded(nf, opts);
    } else {
        CompatibilityOracle oracle(nf);
        TypeTable tt = type_table(oracle);
        v.strategy = Strategy::Connector;
        v.stats.viable = tt.viable.count();
        if (v.stats.viable <= connector_limit(opts)) {
            run_connector(tt, oracle, nf, opts, v);
            v.stats.sat_calls = oracle.sat_calls();
        } else if (s == Strategy::Connector) {
            throw CapExceeded(std::to_string(v.stats.viable) +
                              " viable fluted 2-types exceed the connector type cap " +
                              std::to_string(connector_limit(opts)));
        } else {
            Fl3Stats kept = v.stats;
            v = decide_bounded(nf, opts);
            v.stats.viable = kept.viable;
        }
    }
    if (v.model && !evaluate(*v.model, to_formula(nf)))
        throw InternalInconsistency("constructed structure does not satisfy the normal form");
    return v;
}

}  // namespace fluted
