#include "fluted/reducer.hpp"

#include <algorithm>
#include <exception>
#include <future>
#include <map>

#include "fluted/model.hpp"
#include "fluted/resolution.hpp"

namespace fluted {

namespace {

std::string subset_text(std::uint32_t subset, std::size_t t) {
    std::string out = "{";
    bool first = true;
    for (std::size_t j = 0; j < t; ++j) {
        if (!((subset >> j) & 1U)) continue;
        if (!first) out += ',';
        out += std::to_string(j + 1);
        first = false;
    }
    return out + "}";
}

bool guard_true(const Structure& s, const Vocabulary& v, std::size_t guard, std::span<const int> prefix) {
    int ar = v.arity(guard);
    return s.holds(v[guard].name, prefix.subspan(prefix.size() - static_cast<std::size_t>(ar)));
}

}  // namespace

std::string existential_guard_name(std::size_t i, std::uint32_t subset, std::size_t t,
                                   const std::string& suffix) {
    return std::string(1, kFreshPrefix) + "p" + std::to_string(i + 1) + subset_text(subset, t) + suffix;
}

std::string universal_guard_name(std::uint32_t subset, std::size_t t, const std::string& suffix) {
    return std::string(1, kFreshPrefix) + "q" + subset_text(subset, t) + suffix;
}

NormalForm reduce_once(const NormalForm& nf, const ReduceOptions& opts) {
    if (!proposition_free(nf)) throw Error("reduce_once needs a proposition-free normal form");
    const int m = nf.k;
    if (m < 4) throw WidthTooLow("reduce_once needs width at least 4, got " + std::to_string(m));
    const std::size_t s = nf.s(), t = nf.t();
    if (t > opts.max_universals || t > 31)
        throw CapExceeded(std::to_string(t) + " universal conjuncts exceed the reduction cap " +
                          std::to_string(opts.max_universals));
    const Vocabulary& v = nf.vocab;
    const std::uint32_t subsets = std::uint32_t{1} << t;

    Signature sig;
    for (const auto& p : v.predicates())
        if (p.arity < m) sig.add(p);
    // a previous round may have used the plain names
    std::string suffix;
    auto clash = [&](const std::string& sfx) {
        for (std::uint32_t j = 0; j < subsets; ++j) {
            if (v.index(universal_guard_name(j, t, sfx))) return true;
            for (std::size_t i = 0; i < s; ++i)
                if (v.index(existential_guard_name(i, j, t, sfx))) return true;
        }
        return false;
    };
    for (int n = m; clash(suffix); ++n) suffix = "@" + std::to_string(n);
    for (std::uint32_t j = 0; j < subsets; ++j) {
        for (std::size_t i = 0; i < s; ++i) sig.add({existential_guard_name(i, j, t, suffix), m - 2});
        sig.add({universal_guard_name(j, t, suffix), m - 2});
    }

    NormalForm r;
    r.k = m - 1;
    r.vocab = Vocabulary(sig);
    const Vocabulary& nv = r.vocab;
    auto guard_index = [&](std::size_t g) { return nv.at(v[g].name); };

    for (std::uint32_t j = 0; j < subsets; ++j) {
        KClause base(nv, m - 1);
        for (std::size_t u = 0; u < t; ++u)
            if ((j >> u) & 1U) base.neg.set(guard_index(nf.universals[u].guard));
        for (std::size_t i = 0; i < s; ++i) {
            KClause c = base;
            c.neg.set(guard_index(nf.existentials[i].guard));
            c.pos.set(nv.at(existential_guard_name(i, j, t, suffix)));
            if (!c.tautology()) r.statics.push_back(c);
        }
        KClause c = base;
        c.pos.set(nv.at(universal_guard_name(j, t, suffix)));
        r.statics.push_back(c);
    }
    std::sort(r.statics.begin(), r.statics.end());
    r.statics.erase(std::unique(r.statics.begin(), r.statics.end()), r.statics.end());

    auto reduced_body = [&](std::vector<KClause> clauses) {
        std::vector<KClause> out;
        for (const auto& c : zero_restrict(v, closure(v, std::move(clauses))))
            out.push_back(remap(v, nv, c, m - 1));
        std::sort(out.begin(), out.end());
        return out;
    };
    for (std::uint32_t j = 0; j < subsets; ++j) {
        std::vector<KClause> common = nf.statics;
        for (std::size_t u = 0; u < t; ++u)
            if ((j >> u) & 1U) common.push_back(nf.universals[u].body);
        for (std::size_t i = 0; i < s; ++i) {
            std::vector<KClause> cs = common;
            cs.insert(cs.end(), nf.existentials[i].body.begin(), nf.existentials[i].body.end());
            r.existentials.push_back(
                {nv.at(existential_guard_name(i, j, t, suffix)), reduced_body(std::move(cs))});
        }
    }
    for (std::uint32_t j = 0; j < subsets; ++j) {
        std::vector<KClause> common = nf.statics;
        for (std::size_t u = 0; u < t; ++u)
            if ((j >> u) & 1U) common.push_back(nf.universals[u].body);
        for (auto& c : reduced_body(std::move(common)))
            r.universals.push_back({nv.at(universal_guard_name(j, t, suffix)), std::move(c)});
    }
    return r;
}

Structure lift_model(const NormalForm& nf, const Structure& b) {
    const int m = nf.k;
    const Vocabulary& v = nf.vocab;
    const std::size_t s = nf.s(), t = nf.t();
    for (std::size_t i = v.prefix(m - 1); i < v.size(); ++i)
        if (b.relation(v[i].name)) throw LiftFailure("reduced model interprets '" + v[i].name + "'");
    if (t > 31) throw LiftFailure("too many universal conjuncts");

    const int base_n = b.size();
    const int z = static_cast<int>(std::max<std::size_t>(s, 1));
    Structure a = multiply(b, z);
    for (const auto& p : v.predicates()) a.declare(p.name, p.arity);
    const int n = a.size();

    std::map<std::pair<long, std::uint32_t>, std::vector<KClause>> closed_cache;
    std::map<std::pair<long, std::uint32_t>, std::vector<KClause>> restricted_cache;
    auto closed_for = [&](long i, std::uint32_t j) -> const std::vector<KClause>& {
        auto key = std::make_pair(i, j);
        auto it = closed_cache.find(key);
        if (it != closed_cache.end()) return it->second;
        std::vector<KClause> cs = nf.statics;
        for (std::size_t u = 0; u < t; ++u)
            if ((j >> u) & 1U) cs.push_back(nf.universals[u].body);
        if (i >= 0) {
            const auto& body = nf.existentials[static_cast<std::size_t>(i)].body;
            cs.insert(cs.end(), body.begin(), body.end());
        }
        auto closed = closure(v, std::move(cs));
        restricted_cache[key] = zero_restrict(v, closed);
        return closed_cache.emplace(key, std::move(closed)).first->second;
    };

    const std::size_t lo = v.prefix(m - 1), hi = v.prefix(m);
    std::vector<int> tuple(static_cast<std::size_t>(m));
    auto write = [&](const KType& full) {
        for (std::size_t i = lo; i < hi; ++i)
            if (full.holds(i)) a.set(v[i].name, tuple);
    };
    std::size_t cells = 1;
    for (int i = 0; i < m; ++i) cells *= static_cast<std::size_t>(n);
    std::vector<char> done(cells, 0);
    auto shifted_type = [&]() {
        return ftp(a, v, std::span<const int>(tuple).subspan(1));
    };

    // lexicographic walk over the (m-1)-prefixes
    std::vector<int> pre(static_cast<std::size_t>(m - 1), 0);
    auto next_prefix = [&]() {
        for (int p = m - 2; p >= 0; --p) {
            if (++pre[static_cast<std::size_t>(p)] < n) return true;
            pre[static_cast<std::size_t>(p)] = 0;
        }
        return false;
    };
    auto active = [&]() {
        std::uint32_t j = 0;
        for (std::size_t u = 0; u < t; ++u)
            if (guard_true(a, v, nf.universals[u].guard, pre)) j |= std::uint32_t{1} << u;
        return j;
    };

    // witnesses: copy i of some base element for existential i
    do {
        const std::uint32_t j = active();
        std::copy(pre.begin(), pre.end(), tuple.begin());
        for (std::size_t i = 0; i < s; ++i) {
            if (!guard_true(a, v, nf.existentials[i].guard, pre)) continue;
            const auto& closed = closed_for(static_cast<long>(i), j);
            const auto& restricted = restricted_cache.at({static_cast<long>(i), j});
            bool placed = false;
            for (int e = 0; e < base_n && !placed; ++e) {
                tuple.back() = static_cast<int>(i) * base_n + e;
                KType tau = shifted_type();
                if (!std::all_of(restricted.begin(), restricted.end(),
                                 [&](const KClause& c) { return satisfies(tau, c); }))
                    continue;
                write(extend_type_closed(v, m, closed, tau));
                done[a.index(tuple)] = 1;
                placed = true;
            }
            if (!placed)
                throw LiftFailure("no witness for existential " + std::to_string(i + 1));
        }
    } while (next_prefix());

    // everything else only has to respect the statics and active universals
    std::fill(pre.begin(), pre.end(), 0);
    do {
        const std::uint32_t j = active();
        const auto& closed = closed_for(-1, j);
        std::copy(pre.begin(), pre.end(), tuple.begin());
        for (int e = 0; e < n; ++e) {
            tuple.back() = e;
            if (done[a.index(tuple)]) continue;
            try {
                write(extend_type_closed(v, m, closed, shifted_type()));
            } catch (const Inconsistent& ex) {
                throw LiftFailure(std::string("reduced model violates a universal body: ") + ex.what());
            }
        }
    } while (next_prefix());

    a.retain([&](const std::string& name) { return v.index(name).has_value(); });
    if (!evaluate(a, to_formula(nf))) throw LiftFailure("lifted structure does not satisfy the normal form");
    return a;
}

// ---------------------------------------------------------------------------

namespace {

struct BranchOutcome {
    bool sat = false;
    std::optional<Structure> model;
    Strategy strategy = Strategy::Auto;
    std::vector<int> levels;
    Fl3Stats stats;
};

BranchOutcome decide_branch(const NormalForm& nf, const DecideOptions& opts) {
    BranchOutcome out;
    std::vector<NormalForm> chain{nf};
    out.levels.push_back(nf.k);
    while (chain.back().k > 3) {
        chain.push_back(reduce_once(chain.back(), opts.reduce));
        out.levels.push_back(chain.back().k);
    }
    Verdict v = decide_fl3(chain.back(), opts.fl3);
    out.strategy = v.strategy;
    out.stats = v.stats;
    out.sat = v.sat;
    if (!v.sat) return out;
    Structure model = std::move(*v.model);
    for (std::size_t i = chain.size() - 1; i > 0; --i) model = lift_model(chain[i - 1], model);
    out.model = std::move(model);
    return out;
}

}  // namespace

DecideResult decide(const Formula& sentence, const DecideOptions& opts) {
    FlutedReport rep = fluted_status(sentence);
    if (!rep.is_fluted) {
        std::string why = rep.violations.empty() ? "" : ": " + rep.violations.front().reason;
        throw NotFluted("input is not fluted" + why);
    }
    if (*rep.level != 0) throw NotFluted("input has free variables");
    const Signature original = infer_signature(sentence);

    auto finish = [&](Structure m) {
        m.retain([&](const std::string& name) { return original.contains(name); });
        for (const auto& p : original.predicates()) m.declare(p.name, p.arity);
        if (!evaluate(m, sentence))
            throw InternalInconsistency("decided model does not satisfy the input");
        return m;
    };

    DecideResult res;
    if (rep.width == 0) {
        SearchLimits lim;
        lim.domain_cap = opts.fl3.domain_cap;
        res.branches = 1;
        res.strategy = Strategy::Bounded;
        res.levels = {0};
        if (auto m = find_model_of_size(sentence, 1, lim)) {
            res.sat = true;
            res.model = finish(std::move(*m));
        }
        return res;
    }

    auto branches = eliminate_propositions(normalize(sentence));
    std::vector<std::future<BranchOutcome>> pending;
    auto launch = [&](std::size_t b) {
        auto policy = opts.jobs > 1 ? std::launch::async : std::launch::deferred;
        return std::async(policy, [&, b] { return decide_branch(branches[b].nf, opts); });
    };
    // keep up to `jobs` branches in flight; the verdict is the first SAT branch in order
    std::size_t launched = 0;
    std::exception_ptr undecided;
    const std::size_t width = static_cast<std::size_t>(std::max(opts.jobs, 1));
    for (std::size_t b = 0; b < branches.size(); ++b) {
        while (launched < branches.size() && launched < b + width) pending.push_back(launch(launched++));
        BranchOutcome o;
        try {
            o = pending[b].get();
        } catch (const CapExceeded&) {
            // a later branch may still be SAT; the cap only decides when none is
            if (!undecided) undecided = std::current_exception();
            res.branches = b + 1;
            continue;
        }
        res.branches = b + 1;
        res.strategy = o.strategy;
        res.levels = o.levels;
        res.stats = o.stats;
        if (!o.sat) continue;
        Structure m = std::move(*o.model);
        for (const auto& [name, value] : branches[b].assignment) {
            m.declare(name, 0);
            if (value) m.set(name, {});
        }
        res.sat = true;
        res.model = finish(std::move(m));
        break;
    }
    // outstanding async branches are joined by the future destructors
    if (!res.sat && undecided) std::rethrow_exception(undecided);
    return res;
}

}  // namespace fluted
