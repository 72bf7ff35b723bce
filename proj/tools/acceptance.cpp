// One PASS/FAIL line per acceptance criterion. Seeds, instance counts and time
// limits are fixed here so that runs are comparable.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "fluted/fl3.hpp"
#include "fluted/generators.hpp"
#include "fluted/model.hpp"
#include "fluted/reducer.hpp"
#include "fluted/resolution.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace fluted;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

// ---------------------------------------------------------------------------

Outcome clause_counts() {
    auto n1 = enumerate_k_clauses(Vocabulary(Signature{{"p", 1}, {"r", 2}}), 2).size();
    auto n2 = enumerate_k_clauses(Vocabulary(Signature{{"p", 1}, {"q", 1}, {"r", 2}}), 2).size();
    return {n1 == 16 && n2 == 64, "{p/1,r/2}: " + std::to_string(n1) + ", with q/1: " + std::to_string(n2)};
}

Outcome minimal_models() {
    std::string detail;
    bool ok = true;
    auto probe = [&](int m, int n, int expected) {
        Formula phi = gen_phi(m, n).sentence;
        for (int size = 1; size <= expected; ++size) {
            bool found = find_model_of_size(phi, size).has_value();
            if (found != (size == expected)) ok = false;
        }
        auto r = find_model_upto(phi, expected);
        int got = r.model ? r.model->size() : -1;
        if (got != expected) ok = false;
        detail += "phi(" + std::to_string(m) + "," + std::to_string(n) + ") minimum " + std::to_string(got) + "; ";
    };
    probe(1, 1, 2);
    probe(1, 2, 4);
    return {ok, detail};
}

Outcome canonical_models() {
    std::string detail;
    bool ok = true;
    for (auto [m, n] : {std::pair{1, 1}, {1, 2}, {1, 3}, {2, 1}}) {
        Structure s = canonical_phi_model(m, n);
        bool v = evaluate(s, gen_phi(m, n).sentence);
        ok = ok && v;
        detail += "phi(" + std::to_string(m) + "," + std::to_string(n) + ")=" + (v ? "true" : "false") + " ";
    }
    TilingSystem t = parse_tiling_system("colors: c\ninitial: c\nh: c c\nv: c c\n");
    auto f = find_tiling(t, static_cast<int>(tower(2, 1)));
    bool v = f && evaluate(canonical_tiling_model(2, 1, t, *f), gen_tiling(2, 1, t).sentence);
    ok = ok && v;
    detail += std::string("tiling(2,1)=") + (v ? "true" : "false");
    return {ok, detail};
}

Outcome quadratic_growth() {
    std::string detail;
    bool ok = true;
    std::size_t prev = 0;
    for (int n : {2, 4, 8, 16}) {
        std::size_t c = symbol_count(gen_phi(1, n).sentence);
        detail += "n=" + std::to_string(n) + ":" + std::to_string(c) + " ";
        if (prev) {
            double ratio = static_cast<double>(c) / static_cast<double>(prev);
            ok = ok && ratio <= 4.5;
        }
        prev = c;
    }
    return {ok, detail};
}

// ---------------------------------------------------------------------------

struct Fl3Suite {
    int instances = 0;
    int agree = 0;
    int sat = 0;
    int model_ok = 0;
    int undecided = 0;
    std::vector<std::pair<NormalForm, Structure>> models;
};

Fl3Suite run_fl3_suite() {
    constexpr int kInstances = 300;
    constexpr int kBoundedCap = 128;
    random::Rng rng(1);
    const std::vector<std::vector<int>> sigs{{1, 2}, {1, 3}, {2, 3}, {1, 2, 3},
                                             {1, 1, 2}, {1, 1, 3}, {2, 2, 3}, {1, 2, 2}};
    Fl3Suite out;
    for (int i = 0; i < kInstances; ++i) {
        random::NfShape shape;
        shape.arities = sigs[static_cast<std::size_t>(i) % sigs.size()];
        NormalForm nf = random::random_nf(rng, shape);
        ++out.instances;
        Fl3Options c, b;
        c.strategy = Strategy::Connector;
        b.strategy = Strategy::Bounded;
        b.domain_cap = kBoundedCap;
        Verdict vc, vb;
        try {
            vc = decide_fl3(nf, c);
            vb = decide_fl3(nf, b);
        } catch (const CapExceeded&) {
            ++out.undecided;
            continue;
        }
        if (vc.sat == vb.sat) ++out.agree;
        if (!vc.sat) continue;
        ++out.sat;
        const std::uint64_t s = std::max<std::uint64_t>(nf.s(), 1);
        const std::uint64_t limit = s << (2 * nf.vocab.size());
        if (vc.model && evaluate(*vc.model, to_formula(nf)) &&
            static_cast<std::uint64_t>(vc.model->size()) <= limit)
            ++out.model_ok;
        if (vc.model) out.models.emplace_back(nf, *vc.model);
        if (vb.model) out.models.emplace_back(nf, *vb.model);
    }
    return out;
}

Outcome strategy_agreement(const Fl3Suite& r) {
    bool ok = r.instances >= 300 && r.agree == r.instances && r.model_ok == r.sat;
    return {ok, "agree " + std::to_string(r.agree) + "/" + std::to_string(r.instances) + ", undecided " +
                    std::to_string(r.undecided) + ", SAT models verified " + std::to_string(r.model_ok) + "/" +
                    std::to_string(r.sat)};
}

Outcome connector_properties(const Fl3Suite& r) {
    int ok = 0;
    for (const auto& [nf, m] : r.models) {
        auto cs = connectors_of(m, nf.vocab);
        CompatibilityOracle oracle(nf);
        bool good = globally_coherent(cs);
        for (const auto& c : cs) good = good && locally_compatible(c, oracle);
        auto small = shrink(cs);
        good = good && globally_coherent(small) && small.size() <= two_type_count(nf);
        ok += good;
    }
    const int total = static_cast<int>(r.models.size());
    return {total > 0 && ok == total, std::to_string(ok) + "/" + std::to_string(total) + " models"};
}

// ---------------------------------------------------------------------------

Outcome resolution_properties() {
    constexpr int kPairs = 500;
    random::Rng rng(7);
    const std::vector<std::vector<int>> sigs{{1, 2, 3}, {1, 2, 2, 3}, {1, 1, 2, 3, 3}, {2, 3, 3}};
    int pairs = 0, complete = 0, clauses = 0, entailed = 0, draws = 0;
    while (pairs < kPairs && draws < 50 * kPairs) {
        Vocabulary v(random::signature_of(sigs[static_cast<std::size_t>(draws++) % sigs.size()]));
        std::vector<KClause> gamma;
        int n = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) gamma.push_back(random::random_clause(v, 3, rng, 3));
        auto closed = closure(v, gamma);
        if (v.prefix(3) <= 12) {
            for (const auto& c : closed) {
                ++clauses;
                entailed += oracle::entails_by_table(v, 3, gamma, c);
            }
        }
        auto zero = zero_restrict(v, closed);
        KType tau = type_from_index(v, 2, rng() % (std::uint64_t{1} << v.prefix(2)));
        std::vector<LiteralSet> fixed{as_literals(tau)};
        if (!consistent(v, 2, zero, fixed)) continue;
        ++pairs;
        try {
            KType plus = extend_type(v, 3, gamma, tau);
            std::vector<LiteralSet> whole{as_literals(plus)};
            if (drop_first(v, plus) == tau && consistent(v, 3, gamma, whole)) ++complete;
        } catch (const Inconsistent&) {
        }
    }
    bool ok = pairs == kPairs && complete == pairs && entailed == clauses && clauses > 0;
    return {ok, "extensions " + std::to_string(complete) + "/" + std::to_string(pairs) + ", entailed closure clauses " +
                    std::to_string(entailed) + "/" + std::to_string(clauses)};
}

// ---------------------------------------------------------------------------

Outcome reduction_round_trip() {
    constexpr int kInstances = 100;
    constexpr int kFindUpto = 3;
    // bounded search on the reduced form stops here; such instances count as
    // undecided and are only acceptable when no small model was found
    constexpr int kReducedDomainCap = 6;
    random::Rng rng(1);
    const std::vector<std::vector<int>> sigs{{1, 4}, {2, 4}, {3, 4}, {1, 2, 4}, {2, 3, 4}, {1, 3, 4}};
    int found = 0, found_and_reduced_sat = 0, reduced_sat = 0, lifted_ok = 0, undecided = 0, fallback = 0;
    for (int i = 0; i < kInstances; ++i) {
        random::NfShape shape;
        shape.k = 4;
        shape.arities = sigs[static_cast<std::size_t>(i) % sigs.size()];
        shape.min_s = 1;
        shape.max_s = 3;
        shape.max_t = 3;
        NormalForm nf = random::random_nf(rng, shape);
        Formula orig = to_formula(nf);
        auto small = find_model_upto(orig, kFindUpto);
        NormalForm red = reduce_once(nf);
        Fl3Options o;
        o.domain_cap = kReducedDomainCap;
        Verdict v;
        bool decided = true;
        try {
            v = decide_fl3(red, o);
        } catch (const CapExceeded&) {
            decided = false;
            ++undecided;
        }
        if (small.model) {
            ++found;
            if (decided && v.sat) ++found_and_reduced_sat;
        }
        if (!decided || !v.sat) continue;
        ++reduced_sat;
        Structure b = *v.model;
        std::optional<Structure> lifted;
        try {
            lifted = lift_model(nf, b);
        } catch (const CapExceeded&) {
            // the lifted structure does not fit in memory; lift a smallest model
            // of the reduced form instead
            ++fallback;
            auto m = find_model_upto(to_formula(red), kFindUpto);
            if (!m.model) continue;
            b = *m.model;
            lifted = lift_model(nf, b);
        }
        const std::size_t z = std::max<std::size_t>(nf.s(), 1);
        if (static_cast<std::size_t>(lifted->size()) == z * static_cast<std::size_t>(b.size()) &&
            evaluate(*lifted, orig))
            ++lifted_ok;
    }
    bool ok = found_and_reduced_sat == found && lifted_ok == reduced_sat;
    return {ok, "small model -> reduced SAT " + std::to_string(found_and_reduced_sat) + "/" + std::to_string(found) +
                    ", reduced SAT -> lifted model " + std::to_string(lifted_ok) + "/" + std::to_string(reduced_sat) +
                    " (" + std::to_string(kInstances) + " instances, " + std::to_string(undecided) +
                    " undecided, " + std::to_string(fallback) + " lifted from a smaller model)"};
}

// ---------------------------------------------------------------------------

Outcome multiply_preservation() {
    constexpr int kTriples = 200;
    random::Rng rng(9);
    const std::vector<std::vector<int>> sigs{{1, 2}, {1, 2, 3}, {0, 1, 2}, {1, 1, 2, 3}};
    int triples = 0, ok = 0;
    for (int i = 0; triples < kTriples; ++i) {
        Formula f = random::random_sentence(rng, sigs[static_cast<std::size_t>(i) % sigs.size()], 3, 4);
        auto qs = oracle::quantified_subformulas(f);
        if (qs.empty()) continue;
        ++triples;
        Structure s = random::random_structure(rng, infer_signature(f), 1 + static_cast<int>(rng() % 3));
        int z = 1 + static_cast<int>(rng() % 3);
        Structure m = multiply(s, z);
        const Formula& q = qs[rng() % qs.size()];
        bool same = evaluate(m, f) == evaluate(s, f) && oracle::truth(m, f) == oracle::truth(s, f);
        if (same && oracle::min_witnesses(m, q) >= z) ++ok;
    }
    return {ok == triples, std::to_string(ok) + "/" + std::to_string(triples) + " triples"};
}

Outcome tower_table() {
    const std::vector<std::tuple<int, std::uint64_t, std::uint64_t>> table{
        {0, 5, 5}, {1, 3, 8}, {2, 2, 16}, {3, 1, 4}};
    std::string detail;
    bool ok = true;
    for (auto [k, n, want] : table) {
        std::uint64_t got = tower(k, n);
        ok = ok && got == want;
        detail += "(" + std::to_string(k) + "," + std::to_string(n) + ")=" + std::to_string(got) +
                  (got == want ? "" : " want " + std::to_string(want)) + " ";
    }
    return {ok, detail};
}

}  // namespace

int main() {
    // criterion 10 pins tower(3,1) = 4, while the recursion tower(k+1,n) =
    // 2^tower(k,n) gives 2^(2^(2^1)) = 16; the table entry matches tower(2,1).
    const std::set<int> known_unattainable{10};

    struct Criterion {
        int id;
        double seconds_limit;  // 0: none
        std::function<Outcome()> run;
    };
    Fl3Suite suite;
    std::vector<Criterion> criteria{
        {1, 1, clause_counts},
        {2, 300, minimal_models},
        {3, 600, canonical_models},
        {4, 60, quadratic_growth},
        {5, 900, [&] {
             suite = run_fl3_suite();
             return strategy_agreement(suite);
         }},
        {6, 0, [&] { return connector_properties(suite); }},
        {7, 0, resolution_properties},
        {8, 1200, reduction_round_trip},
        {9, 0, multiply_preservation},
        {10, 0, tower_table},
    };

    int unexpected = 0;
    for (const auto& c : criteria) {
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = seconds_since(t0);
        bool in_time = c.seconds_limit == 0 || secs < c.seconds_limit;
        bool pass = o.pass && in_time;
        std::ostringstream line;
        line << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << " " << o.detail << " [" << fmt(secs)
             << "s";
        if (c.seconds_limit > 0) line << " of " << c.seconds_limit << "s";
        line << "]";
        if (!pass && known_unattainable.count(c.id)) line << " (known: table entry contradicts the recursion)";
        std::cout << line.str() << std::endl;
        if (!pass && !known_unattainable.count(c.id)) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
