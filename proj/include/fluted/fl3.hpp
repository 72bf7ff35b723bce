#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fluted/normal_form.hpp"
#include "fluted/structure.hpp"
#include "fluted/types.hpp"

namespace fluted {

// <pi, I, O>: the 1-type of an element b, the fluted 2-types of pairs (a, b)
// and those of pairs (b, c). Inputs and outputs are sorted and distinct.
struct ConnectorType {
    KType pi;
    std::vector<KType> inputs;
    std::vector<KType> outputs;

    bool operator==(const ConnectorType& o) const {
        return pi == o.pi && inputs == o.inputs && outputs == o.outputs;
    }
    bool operator<(const ConnectorType& o) const;
};

ConnectorType make_connector(KType pi, std::vector<KType> inputs, std::vector<KType> outputs);
ConnectorType connector_of(const Structure& s, const Vocabulary& v, int b);
// distinct connector types realised in s, sorted
std::vector<ConnectorType> connectors_of(const Structure& s, const Vocabulary& v);

bool gc_exists(const std::vector<ConnectorType>& d);
bool gc_forall(const std::vector<ConnectorType>& d);
inline bool globally_coherent(const std::vector<ConnectorType>& d) {
    return !d.empty() && gc_exists(d) && gc_forall(d);
}

// Local consistency questions about a proposition-free normal form of width <= 3,
// answered by the SAT core over the ternary atoms and memoised.
class CompatibilityOracle {
public:
    explicit CompatibilityOracle(const NormalForm& nf);

    const NormalForm& nf() const { return nf_; }
    const Vocabulary& vocab() const { return nf_.vocab; }
    // universal conjuncts whose guard holds in the 2-type
    std::vector<std::size_t> active_universals(const KType& tau) const;
    bool guard_holds(std::size_t existential, const KType& tau) const;

    // is there a 3-type extending tau'(x2,x3) satisfying the statics, the active
    // universals of tau and, when given, the body of existential i
    bool compatible(std::optional<std::size_t> existential, const KType& tau, const KType& tau2);
    // the 3-type found for the same question
    std::optional<KType> three_type(std::optional<std::size_t> existential, const KType& tau,
                                    const KType& tau2);

    std::uint64_t sat_calls() const { return sat_calls_; }

private:
    struct Key {
        long existential;
        AtomSet active;
        AtomSet tau2;
        bool operator==(const Key& o) const {
            return existential == o.existential && active == o.active && tau2 == o.tau2;
        }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };

    NormalForm nf_;
    std::unordered_map<Key, std::optional<KType>, KeyHash> cache_;
    std::uint64_t sat_calls_ = 0;
};

bool locally_compatible(const ConnectorType& c, CompatibilityOracle& oracle);
bool locally_compatible(const ConnectorType& c, const NormalForm& nf);

// Nonempty subset satisfying both coherence conditions, via a SAT encoding.
std::optional<std::vector<ConnectorType>> coherent_subset(const std::vector<ConnectorType>& c,
                                                          std::size_t cap = std::size_t{1} << 16);
// Small coherent subset grown from the first member.
std::vector<ConnectorType> shrink(const std::vector<ConnectorType>& d);

// Explicit model from a coherent set of locally compatible connector types.
Structure build_model(const std::vector<ConnectorType>& d, const NormalForm& nf);

enum class Strategy { Connector, Bounded, Auto };
std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& s);

struct Fl3Options {
    Strategy strategy = Strategy::Auto;
    int domain_cap = 64;
    std::size_t type_cap = 8;           // viable fluted 2-types the connector strategy enumerates over
    std::size_t elimination_cap = 256;  // fluted 2-types tabulated pairwise
    std::size_t subset_cap = std::size_t{1} << 16;
};

struct Fl3Stats {
    std::uint64_t viable = 0;              // 2-types surviving elimination
    std::uint64_t candidates = 0;          // locally compatible connector types
    std::uint64_t after_prefilter = 0;
    std::uint64_t sat_calls = 0;
    int searched_upto = 0;                 // bounded strategy
    std::uint64_t bound = 0;
};

struct Verdict {
    bool sat = false;
    Strategy strategy = Strategy::Auto;
    std::optional<Structure> model;
    std::vector<ConnectorType> witness;  // connector strategy
    Fl3Stats stats;
};

// Number of fluted 2-types of the normal form's vocabulary.
std::uint64_t two_type_count(const NormalForm& nf);
// Domain size below which a model must exist if any does: max(s,1) * #2-types^2.
std::uint64_t small_model_bound(const NormalForm& nf);

// Greatest set of 2-types closed under the realisability conditions; every
// 2-type realised in a model of nf belongs to it, so empty means unsatisfiable.
std::vector<KType> viable_two_types(const NormalForm& nf);

// Auto: connector when the viable 2-types fit type_cap, bounded search otherwise.
Verdict decide_fl3(const NormalForm& nf, const Fl3Options& opts = {});

}  // namespace fluted
