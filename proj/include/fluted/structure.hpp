#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fluted/formula.hpp"

namespace fluted {

// Dense relation over 0..N-1; tuple (a1..ak) lives at index sum a_i * N^(k-i).
struct Relation {
    int arity = 0;
    std::vector<std::uint8_t> bits;
};

class Structure {
public:
    // cells per relation (N^arity) above this raise CapExceeded
    static constexpr std::uint64_t kMaxCells = std::uint64_t{1} << 27;

    explicit Structure(int domain_size = 1);

    int size() const { return n_; }

    // creates an all-false relation; no-op if already declared with this arity
    Relation& declare(const std::string& name, int arity);
    void set(const std::string& name, std::span<const int> tuple, bool value = true);
    void set(const std::string& name, std::initializer_list<int> tuple, bool value = true) {
        set(name, std::span<const int>(tuple.begin(), tuple.size()), value);
    }
    // undeclared predicates are false everywhere
    bool holds(const std::string& name, std::span<const int> tuple) const;
    bool holds(const std::string& name, std::initializer_list<int> tuple) const {
        return holds(name, std::span<const int>(tuple.begin(), tuple.size()));
    }

    const Relation* relation(const std::string& name) const;
    Relation* relation(const std::string& name);
    const std::map<std::string, Relation>& relations() const { return rels_; }
    std::vector<std::string> predicate_names() const;
    // drops every predicate not accepted by keep
    template <class Pred>
    void retain(Pred keep) {
        for (auto it = rels_.begin(); it != rels_.end();)
            it = keep(it->first) ? std::next(it) : rels_.erase(it);
    }
    void erase(const std::string& name) { rels_.erase(name); }

    std::uint64_t index(std::span<const int> tuple) const;

    bool operator==(const Structure&) const;

private:
    int n_;
    std::map<std::string, Relation> rels_;
};

bool operator==(const Relation& a, const Relation& b);

}  // namespace fluted
