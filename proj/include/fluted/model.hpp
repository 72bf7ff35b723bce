#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fluted/formula.hpp"
#include "fluted/structure.hpp"
#include "fluted/types.hpp"

namespace fluted {

// Compiled evaluator: predicate lookups are resolved once against the structure.
// Predicates the structure does not interpret are false.
class Evaluator {
public:
    Evaluator(const Structure& s, const Formula& f);
    ~Evaluator();
    Evaluator(const Evaluator&) = delete;
    Evaluator& operator=(const Evaluator&) = delete;

    // env[v] is the value of x_v, -1 when unassigned
    bool operator()(std::vector<int>& env) const;
    bool operator()() const;

    struct Node;  // opaque compiled form

private:
    const Structure& s_;
    std::unique_ptr<Node> root_;
    int width_;
};

// env indexed by variable number; throws UnboundVariable on a free variable with no value
bool evaluate(const Structure& s, const Formula& f, std::vector<int> env = {});

// Fluted k-type of the tuple (k = tuple length) over the vocabulary.
KType ftp(const Structure& s, const Vocabulary& v, std::span<const int> tuple);
inline KType ftp(const Structure& s, const Vocabulary& v, std::initializer_list<int> tuple) {
    return ftp(s, v, std::span<const int>(tuple.begin(), tuple.size()));
}

// z copies of the domain; element (c, a) becomes c * |A| + a and tuple membership
// looks only at the base elements.
Structure multiply(const Structure& s, int z);

struct ModelSearch {
    std::optional<Structure> model;
    int searched_upto = 0;  // largest size tried
};

struct SearchLimits {
    int domain_cap = 64;
    std::size_t clause_cap = std::size_t{1} << 24;
};

// Grounds the sentence over sizes first..n_max in increasing order; the first
// model found has minimum size. The signature of the result is that of f.
ModelSearch find_model_upto(const Formula& f, int n_max, const SearchLimits& lim = {},
                            int first = 1);
// Single size.
std::optional<Structure> find_model_of_size(const Formula& f, int n, const SearchLimits& lim = {});

}  // namespace fluted
