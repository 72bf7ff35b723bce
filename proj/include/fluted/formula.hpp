#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fluted/errors.hpp"

namespace fluted {

struct Predicate {
    std::string name;
    int arity = 0;

    bool operator==(const Predicate&) const = default;
};

// Canonical predicate order used for atom enumeration: by arity, then name.
inline bool predicate_less(const Predicate& a, const Predicate& b) {
    if (a.arity != b.arity) return a.arity < b.arity;
    return a.name < b.name;
}

class Signature {
public:
    Signature() = default;
    Signature(std::initializer_list<Predicate> preds);

    // throws ArityConflict if the name is already present with another arity
    void add(const Predicate& p);
    void merge(const Signature& other);
    bool contains(const std::string& name) const { return arity_.count(name) != 0; }
    std::optional<int> arity(const std::string& name) const;
    std::size_t size() const { return arity_.size(); }
    bool empty() const { return arity_.empty(); }
    // sorted by (arity, name)
    std::vector<Predicate> predicates() const;

    bool operator==(const Signature&) const = default;

private:
    std::map<std::string, int> arity_;
};

enum class Op { True, False, Atom, Not, And, Or, Implies, Iff, Forall, Exists };

// Immutable formula handle; copies share structure.
class Formula {
public:
    Formula();  // true

    static Formula top();
    static Formula bottom();
    static Formula atom(std::string pred, std::vector<int> args);
    static Formula negation(Formula f);
    static Formula conjunction(std::vector<Formula> fs);
    static Formula disjunction(std::vector<Formula> fs);
    static Formula implies(Formula a, Formula b);
    static Formula iff(Formula a, Formula b);
    static Formula forall(int var, Formula body);
    static Formula exists(int var, Formula body);

    Op op() const { return node_->op; }
    const std::string& pred() const { return node_->pred; }
    const std::vector<int>& args() const { return node_->args; }
    int var() const { return node_->var; }
    const std::vector<Formula>& children() const { return node_->kids; }
    const Formula& child(std::size_t i) const { return node_->kids.at(i); }
    const Formula& body() const { return node_->kids.at(0); }
    bool is_quantifier() const { return op() == Op::Forall || op() == Op::Exists; }
    // stable address of the shared node; used as a cache key
    const void* id() const { return node_.get(); }

    friend bool operator==(const Formula& a, const Formula& b);

private:
    struct Node {
        Op op = Op::True;
        std::string pred;
        std::vector<int> args;
        int var = 0;
        std::vector<Formula> kids;
    };
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Formula make(Node n);

    std::shared_ptr<const Node> node_;
};

// Folding builders: constants are simplified away, singleton And/Or collapse,
// empty And is true and empty Or is false.
Formula mk_not(const Formula& f);
Formula mk_and(std::vector<Formula> fs);
Formula mk_or(std::vector<Formula> fs);
Formula mk_implies(const Formula& a, const Formula& b);
Formula mk_iff(const Formula& a, const Formula& b);
Formula mk_forall(int var, const Formula& body);
Formula mk_exists(int var, const Formula& body);

struct Violation {
    std::string path;  // dot separated child indices, "" for the root
    std::string reason;
};

struct FlutedReport {
    bool is_fluted = false;
    std::optional<int> level;
    int width = 0;
    std::vector<Violation> violations;
};

Signature infer_signature(const Formula& f);
FlutedReport fluted_status(const Formula& f);
int width(const Formula& f);
std::set<int> free_variables(const Formula& f);
// number of nodes
std::size_t formula_size(const Formula& f);

}  // namespace fluted
