#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace fluted {

// Variables are 1..num_vars; a literal is +v or -v.
struct Cnf {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;

    int new_var() { return ++num_vars; }
    void add(std::vector<int> clause);
    void add(std::initializer_list<int> clause) { add(std::vector<int>(clause)); }
};

struct SatAssignment {
    std::vector<bool> values;  // values[v-1]

    bool operator[](int v) const { return values.at(static_cast<std::size_t>(v - 1)); }
    bool literal(int lit) const { return lit > 0 ? (*this)[lit] : !(*this)[-lit]; }
};

struct SatStats {
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t conflicts = 0;
};

// DPLL: unit propagation over watched literals, pure literals fixed up front,
// branching on the lowest unassigned variable with true first. Variables no
// clause mentions are false.
std::optional<SatAssignment> solve(const Cnf& f, SatStats* stats = nullptr);

bool satisfies(const Cnf& f, const SatAssignment& a);
std::string to_dimacs(const Cnf& f);

}  // namespace fluted
