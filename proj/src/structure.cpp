#include "fluted/structure.hpp"

#include <algorithm>

namespace fluted {

Structure::Structure(int domain_size) : n_(domain_size) {
    if (domain_size < 1) throw Error("domain must be nonempty");
}

Relation& Structure::declare(const std::string& name, int arity) {
    auto it = rels_.find(name);
    if (it != rels_.end()) {
        if (it->second.arity != arity)
            throw ArityConflict("relation '" + name + "' redeclared with another arity");
        return it->second;
    }
    std::uint64_t cells = 1;
    for (int i = 0; i < arity; ++i) {
        cells *= static_cast<std::uint64_t>(n_);
        if (cells > kMaxCells)
            throw CapExceeded("relation '" + name + "' too large for domain " +
                              std::to_string(n_));
    }
    Relation r;
    r.arity = arity;
    r.bits.assign(cells, 0);
    return rels_.emplace(name, std::move(r)).first->second;
}

std::uint64_t Structure::index(std::span<const int> tuple) const {
    std::uint64_t idx = 0;
    for (int a : tuple) {
        if (a < 0 || a >= n_) throw Error("element " + std::to_string(a) + " outside domain");
        idx = idx * static_cast<std::uint64_t>(n_) + static_cast<std::uint64_t>(a);
    }
    return idx;
}

void Structure::set(const std::string& name, std::span<const int> tuple, bool value) {
    Relation& r = declare(name, static_cast<int>(tuple.size()));
    r.bits[index(tuple)] = value ? 1 : 0;
}

bool Structure::holds(const std::string& name, std::span<const int> tuple) const {
    auto it = rels_.find(name);
    if (it == rels_.end()) return false;
    if (it->second.arity != static_cast<int>(tuple.size()))
        throw ArityConflict("relation '" + name + "' queried with wrong arity");
    return it->second.bits[index(tuple)] != 0;
}

const Relation* Structure::relation(const std::string& name) const {
    auto it = rels_.find(name);
    return it == rels_.end() ? nullptr : &it->second;
}

Relation* Structure::relation(const std::string& name) {
    auto it = rels_.find(name);
    return it == rels_.end() ? nullptr : &it->second;
}

std::vector<std::string> Structure::predicate_names() const {
    std::vector<std::string> out;
    for (const auto& [n, r] : rels_) out.push_back(n);
    return out;
}

bool operator==(const Relation& a, const Relation& b) {
    return a.arity == b.arity && a.bits == b.bits;
}

namespace {
bool all_false(const Relation& r) {
    return std::all_of(r.bits.begin(), r.bits.end(), [](std::uint8_t b) { return b == 0; });
}
}  // namespace

bool Structure::operator==(const Structure& o) const {
    if (n_ != o.n_) return false;
    for (const auto& [name, r] : rels_) {
        const Relation* q = o.relation(name);
        if (q ? !(*q == r) : !all_false(r)) return false;
    }
    for (const auto& [name, r] : o.rels_)
        if (!relation(name) && !all_false(r)) return false;
    return true;
}

}  // namespace fluted
