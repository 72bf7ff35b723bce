#include "fluted/sat.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fluted {

void Cnf::add(std::vector<int> clause) {
    for (int l : clause) {
        if (l == 0) throw std::invalid_argument("literal 0 in clause");
        num_vars = std::max(num_vars, l < 0 ? -l : l);
    }
    clauses.push_back(std::move(clause));
}

namespace {

// internal literal code: 2*(v-1) + (negative ? 1 : 0)
inline int code(int lit) { return lit > 0 ? 2 * (lit - 1) : 2 * (-lit - 1) + 1; }
inline int neg(int c) { return c ^ 1; }
inline int var_of(int c) { return c >> 1; }

class Dpll {
public:
    Dpll(const Cnf& f, SatStats* st) : n_(f.num_vars), stats_(st) {
        value_.assign(static_cast<std::size_t>(n_), -1);
        watches_.resize(static_cast<std::size_t>(2 * n_));
        load(f);
    }

    std::optional<SatAssignment> run() {
        if (unsat_) return std::nullopt;
        fix_pure_literals();
        if (unsat_ || propagate()) return std::nullopt;
        if (probe_failed_literals()) return std::nullopt;
        for (;;) {
            int v = next_unassigned();
            if (v < 0) break;
            if (stats_) ++stats_->decisions;
            levels_.push_back({trail_.size(), 2 * v, false});
            assign(2 * v);
            while (propagate()) {
                if (stats_) ++stats_->conflicts;
                while (!levels_.empty() && levels_.back().flipped) {
                    undo_to(levels_.back().trail_start);
                    levels_.pop_back();
                }
                if (levels_.empty()) return std::nullopt;
                Level& top = levels_.back();
                undo_to(top.trail_start);
                top.flipped = true;
                top.decision = neg(top.decision);
                assign(top.decision);
            }
        }
        SatAssignment a;
        a.values.resize(static_cast<std::size_t>(n_));
        for (int v = 0; v < n_; ++v) a.values[static_cast<std::size_t>(v)] = value_[v] == 1;
        return a;
    }

private:
    struct Level {
        std::size_t trail_start;
        int decision;
        bool flipped;
    };

    void load(const Cnf& f) {
        std::vector<int> c;
        std::vector<char> occurs(static_cast<std::size_t>(n_), 0);
        for (const auto& clause : f.clauses) {
            c.clear();
            for (int l : clause) {
                c.push_back(code(l));
                occurs[static_cast<std::size_t>(var_of(code(l)))] = 1;
            }
            std::sort(c.begin(), c.end());
            c.erase(std::unique(c.begin(), c.end()), c.end());
            bool taut = false;
            for (std::size_t i = 1; i < c.size(); ++i)
                if (var_of(c[i]) == var_of(c[i - 1])) taut = true;
            if (taut) continue;
            if (c.empty()) {
                unsat_ = true;
                return;
            }
            if (c.size() == 1) {
                units_.push_back(c[0]);
                continue;
            }
            int id = static_cast<int>(clauses_.size());
            literals_ += c.size();
            clauses_.push_back(c);
            watches_[static_cast<std::size_t>(c[0])].push_back(id);
            watches_[static_cast<std::size_t>(c[1])].push_back(id);
        }
        // variables no clause mentions stay false
        for (int v = 0; v < n_; ++v)
            if (!occurs[static_cast<std::size_t>(v)]) assign(2 * v + 1);
        for (int u : units_) {
            int val = lit_value(u);
            if (val == 0) {
                unsat_ = true;
                return;
            }
            if (val < 0) assign(u);
        }
    }

    // 1 true, 0 false, -1 unassigned
    int lit_value(int c) const {
        int v = value_[static_cast<std::size_t>(var_of(c))];
        if (v < 0) return -1;
        return (c & 1) ? 1 - v : v;
    }

    void assign(int c) {
        value_[static_cast<std::size_t>(var_of(c))] = (c & 1) ? 0 : 1;
        trail_.push_back(c);
    }

    void undo_to(std::size_t size) {
        while (trail_.size() > size) {
            int v = var_of(trail_.back());
            value_[static_cast<std::size_t>(v)] = -1;
            if (v < scan_) scan_ = v;
            trail_.pop_back();
        }
        qhead_ = trail_.size();
    }

    int next_unassigned() {
        while (scan_ < n_ && value_[static_cast<std::size_t>(scan_)] >= 0) ++scan_;
        return scan_ < n_ ? scan_ : -1;
    }

    // returns true on conflict
    bool propagate() {
        while (qhead_ < trail_.size()) {
            int falsified = neg(trail_[qhead_++]);
            auto& ws = watches_[static_cast<std::size_t>(falsified)];
            std::size_t keep = 0;
            for (std::size_t wi = 0; wi < ws.size(); ++wi) {
                int id = ws[wi];
                auto& c = clauses_[static_cast<std::size_t>(id)];
                if (c[0] == falsified) std::swap(c[0], c[1]);
                if (lit_value(c[0]) == 1) {
                    ws[keep++] = id;
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < c.size(); ++k) {
                    if (lit_value(c[k]) != 0) {
                        std::swap(c[1], c[k]);
                        watches_[static_cast<std::size_t>(c[1])].push_back(id);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[keep++] = id;
                if (lit_value(c[0]) == 0) {
                    for (std::size_t r = wi + 1; r < ws.size(); ++r) ws[keep++] = ws[r];
                    ws.resize(keep);
                    qhead_ = trail_.size();
                    return true;
                }
                if (stats_) ++stats_->propagations;
                assign(c[0]);
            }
            ws.resize(keep);
        }
        return false;
    }

    // Root-level pure literals, iterated until no clause set change.
    void fix_pure_literals() {
        std::vector<char> sat(clauses_.size(), 0);
        for (;;) {
            std::vector<char> occ(static_cast<std::size_t>(2 * n_), 0);
            for (std::size_t i = 0; i < clauses_.size(); ++i) {
                if (sat[i]) continue;
                for (int l : clauses_[i])
                    if (lit_value(l) == 1) sat[i] = 1;
                if (sat[i]) continue;
                for (int l : clauses_[i])
                    if (lit_value(l) < 0) occ[static_cast<std::size_t>(l)] = 1;
            }
            bool changed = false;
            for (int v = 0; v < n_; ++v) {
                if (value_[static_cast<std::size_t>(v)] >= 0) continue;
                bool pos = occ[static_cast<std::size_t>(2 * v)];
                bool negv = occ[static_cast<std::size_t>(2 * v + 1)];
                if (pos != negv) {
                    assign(pos ? 2 * v : 2 * v + 1);
                    changed = true;
                }
            }
            if (!changed) return;
            if (propagate()) {
                unsat_ = true;
                return;
            }
        }
    }

    // Root-level failed literals: if asserting l propagates to a conflict, ~l
    // holds in every model. Repeated until a pass fixes nothing. Without it the
    // chronological search re-refutes the same root contradiction under every
    // unrelated decision above it. True on unsatisfiability. The work is
    // capped by assignments made while probing, since on wide encodings one
    // probe can touch most of the formula.
    bool probe_failed_literals() {
        std::size_t budget = std::max<std::size_t>(std::size_t{1} << 24, 32 * literals_);
        bool changed = true;
        while (changed) {
            changed = false;
            for (int v = 0; v < n_; ++v) {
                if (value_[static_cast<std::size_t>(v)] >= 0) continue;
                for (int c : {2 * v, 2 * v + 1}) {
                    const std::size_t mark = trail_.size();
                    assign(c);
                    bool conflict = propagate();
                    const std::size_t spent = trail_.size() - mark;
                    if (spent >= budget) {
                        undo_to(mark);
                        scan_ = 0;
                        return false;
                    }
                    budget -= spent;
                    undo_to(mark);
                    if (!conflict) continue;
                    assign(neg(c));
                    if (propagate()) return true;
                    changed = true;
                    break;
                }
            }
        }
        scan_ = 0;
        return false;
    }

    int n_;
    std::size_t literals_ = 0;
    SatStats* stats_;
    bool unsat_ = false;
    std::vector<int> value_;
    std::vector<std::vector<int>> clauses_;
    std::vector<std::vector<int>> watches_;
    std::vector<int> units_;
    std::vector<int> trail_;
    std::vector<Level> levels_;
    std::size_t qhead_ = 0;
    int scan_ = 0;
};

}  // namespace

std::optional<SatAssignment> solve(const Cnf& f, SatStats* stats) { return Dpll(f, stats).run(); }

bool satisfies(const Cnf& f, const SatAssignment& a) {
    for (const auto& c : f.clauses) {
        bool ok = false;
        for (int l : c)
            if (a.literal(l)) {
                ok = true;
                break;
            }
        if (!ok) return false;
    }
    return true;
}

std::string to_dimacs(const Cnf& f) {
    std::ostringstream out;
    out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
    for (const auto& c : f.clauses) {
        for (int l : c) out << l << ' ';
        out << "0\n";
    }
    return out.str();
}

}  // namespace fluted
