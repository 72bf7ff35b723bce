#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fluted/fl3.hpp"
#include "fluted/formula.hpp"
#include "fluted/normal_form.hpp"
#include "fluted/structure.hpp"

namespace fluted {

struct ReduceOptions {
    std::size_t max_universals = 12;  // 2^t guard subsets are enumerated
};

// Fresh predicate names used by reduce_once; the suffix is only added when the
// plain name is already taken.
std::string existential_guard_name(std::size_t i, std::uint32_t subset, std::size_t t,
                                   const std::string& suffix = "");
std::string universal_guard_name(std::uint32_t subset, std::size_t t,
                                 const std::string& suffix = "");

// Width-m normal form (m >= 4, proposition free) to an equisatisfiable one of
// width m-1 without the arity-m predicates.
NormalForm reduce_once(const NormalForm& nf, const ReduceOptions& opts = {});

// Model of nf from a model of reduce_once(nf); the domain grows by max(s,1).
Structure lift_model(const NormalForm& nf, const Structure& reduced_model);

struct DecideOptions {
    Fl3Options fl3;
    ReduceOptions reduce;
    int jobs = 1;  // proposition branches decided in parallel
};

struct DecideResult {
    bool sat = false;
    // interprets exactly the signature of the input sentence
    std::optional<Structure> model;
    Strategy strategy = Strategy::Auto;
    std::vector<int> levels;   // widths along the reduction chain of the deciding branch
    std::size_t branches = 0;  // proposition branches examined
    Fl3Stats stats;
};

// Full pipeline for a fluted sentence of any width.
DecideResult decide(const Formula& sentence, const DecideOptions& opts = {});

}  // namespace fluted
