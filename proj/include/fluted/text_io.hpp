#pragma once

#include <string>
#include <string_view>

#include "fluted/formula.hpp"
#include "fluted/structure.hpp"

namespace fluted {

Formula parse_formula(std::string_view text);
std::string render_formula(const Formula& f);
// TPTP FOF, one annotated formula
std::string render_formula_tptp(const Formula& f, const std::string& name = "phi");

Structure parse_structure(std::string_view text);
std::string render_structure(const Structure& s);

}  // namespace fluted
