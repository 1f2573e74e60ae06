#pragma once

#include <string>

#include "strew/module.hpp"

namespace strew {

// Term output in the surface syntax, inserting parentheses only where the
// operator precedences require them.
std::string print_term(const Module& m, TermRef t);

// `Sort: term` as used in result lines.
std::string print_sorted_term(const Module& m, TermRef t);

std::string print_strategy(const Module& m, StratRef s);

std::string print_condition(const Module& m, const std::vector<CondFrag>& c);

}  // namespace strew
