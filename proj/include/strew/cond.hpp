#pragma once

#include "strew/term.hpp"

namespace strew {

// One fragment of a statement condition, the conjuncts of
//   ... if F1 /\ F2 /\ ... /\ Fn
// Fragments are solved left to right; assignment and rewrite fragments may
// bind new variables for the fragments to their right.
struct CondFrag {
  enum class Kind : uint8_t {
    Bool,      // T          -- T reduces to true
    Equal,     // L = R      -- both sides reduce to the same term
    Assign,    // P := T     -- P matches the reduced T
    SortTest,  // T : Sort   -- reduced T has the given sort or less
    Rewrite,   // L => R     -- some term reachable from L matches R
  };
  Kind kind;
  TermRef lhs = nullptr;
  TermRef rhs = nullptr;   // Equal/Assign/Rewrite
  SortId sort = kNoSort;   // SortTest
};

}  // namespace strew
