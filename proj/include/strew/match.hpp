#pragma once

#include <vector>

#include "strew/term.hpp"

namespace strew {

// Matching modulo the structural axioms (assoc/comm/identity) carried by the
// symbols of the signature. Subjects are expected to be canonical (they come
// out of the TermStore); patterns too, which means associative arguments are
// already flattened and explicit identity elements already stripped.
//
// `init` is a partial substitution the match must extend (used for rule
// applications with an explicit substitution and for condition fragments).

// All matches of `pattern` against the whole of `subject`.
std::vector<Subst> match_top(TermStore& ts, TermRef subject, TermRef pattern,
                             const Subst& init = {});

// A match together with the surrounding context: a term with a single hole
// whose plug() with the rewritten piece rebuilds the full subject.
struct MatchResult {
  Subst subst;
  TermRef context;
};

// Matches at the top of `subject`, including matches "with extension": when
// the subject's head symbol is associative, the pattern may cover a proper
// sub-list (contiguous window) or sub-multiset of at least two arguments,
// the remainder staying in the context. Plain whole-term matches come first
// with a bare-hole context.
std::vector<MatchResult> match_with_extension(TermStore& ts, TermRef subject,
                                              TermRef pattern,
                                              const Subst& init = {});

// Matches at every position of `subject`: for each node (children before the
// node itself, left to right) all matches-with-extension at that node, with
// contexts composed to full-subject contexts.
std::vector<MatchResult> match_anywhere(TermStore& ts, TermRef subject,
                                        TermRef pattern,
                                        const Subst& init = {});

}  // namespace strew
