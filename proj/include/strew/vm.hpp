#pragma once

#include <memory>
#include <optional>

#include "strew/engine.hpp"

namespace strew {

// The strategy expression with the given bindings substituted into its terms
// and nested strategies. match/matchrew pattern variables (and variables
// bound by their conditions) shadow outer bindings and are left alone.
StratRef instantiate_strategy(Module& m, StratRef s, const Subst& subst);

// Strategy-controlled rewriting: enumerates the results of applying a
// strategy to a subject term. The search state is a set of processes, each a
// (term, continuation stack) pair; combinators that must observe a whole
// sub-search (conditionals, one, matchrew subterm rewriting, rewriting
// conditions of rules) group processes under tasks that collect the
// sub-search's results and react when it is exhausted.
//
// fair = true serves processes round-robin (srewrite): a divergent branch
// cannot starve the others. fair = false serves newest work first, diving
// depth-first (dsrewrite).
class StrategySearch {
 public:
  StrategySearch(Engine& eng, TermRef subject, StratRef strat, bool fair);
  ~StrategySearch();

  // Next distinct result term; nullopt once the search space is exhausted.
  // Incremental: keeps its state so callers can resume (`continue`).
  std::optional<TermRef> next();

  // Scheduler quanta served so far (a rough size-of-search statistic).
  long long quanta() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace strew
