#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "strew/cond.hpp"
#include "strew/strategy.hpp"
#include "strew/term.hpp"

namespace strew {

struct Equation {
  TermRef lhs = nullptr;
  TermRef rhs = nullptr;
  std::vector<CondFrag> cond;
  bool owise = false;
  std::string label;
};

struct Rule {
  std::string label;  // empty for unlabeled rules
  TermRef lhs = nullptr;
  TermRef rhs = nullptr;
  std::vector<CondFrag> cond;
  bool nonexec = false;
};

// strat name : S1 ... Sn @ Subject .
struct StrategyDecl {
  std::string name;
  std::vector<SortId> arg_sorts;
  SortId subject_sort = kNoSort;
};

// sd name(P1, ..., Pn) := Body .   /  csd ... := Body if C .
struct StrategyDef {
  std::string name;
  std::vector<TermRef> params;  // argument patterns
  StratRef body = nullptr;
  std::vector<CondFrag> cond;
};

// A flattened module: imports have already been folded in by the parser, so
// everything (sorts, ops, statements) lives in one signature and one store.
struct Module {
  std::string name;
  enum class Kind { Functional, System, Strategy } kind = Kind::Functional;

  Signature sig;
  std::unique_ptr<TermStore> terms;
  std::unique_ptr<StrategyStore> strats;

  std::vector<Equation> equations;
  std::vector<Rule> rules;
  std::vector<StrategyDecl> strat_decls;
  std::vector<StrategyDef> strat_defs;

  // variable aliases visible in this module (import closure, later
  // declarations shadow earlier ones)
  std::unordered_map<std::string, SortId> var_scope;

  Module() = default;
  Module(const Module&) = delete;
  Module& operator=(const Module&) = delete;

  bool has_rule_label(const std::string& label) const {
    for (const auto& r : rules)
      if (r.label == label) return true;
    return false;
  }
  const StrategyDecl* find_strat_decl(const std::string& name) const {
    for (const auto& d : strat_decls)
      if (d.name == name) return &d;
    return nullptr;
  }
  const StrategyDecl* find_strat_decl(const std::string& name,
                                      size_t arity) const {
    for (const auto& d : strat_decls)
      if (d.name == name && d.arg_sorts.size() == arity) return &d;
    return nullptr;
  }
};

}  // namespace strew
