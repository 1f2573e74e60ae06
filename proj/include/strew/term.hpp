#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "strew/diag.hpp"

namespace strew {

using SortId = int32_t;
using KindId = int32_t;
using SymbolId = int32_t;
inline constexpr SortId kNoSort = -1;

// Built-in operations. Succ and Neg fold into numeral payloads during
// canonicalization; the rest fire during equational normalization and count
// as rewrites, like ordinary equations.
enum class Builtin : uint8_t {
  None,
  Succ,
  Neg,
  Plus,
  Minus,
  Quo,
  Less,
  LessEq,
  Greater,
  GreaterEq,
  EqEq,
  NotEq,
  BoolAnd,
  BoolOr,
  BoolNot,
  AndThen,
  OrElse,
  IfThenElse,
};

struct SortInfo {
  std::string name;
  KindId kind = -1;
  bool is_error = false;  // synthesized kind-level sort, e.g. "[Puzzle]"
};

struct TermNode;
using TermRef = const TermNode*;

struct OpDeclSig {
  std::vector<SortId> args;
  SortId result;
};

struct Symbol {
  std::string name;  // mixfix text: "size", "_;_", "<_|_>", "__", "s_"
  int arity = 0;
  std::vector<OpDeclSig> decls;  // subsort-overloaded declarations
  bool assoc = false;
  bool comm = false;
  bool ctor = false;
  TermRef identity = nullptr;  // resolved after the signature is frozen
  int prec = 0;
  Builtin builtin = Builtin::None;
  KindId result_kind = -1;
  std::vector<KindId> arg_kinds;
  // Mixfix pieces: empty string is an argument slot. A symbol whose name has
  // no underscores uses function-call syntax instead ("size(R)").
  std::vector<std::string> pieces;
  bool function_form = false;
};

// Order-sorted signature: sorts with a subsort preorder, kinds as connected
// components, and operators grouped into symbols by (name, arity, kinds).
class Signature {
 public:
  SortId add_sort(const std::string& name);  // idempotent
  SortId find_sort(const std::string& name) const;  // kNoSort when absent
  void add_subsort(SortId sub, SortId super);

  // Computes the subsort closure, kinds and per-kind error sorts. Sorts and
  // subsorts may not change afterwards; operators are declared after freezing
  // (their argument kinds must be known).
  void freeze();
  bool frozen() const { return frozen_; }

  bool sort_leq(SortId a, SortId b) const;
  KindId kind_of(SortId s) const { return sorts_[s].kind; }
  SortId error_sort(KindId k) const { return kind_error_sort_[k]; }
  int kind_count() const { return static_cast<int>(kind_error_sort_.size()); }

  const SortInfo& sort(SortId s) const { return sorts_[s]; }
  int sort_count() const { return static_cast<int>(sorts_.size()); }

  // Symbols are keyed by (name, arity, argument kinds, result kind):
  // subsort-overloaded declarations merge into one symbol, distinct-kind
  // overloads (e.g. two `nil` constants) stay apart.
  SymbolId declare_op(const std::string& name, const std::vector<SortId>& args,
                      SortId result);
  Symbol& symbol(SymbolId s) { return symbols_[s]; }
  const Symbol& symbol(SymbolId s) const { return symbols_[s]; }
  int symbol_count() const { return static_cast<int>(symbols_.size()); }
  // result_kind < 0: any result kind (first match wins)
  SymbolId find_symbol(const std::string& name, int arity,
                       const std::vector<KindId>& arg_kinds,
                       KindId result_kind = -1) const;
  const std::vector<SymbolId>* symbols_named(const std::string& name) const;

  // Least result sort for the symbol applied to arguments of these sorts;
  // falls back to the kind error sort when no declaration applies.
  SortId result_sort(SymbolId sym, const std::vector<SortId>& arg_sorts) const;
  SortId binary_result_sort(SymbolId sym, SortId a, SortId b) const;

 private:
  std::vector<SortInfo> sorts_;
  std::unordered_map<std::string, SortId> sort_by_name_;
  std::vector<std::pair<SortId, SortId>> subsort_edges_;
  std::vector<std::vector<bool>> leq_;  // leq_[a][b]: a <= b (after freeze)
  std::vector<SortId> kind_error_sort_;
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, std::vector<SymbolId>> symbols_by_name_;
  bool frozen_ = false;
};

struct TermNode {
  enum class Tag : uint8_t { Var, App, Num, Qid };
  Tag tag;
  bool ground;
  SortId sort;  // least sort (declared sort for variables)
  uint64_t hash;
  int size;  // total node count
  // Var and Qid payload ('left keeps its quote in name):
  std::string name;
  // App payload:
  SymbolId sym = -1;
  std::vector<TermRef> args;
  // Num payload:
  long long value = 0;

  bool is_var() const { return tag == Tag::Var; }
  bool is_app() const { return tag == Tag::App; }
  bool is_num() const { return tag == Tag::Num; }
  bool is_qid() const { return tag == Tag::Qid; }
};

// Total structural order on canonical terms; commutative argument lists are
// kept sorted by it. Numerals < quoted ids < variables < applications.
int term_compare(TermRef a, TermRef b);

// Hash-consing store: structurally equal canonical terms share one node, so
// node identity is equality modulo the structural axioms. app() canonicalizes:
// associative arguments are flattened, identity elements removed (an emptied
// argument list collapses to the identity element), commutative argument
// lists sorted, and s_/-_ applied to numerals folded into the payload.
class TermStore {
 public:
  explicit TermStore(const Signature& sig);

  TermRef var(const std::string& name, SortId sort);
  TermRef num(long long v);
  TermRef qid(const std::string& text);
  TermRef app(SymbolId sym, std::vector<TermRef> args);

  // The hole of a context, one per kind. A context is an ordinary term with
  // exactly one hole in it.
  TermRef hole(KindId kind);
  bool is_hole(TermRef t) const;

  const Signature& sig() const { return sig_; }

  // Sorts a numeral lands in; resolved lazily so stores can be created before
  // arithmetic modules are imported.
  SortId numeral_sort(long long v) const;

 private:
  struct NodeHash {
    size_t operator()(TermRef t) const { return t->hash; }
  };
  struct NodeEq {
    bool operator()(TermRef a, TermRef b) const;
  };

  TermRef intern(TermNode&& n);

  const Signature& sig_;
  std::deque<TermNode> nodes_;
  std::unordered_set<TermRef, NodeHash, NodeEq> index_;
};

// Immutable variable binding, kept sorted by term_compare on the variable so
// equal substitutions have equal representations.
class Subst {
 public:
  Subst() = default;

  TermRef get(TermRef var) const;
  bool bound(TermRef var) const { return get(var) != nullptr; }
  bool empty() const { return items_.empty(); }
  size_t size() const { return items_.size(); }

  // Extends with a new binding; the variable must be unbound.
  Subst with(TermRef var, TermRef value) const;
  // Extends or replaces.
  Subst with_override(TermRef var, TermRef value) const;
  // This substitution extended by every binding of `over` (bindings shared by
  // both must agree; `over` wins).
  Subst merged(const Subst& over) const;

  const std::vector<std::pair<TermRef, TermRef>>& items() const {
    return items_;
  }
  bool operator==(const Subst& o) const { return items_ == o.items_; }
  uint64_t hash() const;

 private:
  std::vector<std::pair<TermRef, TermRef>> items_;
};

// Applies a substitution, re-canonicalizing along the way.
TermRef apply_subst(TermStore& store, const Subst& s, TermRef t);

// Replaces the hole of `context` by `filling`.
TermRef plug(TermStore& store, TermRef context, TermRef filling);

void collect_vars(TermRef t, std::vector<TermRef>& out);
bool contains_node(TermRef t, TermRef needle);

}  // namespace strew
