#include <algorithm>
#include <cassert>

#include "parse_internal.hpp"
#include "strew/parser.hpp"

namespace strew {

using detail::Toks;
using detail::npos;
using detail::find_top;
using detail::rfind_top;
using detail::slice;
using detail::split_top;
using detail::take_sort_name;

namespace {

// The prelude fragments the interpreter knows how to evaluate. Numerals are
// handled natively (0, s 0, s s 0, ... print and parse as decimal literals),
// so the numeric modules only declare the symbolic operators.
const char* kPrelude = R"MAUDE(
fmod BOOL is
  sort Bool .
  op true : -> Bool [ctor] .
  op false : -> Bool [ctor] .
  op _and_ : Bool Bool -> Bool [assoc comm prec 55] .
  op _or_ : Bool Bool -> Bool [assoc comm prec 59] .
  op not_ : Bool -> Bool [prec 53] .
endfm

fmod EXT-BOOL is
  protecting BOOL .
  op _and-then_ : Bool Bool -> Bool [prec 55] .
  op _or-else_ : Bool Bool -> Bool [prec 59] .
endfm

fmod NAT is
  protecting BOOL .
  sorts Zero NzNat Nat .
  subsorts Zero NzNat < Nat .
  op s_ : Nat -> NzNat [ctor prec 15] .
  op _+_ : NzNat Nat -> NzNat [assoc comm prec 33] .
  op _+_ : Nat NzNat -> NzNat [assoc comm prec 33] .
  op _+_ : Nat Nat -> Nat [assoc comm prec 33] .
  op _quo_ : Nat NzNat -> Nat [prec 31] .
  op _<_ : Nat Nat -> Bool [prec 37] .
  op _<=_ : Nat Nat -> Bool [prec 37] .
  op _>_ : Nat Nat -> Bool [prec 37] .
  op _>=_ : Nat Nat -> Bool [prec 37] .
endfm

fmod INT is
  protecting NAT .
  sorts NzInt Int .
  subsorts NzNat < NzInt Nat < Int .
  subsort NzInt < Int .
  op -_ : NzInt -> NzInt [ctor prec 15] .
  op -_ : Int -> Int [prec 15] .
  op _+_ : Int Int -> Int [assoc comm prec 33] .
  op _-_ : Int Int -> Int [prec 33] .
  op _quo_ : Int NzInt -> Int [prec 31] .
  op _<_ : Int Int -> Bool [prec 37] .
  op _<=_ : Int Int -> Bool [prec 37] .
  op _>_ : Int Int -> Bool [prec 37] .
  op _>=_ : Int Int -> Bool [prec 37] .
endfm

fmod QID is
  sort Qid .
endfm

fmod LIST{Qid} is
  protecting QID .
  protecting NAT .
  sorts NeList{Qid} List{Qid} .
  subsorts Qid < NeList{Qid} < List{Qid} .
  op nil : -> List{Qid} [ctor] .
  op __ : List{Qid} List{Qid} -> List{Qid} [ctor assoc id: nil prec 25] .
  op __ : NeList{Qid} List{Qid} -> NeList{Qid} [ctor assoc id: nil prec 25] .
  op __ : List{Qid} NeList{Qid} -> NeList{Qid} [ctor assoc id: nil prec 25] .
  op size : List{Qid} -> Nat .
  op size : NeList{Qid} -> NzNat .
  var E : Qid .
  var L : List{Qid} .
  eq size(nil) = 0 .
  eq size(E L) = size(L) + 1 .
endfm

fmod LIST{Nat} is
  protecting NAT .
  sorts NeList{Nat} List{Nat} .
  subsorts Nat < NeList{Nat} < List{Nat} .
  op nil : -> List{Nat} [ctor] .
  op __ : List{Nat} List{Nat} -> List{Nat} [ctor assoc id: nil prec 25] .
  op __ : NeList{Nat} List{Nat} -> NeList{Nat} [ctor assoc id: nil prec 25] .
  op __ : List{Nat} NeList{Nat} -> NeList{Nat} [ctor assoc id: nil prec 25] .
  op size : List{Nat} -> Nat .
  op size : NeList{Nat} -> NzNat .
  var E : Nat .
  var L : List{Nat} .
  eq size(nil) = 0 .
  eq size(E L) = size(L) + 1 .
endfm

fmod SET{Nat} is
  protecting NAT .
  sorts NeSet{Nat} Set{Nat} .
  subsorts Nat < NeSet{Nat} < Set{Nat} .
  op empty : -> Set{Nat} [ctor] .
  op _,_ : Set{Nat} Set{Nat} -> Set{Nat} [ctor assoc comm id: empty prec 121] .
  op _,_ : NeSet{Nat} Set{Nat} -> NeSet{Nat} [ctor assoc comm id: empty prec 121] .
  var N : Nat .
  var S : Set{Nat} .
  eq N, N, S = N, S .
endfm
)MAUDE";

const std::unordered_map<std::string, Builtin>& builtin_table() {
  static const std::unordered_map<std::string, Builtin> table = {
      {"s_", Builtin::Succ},           {"-_", Builtin::Neg},
      {"_+_", Builtin::Plus},          {"_-_", Builtin::Minus},
      {"_quo_", Builtin::Quo},         {"_<_", Builtin::Less},
      {"_<=_", Builtin::LessEq},       {"_>_", Builtin::Greater},
      {"_>=_", Builtin::GreaterEq},    {"_and_", Builtin::BoolAnd},
      {"_or_", Builtin::BoolOr},       {"not_", Builtin::BoolNot},
      {"_and-then_", Builtin::AndThen}, {"_or-else_", Builtin::OrElse},
  };
  return table;
}

[[noreturn]] void fail(const Token& at, const std::string& msg) {
  throw ParseError(msg, at.line, at.col);
}

bool is_attr_keyword(const std::string& t) {
  return t == "assoc" || t == "associative" || t == "comm" ||
         t == "commutative" || t == "ctor" || t == "prec" || t == "id:" ||
         t == "]";
}

void parse_op_decl(const Toks& span, ModuleSyntax& ms, bool multi) {
  size_t colon = find_top(span, ":", 1);
  if (colon == npos) fail(span[0], "missing ':' in op declaration");
  std::vector<std::string> names;
  if (multi) {
    for (size_t i = 1; i < colon; ++i) names.push_back(span[i].text);
  } else {
    // the lexer gives brackets and commas their own tokens; a single op name
    // is everything up to the lone ':' glued back together (e.g. `_,_`)
    std::string name;
    for (size_t i = 1; i < colon; ++i) name += span[i].text;
    if (!name.empty()) names.push_back(std::move(name));
  }
  if (names.empty()) fail(span[0], "op declaration without a name");

  OpSyntax proto;
  size_t i = colon + 1;
  size_t arrow = find_top(span, "->", i);
  if (arrow == npos) fail(span[colon], "missing '->' in op declaration");
  while (i < arrow) proto.arg_sorts.push_back(take_sort_name(span, i));
  i = arrow + 1;
  proto.result_sort = take_sort_name(span, i);

  if (i < span.size()) {
    if (span[i].text != "[") fail(span[i], "expected '[' or end of op");
    ++i;
    while (i < span.size() && span[i].text != "]") {
      const std::string& a = span[i].text;
      if (a == "assoc" || a == "associative") {
        proto.assoc = true;
        ++i;
      } else if (a == "comm" || a == "commutative") {
        proto.comm = true;
        ++i;
      } else if (a == "ctor") {
        proto.ctor = true;
        ++i;
      } else if (a == "prec") {
        if (i + 1 >= span.size() || !detail::is_numeral(span[i + 1].text))
          fail(span[i], "prec needs a number");
        proto.prec = std::stoi(span[i + 1].text);
        i += 2;
      } else if (a == "id:") {
        ++i;
        int depth = 0;
        while (i < span.size() &&
               (depth > 0 || !is_attr_keyword(span[i].text))) {
          depth += detail::depth_delta(span[i].text);
          proto.id_toks.push_back(span[i]);
          ++i;
        }
        if (proto.id_toks.empty()) fail(span[0], "id: without a term");
      } else {
        fail(span[i], "unsupported operator attribute '" + a + "'");
      }
    }
    if (i >= span.size()) fail(span.back(), "unterminated attribute list");
    ++i;
    if (i != span.size()) fail(span[i], "trailing tokens after op attributes");
  }

  for (const auto& n : names) {
    OpSyntax op = proto;
    op.name = n;
    ms.ops.push_back(std::move(op));
  }
}

void parse_strat_decl(const Toks& span, ModuleSyntax& ms) {
  size_t at = find_top(span, "@", 1);
  if (at == npos) fail(span[0], "missing '@' in strat declaration");
  size_t colon = find_top(span, ":", 1);
  StratDeclSyntax d;
  size_t names_end = (colon != npos && colon < at) ? colon : at;
  for (size_t i = 1; i < names_end; ++i) d.names.push_back(span[i].text);
  if (d.names.empty()) fail(span[0], "strat declaration without a name");
  if (colon != npos && colon < at) {
    size_t i = colon + 1;
    while (i < at) d.arg_sorts.push_back(take_sort_name(span, i));
  }
  size_t i = at + 1;
  d.subject_sort = take_sort_name(span, i);
  if (i != span.size()) fail(span[i], "trailing tokens in strat declaration");
  ms.strat_decls.push_back(std::move(d));
}

void parse_var_decl(const Toks& span, ModuleSyntax& ms) {
  size_t colon = find_top(span, ":", 1);
  if (colon == npos) fail(span[0], "missing ':' in var declaration");
  size_t i = colon + 1;
  std::string sort = take_sort_name(span, i);
  if (i != span.size()) fail(span[i], "trailing tokens in var declaration");
  for (size_t j = 1; j < colon; ++j)
    ms.vars.push_back(VarSyntax{span[j].text, sort});
}

void parse_subsort_decl(const Toks& span, ModuleSyntax& ms) {
  auto groups = split_top(slice(span, 1, span.size()), "<");
  if (groups.size() < 2) fail(span[0], "subsort declaration without '<'");
  std::vector<std::vector<std::string>> named;
  for (auto& g : groups) {
    std::vector<std::string> names;
    size_t i = 0;
    while (i < g.size()) names.push_back(take_sort_name(g, i));
    if (names.empty()) fail(span[0], "empty group in subsort declaration");
    named.push_back(std::move(names));
  }
  for (size_t k = 0; k + 1 < named.size(); ++k)
    for (const auto& sub : named[k])
      for (const auto& super : named[k + 1])
        ms.subsorts.emplace_back(sub, super);
}

ModuleSyntax parse_module_block(const Toks& toks, size_t& i) {
  const std::string& kw = toks[i].text;
  ModuleSyntax ms;
  std::string endkw;
  if (kw == "fmod") {
    ms.kind = Module::Kind::Functional;
    endkw = "endfm";
  } else if (kw == "mod") {
    ms.kind = Module::Kind::System;
    endkw = "endm";
  } else if (kw == "smod") {
    ms.kind = Module::Kind::Strategy;
    endkw = "endsm";
  } else {
    fail(toks[i], "expected fmod, mod or smod");
  }
  ++i;
  if (i >= toks.size()) fail(toks.back(), "missing module name");
  {
    // instantiated names like LIST{Qid} lex as several tokens; rejoin them
    Toks rest = slice(toks, i, toks.size());
    size_t j = 0;
    ms.name = take_sort_name(rest, j);
    i += j;
  }
  if (ms.name.find("::") != std::string::npos)
    fail(toks[i - 1],
         "parameterized modules are not supported; write an instantiated "
         "copy instead");
  if (i >= toks.size() || toks[i].text != "is")
    fail(toks[i - 1], "expected 'is' after module name");
  ++i;

  while (true) {
    if (i >= toks.size()) fail(toks.back(), "missing " + endkw);
    if (toks[i].text == endkw) {
      ++i;
      break;
    }
    size_t start = i;
    while (i < toks.size() && toks[i].text != "." && toks[i].text != endkw) ++i;
    if (i >= toks.size() || toks[i].text != ".")
      fail(toks[start], "statement without terminating '.'");
    Toks span = slice(toks, start, i);
    ++i;
    if (span.empty()) fail(toks[start], "empty statement");

    const std::string& head = span[0].text;
    if (head == "protecting" || head == "pr" || head == "including" ||
        head == "inc" || head == "extending" || head == "ex") {
      size_t j = 1;
      ms.imports.push_back(take_sort_name(span, j));
      if (j != span.size()) fail(span[j], "trailing tokens in import");
    } else if (head == "sort" || head == "sorts") {
      size_t j = 1;
      while (j < span.size()) ms.sorts.push_back(take_sort_name(span, j));
    } else if (head == "subsort" || head == "subsorts") {
      parse_subsort_decl(span, ms);
    } else if (head == "op") {
      parse_op_decl(span, ms, false);
    } else if (head == "ops") {
      parse_op_decl(span, ms, true);
    } else if (head == "var" || head == "vars") {
      parse_var_decl(span, ms);
    } else if (head == "strat" || head == "strats") {
      parse_strat_decl(span, ms);
    } else if (head == "eq" || head == "ceq") {
      ms.stmts.push_back(
          {StmtSyntax::Kind::Eq, head == "ceq", slice(span, 1, span.size())});
    } else if (head == "rl" || head == "crl") {
      ms.stmts.push_back(
          {StmtSyntax::Kind::Rule, head == "crl", slice(span, 1, span.size())});
    } else if (head == "sd" || head == "csd") {
      ms.stmts.push_back({StmtSyntax::Kind::StratDef, head == "csd",
                          slice(span, 1, span.size())});
    } else {
      fail(span[0], "unknown declaration '" + head + "'");
    }
  }
  return ms;
}

// Trailing "[owise nonexec label foo ...]" block of a statement.
struct StmtAttrs {
  bool owise = false;
  bool nonexec = false;
  std::string label;
};

StmtAttrs strip_stmt_attrs(Toks& toks) {
  StmtAttrs out;
  if (toks.empty() || toks.back().text != "]") return out;
  // find the matching '['
  int depth = 0;
  size_t open = npos;
  for (size_t i = toks.size(); i-- > 0;) {
    if (toks[i].text == "]") ++depth;
    if (toks[i].text == "[") {
      --depth;
      if (depth == 0) {
        open = i;
        break;
      }
    }
  }
  if (open == npos) fail(toks.back(), "unbalanced ']' in statement");
  // A statement may legitimately end in a bracket term (say, a [_,_,_]
  // tuple); only strip the block when everything in it is an attribute.
  for (size_t i = open + 1; i + 1 < toks.size(); ++i) {
    const std::string& a = toks[i].text;
    if (a == "owise" || a == "otherwise" || a == "nonexec") continue;
    if (a == "label" || a == "metadata" || a == "print") {
      ++i;
      continue;
    }
    return out;
  }
  for (size_t i = open + 1; i + 1 < toks.size(); ++i) {
    const std::string& a = toks[i].text;
    if (a == "owise" || a == "otherwise") {
      out.owise = true;
    } else if (a == "nonexec") {
      out.nonexec = true;
    } else if (a == "label") {
      if (i + 2 >= toks.size()) fail(toks[i], "label without a name");
      out.label = toks[i + 1].text;
      ++i;
    } else {  // metadata/print take one argument we don't keep
      ++i;
    }
  }
  toks.resize(open);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

ModuleDb::ModuleDb() {
  Toks toks = lex(kPrelude);
  size_t i = 0;
  while (i < toks.size()) {
    ModuleSyntax ms = parse_module_block(toks, i);
    std::string name = ms.name;
    syntax_.emplace(std::move(name), std::move(ms));
  }
}

void ModuleDb::register_module(ModuleSyntax syn) {
  std::string name = syn.name;
  bool fresh = !syntax_.count(name);
  syntax_[name] = std::move(syn);
  built_.clear();  // a redefined module invalidates everything downstream
  if (fresh) load_order_.push_back(name);
}

void ModuleDb::load(const std::string& source) {
  Toks toks = lex(source);
  size_t i = 0;
  while (i < toks.size()) register_module(parse_module_block(toks, i));
}

bool ModuleDb::has(const std::string& name) const {
  return syntax_.count(name) != 0;
}

void ModuleDb::closure(const std::string& name,
                       std::vector<const ModuleSyntax*>& out,
                       std::vector<std::string>& seen) const {
  if (std::find(seen.begin(), seen.end(), name) != seen.end()) return;
  seen.push_back(name);
  auto it = syntax_.find(name);
  if (it == syntax_.end())
    throw ParseError("unknown module '" + name + "'", 0, 0);
  if (name != "BOOL") closure("BOOL", out, seen);  // implicit everywhere
  for (const auto& imp : it->second.imports) closure(imp, out, seen);
  out.push_back(&it->second);
}

Module& ModuleDb::get(const std::string& name) {
  auto it = built_.find(name);
  if (it != built_.end()) return *it->second;
  auto sit = syntax_.find(name);
  if (sit == syntax_.end())
    throw ParseError("unknown module '" + name + "'", 0, 0);
  // building: insert a placeholder first? no -- detect cycles via the
  // closure walk instead (closure() recursion is acyclic or throws below)
  auto mod = build(sit->second);
  Module& ref = *mod;
  built_.emplace(name, std::move(mod));
  return ref;
}

std::unique_ptr<Module> ModuleDb::build(const ModuleSyntax& syn) {
  auto mod = std::make_unique<Module>();
  Module& m = *mod;
  m.name = syn.name;
  m.kind = syn.kind;

  std::vector<const ModuleSyntax*> parts;
  std::vector<std::string> seen;
  closure(syn.name, parts, seen);

  // sorts, subsorts, kinds
  for (const auto* p : parts)
    for (const auto& s : p->sorts) m.sig.add_sort(s);
  for (const auto* p : parts)
    for (const auto& [sub, super] : p->subsorts) {
      SortId a = m.sig.find_sort(sub);
      SortId b = m.sig.find_sort(super);
      if (a == kNoSort || b == kNoSort)
        throw ParseError("unknown sort in subsort declaration of " + p->name +
                             ": " + (a == kNoSort ? sub : super),
                         0, 0);
      m.sig.add_subsort(a, b);
    }
  m.sig.freeze();
  m.terms = std::make_unique<TermStore>(m.sig);
  m.strats = std::make_unique<StrategyStore>();

  // operators
  for (const auto* p : parts)
    for (const auto& op : p->ops) {
      std::vector<SortId> args;
      for (const auto& s : op.arg_sorts) {
        SortId a = m.sig.find_sort(s);
        if (a == kNoSort)
          throw ParseError("unknown sort '" + s + "' in op " + op.name +
                               " of " + p->name,
                           0, 0);
        args.push_back(a);
      }
      SortId res = m.sig.find_sort(op.result_sort);
      if (res == kNoSort)
        throw ParseError("unknown sort '" + op.result_sort + "' in op " +
                             op.name + " of " + p->name,
                         0, 0);
      SymbolId id = m.sig.declare_op(op.name, args, res);
      Symbol& sym = m.sig.symbol(id);
      if (op.assoc) sym.assoc = true;
      if (op.comm) sym.comm = true;
      if (op.ctor) sym.ctor = true;
      if (op.prec >= 0) {
        sym.prec = op.prec;
      } else if (sym.decls.size() == 1 && !sym.function_form) {
        // default precedence: closed mixfix binds like a primary
        bool closed = !sym.pieces.front().empty() && !sym.pieces.back().empty();
        sym.prec = closed ? 0 : 41;
      }
    }

  // builtin tags (needed before any term is built so numerals fold)
  for (SymbolId i = 0; i < m.sig.symbol_count(); ++i) {
    auto it = builtin_table().find(m.sig.symbol(i).name);
    if (it != builtin_table().end()) m.sig.symbol(i).builtin = it->second;
  }

  // kind-polymorphic operators
  SortId bool_sort = m.sig.find_sort("Bool");
  assert(bool_sort != kNoSort);
  for (KindId k = 0; k < m.sig.kind_count(); ++k) {
    SortId e = m.sig.error_sort(k);
    SymbolId eq = m.sig.declare_op("_==_", {e, e}, bool_sort);
    m.sig.symbol(eq).builtin = Builtin::EqEq;
    m.sig.symbol(eq).prec = 51;
    SymbolId ne = m.sig.declare_op("_=/=_", {e, e}, bool_sort);
    m.sig.symbol(ne).builtin = Builtin::NotEq;
    m.sig.symbol(ne).prec = 51;
    SymbolId ite = m.sig.declare_op("if_then_else_fi", {bool_sort, e, e}, e);
    m.sig.symbol(ite).builtin = Builtin::IfThenElse;
  }

  // variable aliases (later declarations shadow earlier ones)
  for (const auto* p : parts)
    for (const auto& v : p->vars) {
      SortId s = m.sig.find_sort(v.sort);
      if (s == kNoSort)
        throw ParseError(
            "unknown sort '" + v.sort + "' for var " + v.name + " of " + p->name,
            0, 0);
      m.var_scope[v.name] = s;
    }

  // identity elements (all operators must exist first)
  for (const auto* p : parts)
    for (const auto& op : p->ops) {
      if (op.id_toks.empty()) continue;
      std::vector<KindId> kinds;
      for (const auto& s : op.arg_sorts)
        kinds.push_back(m.sig.kind_of(m.sig.find_sort(s)));
      SortId res = m.sig.find_sort(op.result_sort);
      SymbolId id = m.sig.find_symbol(op.name, (int)op.arg_sorts.size(), kinds,
                                      m.sig.kind_of(res));
      assert(id >= 0);
      m.sig.symbol(id).identity = parse_term(m, op.id_toks, res);
    }

  // strategy declarations
  for (const auto* p : parts)
    for (const auto& d : p->strat_decls)
      for (const auto& nm : d.names) {
        StrategyDecl decl;
        decl.name = nm;
        for (const auto& s : d.arg_sorts) {
          SortId a = m.sig.find_sort(s);
          if (a == kNoSort)
            throw ParseError("unknown sort '" + s + "' in strat " + nm, 0, 0);
          decl.arg_sorts.push_back(a);
        }
        decl.subject_sort = m.sig.find_sort(d.subject_sort);
        if (decl.subject_sort == kNoSort)
          throw ParseError(
              "unknown subject sort '" + d.subject_sort + "' in strat " + nm, 0,
              0);
        m.strat_decls.push_back(std::move(decl));
      }

  // statements: imported modules contribute their already-resolved
  // statements (translated into this module's stores); our own statement
  // spans are parsed here.
  for (const auto* p : parts) {
    if (p == &syn) {
      for (const auto& st : p->stmts) resolve_statement(m, st);
      continue;
    }
    Module& src = get(p->name);
    for (const auto& e : src.equations)
      m.equations.push_back(Equation{detail::copy_term(m, src.sig, e.lhs),
                                     detail::copy_term(m, src.sig, e.rhs),
                                     detail::copy_cond(m, src, e.cond), e.owise,
                                     e.label});
    for (const auto& r : src.rules)
      m.rules.push_back(Rule{r.label, detail::copy_term(m, src.sig, r.lhs),
                             detail::copy_term(m, src.sig, r.rhs),
                             detail::copy_cond(m, src, r.cond), r.nonexec});
    for (const auto& d : src.strat_defs) {
      StrategyDef def;
      def.name = d.name;
      for (TermRef t : d.params)
        def.params.push_back(detail::copy_term(m, src.sig, t));
      def.body = detail::copy_strat(m, src, d.body);
      def.cond = detail::copy_cond(m, src, d.cond);
      m.strat_defs.push_back(std::move(def));
    }
  }

  return mod;
}

// defined below, after the statement resolvers
void ModuleDb::resolve_statement(Module& m, const StmtSyntax& st) {
  Toks toks = st.toks;
  StmtAttrs attrs = strip_stmt_attrs(toks);

  switch (st.kind) {
    case StmtSyntax::Kind::Eq: {
      std::vector<CondFrag> cond;
      if (st.conditional) {
        size_t ifpos = rfind_top(toks, "if");
        if (ifpos == npos) fail(toks[0], "ceq without 'if'");
        cond = parse_condition(m, slice(toks, ifpos + 1, toks.size()));
        toks.resize(ifpos);
      }
      size_t eqpos = find_top(toks, "=");
      if (eqpos == npos) fail(toks[0], "equation without '='");
      TermRef lhs = parse_term(m, slice(toks, 0, eqpos));
      TermRef rhs = parse_term(m, slice(toks, eqpos + 1, toks.size()),
                               lhs->sort);
      m.equations.push_back(Equation{lhs, rhs, std::move(cond), attrs.owise,
                                     attrs.label});
      break;
    }
    case StmtSyntax::Kind::Rule: {
      std::string label = attrs.label;
      size_t i = 0;
      if (!toks.empty() && toks[0].text == "[") {
        if (toks.size() < 4 || toks[2].text != "]" || toks[3].text != ":")
          fail(toks[0], "malformed rule label");
        label = toks[1].text;
        i = 4;
      }
      Toks body = slice(toks, i, toks.size());
      std::vector<CondFrag> cond;
      if (st.conditional) {
        size_t ifpos = rfind_top(body, "if");
        if (ifpos == npos) fail(body[0], "crl without 'if'");
        cond = parse_condition(m, slice(body, ifpos + 1, body.size()));
        body.resize(ifpos);
      }
      size_t arrow = find_top(body, "=>");
      if (arrow == npos) fail(body[0], "rule without '=>'");
      TermRef lhs = parse_term(m, slice(body, 0, arrow));
      TermRef rhs =
          parse_term(m, slice(body, arrow + 1, body.size()), lhs->sort);
      m.rules.push_back(Rule{label, lhs, rhs, std::move(cond), attrs.nonexec});
      break;
    }
    case StmtSyntax::Kind::StratDef: {
      std::vector<CondFrag> cond;
      if (st.conditional) {
        size_t ifpos = rfind_top(toks, "if");
        if (ifpos == npos) fail(toks[0], "csd without 'if'");
        cond = parse_condition(m, slice(toks, ifpos + 1, toks.size()));
        toks.resize(ifpos);
      }
      size_t defpos = find_top(toks, ":=");
      if (defpos == npos) fail(toks[0], "strategy definition without ':='");
      Toks head = slice(toks, 0, defpos);
      if (head.empty()) fail(toks[0], "strategy definition without a name");
      StrategyDef def;
      def.name = head[0].text;
      if (head.size() > 1) {
        if (head[1].text != "(" || head.back().text != ")")
          fail(head[1], "malformed strategy definition head");
        Toks argspan = slice(head, 2, head.size() - 1);
        if (!argspan.empty())
          for (const auto& arg : split_top(argspan, ","))
            def.params.push_back(parse_term(m, arg));
      }
      const StrategyDecl* decl = m.find_strat_decl(def.name, def.params.size());
      if (!decl)
        fail(head[0], "strategy definition for undeclared strategy '" +
                          def.name + "' with " +
                          std::to_string(def.params.size()) + " argument(s)");
      def.body = parse_strategy(m, slice(toks, defpos + 1, toks.size()));
      def.cond = std::move(cond);
      m.strat_defs.push_back(std::move(def));
      break;
    }
  }
}

// ---------------------------------------------------------------------------
// statement translation between modules

namespace detail {

TermRef copy_term(Module& dst, const Signature& src_sig, TermRef t) {
  switch (t->tag) {
    case TermNode::Tag::Num:
      return dst.terms->num(t->value);
    case TermNode::Tag::Qid:
      return dst.terms->qid(t->name);
    case TermNode::Tag::Var: {
      SortId s = dst.sig.find_sort(src_sig.sort(t->sort).name);
      if (s == kNoSort)
        throw ParseError("cannot translate variable sort for " + t->name, 0, 0);
      return dst.terms->var(t->name, s);
    }
    case TermNode::Tag::App: {
      std::vector<TermRef> args;
      args.reserve(t->args.size());
      for (TermRef a : t->args) args.push_back(copy_term(dst, src_sig, a));
      const Symbol& sym = src_sig.symbol(t->sym);
      // Kind error sorts are named after the kind's maximal sorts, which can
      // differ between modules; translate through a user sort of the kind.
      auto dst_kind = [&](SortId src_sort) -> KindId {
        const SortInfo& si = src_sig.sort(src_sort);
        std::string name = si.name;
        if (si.is_error)
          for (int i = 0; i < src_sig.sort_count(); ++i)
            if (src_sig.sort(i).kind == si.kind && !src_sig.sort(i).is_error) {
              name = src_sig.sort(i).name;
              break;
            }
        SortId d = dst.sig.find_sort(name);
        if (d == kNoSort)
          throw ParseError("cannot translate sort " + name, 0, 0);
        return dst.sig.kind_of(d);
      };
      std::vector<KindId> kinds;
      for (SortId a : sym.decls[0].args) kinds.push_back(dst_kind(a));
      KindId rk = dst_kind(sym.decls[0].result);
      SymbolId id = dst.sig.find_symbol(sym.name, sym.arity, kinds, rk);
      if (id < 0)
        throw ParseError("cannot translate operator " + sym.name, 0, 0);
      return dst.terms->app(id, std::move(args));
    }
  }
  return nullptr;  // unreachable
}

std::vector<CondFrag> copy_cond(Module& dst, const Module& src,
                                const std::vector<CondFrag>& cond) {
  std::vector<CondFrag> out;
  out.reserve(cond.size());
  for (const auto& f : cond) {
    CondFrag g;
    g.kind = f.kind;
    if (f.lhs) g.lhs = copy_term(dst, src.sig, f.lhs);
    if (f.rhs) g.rhs = copy_term(dst, src.sig, f.rhs);
    if (f.sort != kNoSort)
      g.sort = dst.sig.find_sort(src.sig.sort(f.sort).name);
    out.push_back(g);
  }
  return out;
}

StratRef copy_strat(Module& dst, const Module& src, StratRef s) {
  StrategyStore& S = *dst.strats;
  auto ct = [&](TermRef t) { return copy_term(dst, src.sig, t); };
  auto cs = [&](StratRef x) { return copy_strat(dst, src, x); };
  switch (s->kind) {
    case StratKind::Idle:
      return S.idle();
    case StratKind::Fail:
      return S.fail();
    case StratKind::RuleApp: {
      std::vector<std::pair<TermRef, TermRef>> subst;
      for (const auto& [v, t] : s->subst) subst.emplace_back(ct(v), ct(t));
      std::vector<StratRef> kids;
      for (StratRef c : s->children) kids.push_back(cs(c));
      return S.rule_app(s->name, std::move(subst), std::move(kids), s->top);
    }
    case StratKind::All:
      return S.all();
    case StratKind::Test:
      return S.test(s->mode, ct(s->pattern), copy_cond(dst, src, s->cond));
    case StratKind::MatchRew: {
      std::vector<std::pair<TermRef, StratRef>> pairs;
      for (const auto& [v, st] : s->using_pairs)
        pairs.emplace_back(ct(v), cs(st));
      return S.match_rew(s->mode, ct(s->pattern), copy_cond(dst, src, s->cond),
                         std::move(pairs));
    }
    case StratKind::Seq:
      return S.seq(cs(s->children[0]), cs(s->children[1]));
    case StratKind::Alt:
      return S.alt(cs(s->children[0]), cs(s->children[1]));
    case StratKind::Star:
      return S.star(cs(s->children[0]));
    case StratKind::Cond:
      return S.cond(cs(s->children[0]), cs(s->children[1]), cs(s->children[2]));
    case StratKind::One:
      return S.one(cs(s->children[0]));
    case StratKind::Call: {
      std::vector<TermRef> args;
      for (TermRef a : s->call_args) args.push_back(ct(a));
      return S.call(s->name, std::move(args));
    }
  }
  return nullptr;  // unreachable
}

}  // namespace detail

}  // namespace strew
