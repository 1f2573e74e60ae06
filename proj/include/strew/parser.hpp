#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "strew/module.hpp"

namespace strew {

struct Token {
  std::string text;
  int line = 0;
  int col = 0;
};

// Whitespace-splitting lexer. Parentheses, brackets, braces and commas become
// single-character tokens; everything else is a word. `***`/`---` start a
// line comment, `***(` a balanced block comment. A lone `.` ends a statement.
std::vector<Token> lex(const std::string& src);

// ---------------------------------------------------------------------------
// Raw per-module syntax. Declarations are structured immediately; statements
// are kept as token spans and resolved against the flattened signature when
// the module is built.

struct OpSyntax {
  std::string name;  // mixfix text, underscores for slots
  std::vector<std::string> arg_sorts;
  std::string result_sort;
  bool assoc = false;
  bool comm = false;
  bool ctor = false;
  int prec = -1;                  // -1: unspecified
  std::vector<Token> id_toks;     // id: <term>, resolved after all ops exist
};

struct VarSyntax {
  std::string name;
  std::string sort;
};

struct StratDeclSyntax {
  std::vector<std::string> names;
  std::vector<std::string> arg_sorts;
  std::string subject_sort;
};

struct StmtSyntax {
  enum class Kind { Eq, Rule, StratDef };
  Kind kind;
  bool conditional = false;
  std::vector<Token> toks;  // span after the keyword, '.' excluded
};

struct ModuleSyntax {
  std::string name;
  Module::Kind kind = Module::Kind::Functional;
  std::vector<std::string> imports;
  std::vector<std::string> sorts;
  std::vector<std::pair<std::string, std::string>> subsorts;  // sub < super
  std::vector<OpSyntax> ops;
  std::vector<VarSyntax> vars;
  std::vector<StratDeclSyntax> strat_decls;
  std::vector<StmtSyntax> stmts;
};

// ---------------------------------------------------------------------------
// Module database: raw syntax for everything that has been loaded, flattened
// modules built on demand. The Maude prelude fragments the interpreter
// supports (BOOL, NAT, INT, QID, EXT-BOOL, LIST{Qid}, LIST{Nat}, SET{Nat})
// are preregistered; BOOL is imported implicitly by every module.
class ModuleDb {
 public:
  ModuleDb();

  // Parses fmod/mod/smod blocks out of `source` and registers them.
  void load(const std::string& source);

  Module& get(const std::string& name);
  bool has(const std::string& name) const;

  // User modules in the order they were loaded (preludes excluded).
  const std::vector<std::string>& load_order() const { return load_order_; }

 private:
  void register_module(ModuleSyntax syn);
  void closure(const std::string& name, std::vector<const ModuleSyntax*>& out,
               std::vector<std::string>& seen) const;
  std::unique_ptr<Module> build(const ModuleSyntax& syn);
  void resolve_statement(Module& m, const StmtSyntax& st);

  std::unordered_map<std::string, ModuleSyntax> syntax_;
  std::unordered_map<std::string, std::unique_ptr<Module>> built_;
  std::vector<std::string> load_order_;
};

// ---------------------------------------------------------------------------
// Parsing of terms, conditions and strategy expressions against a flattened
// module (used internally when building modules, and by the command line for
// the spans of interactive commands).

TermRef parse_term(Module& m, const std::vector<Token>& toks,
                   SortId expected = kNoSort);
std::vector<CondFrag> parse_condition(Module& m,
                                      const std::vector<Token>& toks);
StratRef parse_strategy(Module& m, const std::vector<Token>& toks);

// ---------------------------------------------------------------------------
// Interactive commands. Parsing splits the command structurally; the term and
// strategy spans are resolved later against the selected module.

struct Command {
  enum class Kind {
    Reduce,     // reduce <term> .
    Rewrite,    // rewrite [n] <term> .
    Search,     // search [n] <term> =>* <pattern> [such that <cond>] .
    SRewrite,   // srewrite [n] <term> using <strategy> .
    DSRewrite,  // dsrewrite [n] <term> using <strategy> .
    Continue,   // continue [n] .
    Load,       // load <path>
    Select,     // select <module> .
    ShowModule, // show module .
    Quit,
    Noop,
  };
  Kind kind = Kind::Noop;
  long long bound = -1;  // [n] if given
  std::string module_name;  // "in MOD :" if given
  std::string path;         // load
  enum class Arrow { Star, Plus, Bang } arrow = Arrow::Star;  // search
  std::vector<Token> subject;
  std::vector<Token> pattern;   // search
  std::vector<Token> cond;      // search such-that
  std::vector<Token> strategy;  // srewrite/dsrewrite
};

Command parse_command(const std::vector<Token>& toks);

}  // namespace strew
