#pragma once

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "strew/parser.hpp"

namespace strew::testutil {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// One database with the whole corpus loaded, shared across test cases
// (modules never change once built).
inline ModuleDb& corpus() {
  static ModuleDb* db = [] {
    auto* d = new ModuleDb();
    for (const char* f : {"puzzle.maude", "blackboard.maude", "queens.maude",
                          "diverge.maude", "puzzle_pairs.maude",
                          "micro.maude"})
      d->load(read_file(std::string(STREW_CORPUS_DIR) + "/" + f));
    return d;
  }();
  return *db;
}

inline TermRef term(Module& m, const std::string& text) {
  return parse_term(m, lex(text));
}

inline TermRef var_of(Module& m, const std::string& name) {
  auto it = m.var_scope.find(name);
  REQUIRE_MESSAGE(it != m.var_scope.end(), "no var " << name << " in scope");
  return m.terms->var(name, it->second);
}

}  // namespace strew::testutil
