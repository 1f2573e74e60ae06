#pragma once

#include <stdexcept>
#include <string>

namespace strew {

// Parse-time failure: carries a 1-based source position when known.
struct ParseError : std::runtime_error {
  ParseError(std::string msg, int line = 0, int col = 0)
      : std::runtime_error(pos_prefix(line, col) + msg), line(line), col(col) {}
  int line, col;

 private:
  static std::string pos_prefix(int line, int col) {
    if (line <= 0) return "";
    return "line " + std::to_string(line) + ":" + std::to_string(col) + ": ";
  }
};

// Evaluation failure that is the user's fault (unbound variable in a
// condition, strategy call to an undeclared name, ...).
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured resource limit was exceeded.
struct LimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace strew
