#include "strew/parser.hpp"

namespace strew {

namespace {

bool is_single(char c) {
  return c == '(' || c == ')' || c == '[' || c == ']' || c == '{' ||
         c == '}' || c == ',';
}

}  // namespace

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  const size_t n = src.size();

  auto advance = [&](size_t k) {
    for (size_t j = 0; j < k && i < n; ++j, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < n) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    // comments: "***(" opens a balanced block, "***" / "---" run to newline
    if (src.compare(i, 4, "***(") == 0) {
      advance(4);
      int depth = 1;
      while (i < n && depth > 0) {
        if (src[i] == '(') ++depth;
        if (src[i] == ')') --depth;
        advance(1);
      }
      continue;
    }
    if (src.compare(i, 3, "***") == 0 || src.compare(i, 3, "---") == 0) {
      while (i < n && src[i] != '\n') advance(1);
      continue;
    }
    if (is_single(c)) {
      out.push_back({std::string(1, c), line, col});
      advance(1);
      continue;
    }
    // a word: everything up to whitespace or a single-char token
    int tl = line, tc = col;
    size_t start = i;
    while (i < n) {
      char d = src[i];
      if (d == ' ' || d == '\t' || d == '\r' || d == '\n' || is_single(d))
        break;
      advance(1);
    }
    out.push_back({src.substr(start, i - start), tl, tc});
  }
  return out;
}

}  // namespace strew
