#pragma once

// Helpers shared by the module, term and strategy parsers.

#include <string>
#include <vector>

#include "strew/parser.hpp"

namespace strew::detail {

using Toks = std::vector<Token>;

inline constexpr size_t npos = static_cast<size_t>(-1);

inline int depth_delta(const std::string& t) {
  if (t == "(" || t == "[" || t == "{") return 1;
  if (t == ")" || t == "]" || t == "}") return -1;
  return 0;
}

inline size_t find_top(const Toks& toks, const std::string& word,
                       size_t from = 0) {
  int depth = 0;
  for (size_t i = from; i < toks.size(); ++i) {
    if (depth == 0 && toks[i].text == word) return i;
    depth += depth_delta(toks[i].text);
  }
  return npos;
}

inline size_t rfind_top(const Toks& toks, const std::string& word) {
  int depth = 0;
  size_t found = npos;
  for (size_t i = 0; i < toks.size(); ++i) {
    if (depth == 0 && toks[i].text == word) found = i;
    depth += depth_delta(toks[i].text);
  }
  return found;
}

inline Toks slice(const Toks& t, size_t b, size_t e) {
  return Toks(t.begin() + static_cast<long>(b), t.begin() + static_cast<long>(e));
}

inline std::vector<Toks> split_top(const Toks& toks, const std::string& sep) {
  std::vector<Toks> out;
  size_t start = 0;
  int depth = 0;
  for (size_t i = 0; i < toks.size(); ++i) {
    if (depth == 0 && toks[i].text == sep) {
      out.push_back(slice(toks, start, i));
      start = i + 1;
    }
    depth += depth_delta(toks[i].text);
  }
  out.push_back(slice(toks, start, toks.size()));
  return out;
}

inline bool is_numeral(const std::string& s) {
  size_t i = (s.size() > 1 && s[0] == '-') ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

// Sort names like List{Nat} arrive split into `List` `{` `Nat` `}`; rejoin
// them in contexts where a sort name is expected. Advances `i`.
inline std::string take_sort_name(const Toks& toks, size_t& i) {
  if (i >= toks.size())
    throw ParseError("expected a sort name", toks.empty() ? 0 : toks.back().line,
                     toks.empty() ? 0 : toks.back().col);
  std::string name = toks[i].text;
  ++i;
  if (i < toks.size() && toks[i].text == "{") {
    int depth = 0;
    do {
      name += toks[i].text;
      depth += depth_delta(toks[i].text);
      ++i;
    } while (i < toks.size() && depth > 0);
  }
  return name;
}

// Copies of statements parsed in an imported module into an importing one.
TermRef copy_term(Module& dst, const Signature& src_sig, TermRef t);
StratRef copy_strat(Module& dst, const Module& src, StratRef s);
std::vector<CondFrag> copy_cond(Module& dst, const Module& src,
                                const std::vector<CondFrag>& cond);

}  // namespace strew::detail
