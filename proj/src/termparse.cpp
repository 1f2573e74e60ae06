#include <algorithm>
#include <unordered_map>

#include "parse_internal.hpp"
#include "strew/parser.hpp"

namespace strew {

using detail::Toks;

namespace {

[[noreturn]] void fail(const Token& t, const std::string& msg) {
  throw ParseError(msg, t.line, t.col);
}

// Sort-independent parse tree. Mixfix shape does not depend on overload
// choice, so parsing happens first and operators are resolved bottom-up
// against the signature afterwards.
struct Raw {
  enum class K { Num, Qid, Var, App };
  K k = K::App;
  long long value = 0;
  std::string text;  // qid text / var name / operator name
  SortId var_sort = kNoSort;
  SortId cast_sort = kNoSort;  // (term).Sort disambiguation
  std::vector<Raw> args;
  int line = 0, col = 0;
};

using Stops = std::vector<std::string>;

bool stopped(const Stops& stops, const std::string& t) {
  return std::find(stops.begin(), stops.end(), t) != stops.end();
}

class TermParser {
 public:
  TermParser(Module& m, const Toks& toks) : m_(m), toks_(toks) {
    const Signature& sig = m.sig;
    for (SymbolId i = 0; i < sig.symbol_count(); ++i) {
      const Symbol& sym = sig.symbol(i);
      if (sym.function_form) continue;
      if (!sym.pieces.front().empty()) {
        nud_.emplace(sym.pieces.front(), i);  // s_, -_, not_, <_|_>, if_..._fi
      } else if (sym.pieces.size() >= 2) {
        if (sym.pieces[1].empty()) {
          if (juxt_prec_ < 0 || sym.prec < juxt_prec_) juxt_prec_ = sym.prec;
        } else {
          led_.emplace(sym.pieces[1], std::make_pair(sym.name, sym.prec));
        }
      }
    }
  }

  Raw parse_whole() {
    if (toks_.empty())
      throw ParseError("expected a term", 0, 0);
    Raw r = parse(-1, {});
    if (pos_ < toks_.size())
      fail(toks_[pos_], "unexpected '" + toks_[pos_].text + "' in term");
    return r;
  }

 private:
  static int bp(int prec) { return 1000 - prec; }  // smaller prec binds tighter

  bool at_end() const { return pos_ >= toks_.size(); }
  const Token& peek() const { return toks_[pos_]; }

  void expect(const std::string& what) {
    if (at_end())
      fail(toks_.back(), "expected '" + what + "' before end of term");
    if (toks_[pos_].text != what)
      fail(toks_[pos_], "expected '" + what + "', found '" + toks_[pos_].text +
                            "'");
    ++pos_;
  }

  bool can_start_term(const Token& t) const {
    const std::string& w = t.text;
    if (w == "(") return true;
    if (w == ")" || w == "]" || w == "}" || w == ",") return false;
    // an opener can begin a term when some mixfix operator starts with it,
    // e.g. [_,_,_]
    if ((w == "[" || w == "{") && !nud_.count(w)) return false;
    if (detail::is_numeral(w)) return true;
    if (w.size() > 1 && w[0] == '\'') return true;
    if (m_.var_scope.count(w)) return true;
    if (w.find(':') != std::string::npos && w[0] != ':') return true;
    if (nud_.count(w)) return true;
    if (m_.sig.symbols_named(w)) return true;
    return false;
  }

  Raw parse(int min_bp, const Stops& stops) {
    Raw left = nud(stops);
    while (!at_end()) {
      const Token& t = peek();
      if (stopped(stops, t.text)) break;
      auto led = led_.find(t.text);
      if (led != led_.end()) {
        int lbp = bp(led->second.second);
        if (lbp <= min_bp) break;
        ++pos_;
        Raw rhs = parse(lbp, stops);
        Raw app;
        app.k = Raw::K::App;
        app.text = led->second.first;
        app.line = t.line;
        app.col = t.col;
        app.args.push_back(std::move(left));
        app.args.push_back(std::move(rhs));
        left = std::move(app);
        continue;
      }
      if (juxt_prec_ >= 0 && can_start_term(t)) {
        int lbp = bp(juxt_prec_);
        if (lbp <= min_bp) break;
        Raw rhs = parse(lbp, stops);
        Raw app;
        app.k = Raw::K::App;
        app.text = "__";
        app.line = t.line;
        app.col = t.col;
        app.args.push_back(std::move(left));
        app.args.push_back(std::move(rhs));
        left = std::move(app);
        continue;
      }
      break;
    }
    return left;
  }

  Raw nud(const Stops& stops) {
    if (at_end())
      fail(toks_.back(), "unexpected end of term");
    const Token& t = toks_[pos_];
    const std::string& w = t.text;

    if (w == "(") {
      ++pos_;
      Raw r = parse(-1, {")"});
      expect(")");
      // sort qualification: (nil).List{Qid}
      if (!at_end() && peek().text.size() > 1 && peek().text[0] == '.') {
        const Token& q = peek();
        std::string sort = q.text.substr(1);
        ++pos_;
        if (!at_end() && peek().text == "{") {
          int depth = 0;
          do {
            sort += peek().text;
            depth += detail::depth_delta(peek().text);
            ++pos_;
          } while (!at_end() && depth > 0);
        }
        SortId s = m_.sig.find_sort(sort);
        if (s == kNoSort) fail(q, "unknown sort '" + sort + "'");
        r.cast_sort = s;
      }
      return r;
    }
    if (detail::is_numeral(w)) {
      ++pos_;
      Raw r;
      r.k = Raw::K::Num;
      r.value = std::stoll(w);
      r.line = t.line;
      r.col = t.col;
      return r;
    }
    if (w.size() > 1 && w[0] == '\'') {
      ++pos_;
      Raw r;
      r.k = Raw::K::Qid;
      r.text = w;
      r.line = t.line;
      r.col = t.col;
      return r;
    }
    // inline variable X:Sort (sort may continue with `{...}` tokens)
    size_t colon = w.find(':');
    if (colon != std::string::npos && colon > 0 && !m_.var_scope.count(w)) {
      ++pos_;
      std::string name = w.substr(0, colon);
      std::string sort = w.substr(colon + 1);
      if (!at_end() && peek().text == "{" && !sort.empty()) {
        int depth = 0;
        do {
          sort += peek().text;
          depth += detail::depth_delta(peek().text);
          ++pos_;
        } while (!at_end() && depth > 0);
      }
      SortId s = m_.sig.find_sort(sort);
      if (sort.empty() || s == kNoSort)
        fail(t, "unknown sort in variable '" + w + "'");
      Raw r;
      r.k = Raw::K::Var;
      r.text = name;
      r.var_sort = s;
      r.line = t.line;
      r.col = t.col;
      return r;
    }
    auto vit = m_.var_scope.find(w);
    if (vit != m_.var_scope.end()) {
      ++pos_;
      Raw r;
      r.k = Raw::K::Var;
      r.text = w;
      r.var_sort = vit->second;
      r.line = t.line;
      r.col = t.col;
      return r;
    }
    auto nit = nud_.find(w);
    if (nit != nud_.end()) return mixfix(nit->second, stops);
    if (m_.sig.symbols_named(w)) {
      ++pos_;
      Raw r;
      r.k = Raw::K::App;
      r.text = w;
      r.line = t.line;
      r.col = t.col;
      if (!at_end() && peek().text == "(") {
        ++pos_;
        if (!at_end() && peek().text == ")") {
          ++pos_;
        } else {
          while (true) {
            r.args.push_back(parse(-1, {",", ")"}));
            if (!at_end() && peek().text == ",") {
              ++pos_;
              continue;
            }
            expect(")");
            break;
          }
        }
      }
      return r;
    }
    fail(t, "cannot parse '" + w + "' as a term");
  }

  Raw mixfix(SymbolId sid, const Stops& stops) {
    const Symbol& sym = m_.sig.symbol(sid);
    const Token& t = toks_[pos_];
    ++pos_;  // leading literal
    Raw r;
    r.k = Raw::K::App;
    r.text = sym.name;
    r.line = t.line;
    r.col = t.col;
    for (size_t i = 1; i < sym.pieces.size(); ++i) {
      if (!sym.pieces[i].empty()) {
        expect(sym.pieces[i]);
        continue;
      }
      if (i + 1 < sym.pieces.size()) {
        // interior slot: the next literal terminates it
        r.args.push_back(parse(-1, {sym.pieces[i + 1]}));
      } else {
        // trailing slot of a prefix operator (s_, -_, not_)
        r.args.push_back(parse(bp(sym.prec), stops));
      }
    }
    return r;
  }

  Module& m_;
  const Toks& toks_;
  size_t pos_ = 0;
  int juxt_prec_ = -1;
  std::unordered_map<std::string, SymbolId> nud_;
  std::unordered_map<std::string, std::pair<std::string, int>> led_;
};

// ---------------------------------------------------------------------------
// bottom-up overload resolution

void cartesian(Module& m, SymbolId sid,
               const std::vector<std::vector<TermRef>>& sets, size_t i,
               std::vector<TermRef>& picked, std::vector<TermRef>& out) {
  if (i == sets.size()) {
    out.push_back(m.terms->app(sid, picked));
    return;
  }
  for (TermRef t : sets[i]) {
    picked.push_back(t);
    cartesian(m, sid, sets, i + 1, picked, out);
    picked.pop_back();
  }
}

std::vector<TermRef> resolve(Module& m, const Raw& r) {
  std::vector<TermRef> out;
  switch (r.k) {
    case Raw::K::Num:
      try {
        out.push_back(m.terms->num(r.value));
      } catch (const EvalError& e) {
        throw ParseError(e.what(), r.line, r.col);
      }
      break;
    case Raw::K::Qid:
      try {
        out.push_back(m.terms->qid(r.text));
      } catch (const EvalError& e) {
        throw ParseError(e.what(), r.line, r.col);
      }
      break;
    case Raw::K::Var:
      out.push_back(m.terms->var(r.text, r.var_sort));
      break;
    case Raw::K::App: {
      std::vector<std::vector<TermRef>> argsets;
      argsets.reserve(r.args.size());
      for (const Raw& a : r.args) argsets.push_back(resolve(m, a));
      const std::vector<SymbolId>* ids = m.sig.symbols_named(r.text);
      if (!ids) throw ParseError("unknown operator '" + r.text + "'", r.line,
                                 r.col);
      for (SymbolId sid : *ids) {
        const Symbol& sym = m.sig.symbol(sid);
        if (sym.arity != static_cast<int>(r.args.size())) continue;
        std::vector<std::vector<TermRef>> filtered(argsets.size());
        bool viable = true;
        for (size_t i = 0; i < argsets.size() && viable; ++i) {
          for (TermRef t : argsets[i])
            if (m.sig.kind_of(t->sort) == sym.arg_kinds[i])
              filtered[i].push_back(t);
          viable = !filtered[i].empty();
        }
        if (!viable) continue;
        std::vector<TermRef> picked;
        cartesian(m, sid, filtered, 0, picked, out);
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      // prefer well-sorted parses over kind-level (error sort) ones
      bool any_proper = false;
      for (TermRef t : out)
        if (!m.sig.sort(t->sort).is_error) any_proper = true;
      if (any_proper)
        out.erase(std::remove_if(out.begin(), out.end(),
                                 [&](TermRef t) {
                                   return m.sig.sort(t->sort).is_error;
                                 }),
                  out.end());
      if (out.empty())
        throw ParseError("no parse for operator '" + r.text +
                             "' with these arguments",
                         r.line, r.col);
      break;
    }
  }
  if (r.cast_sort != kNoSort) {
    out.erase(std::remove_if(out.begin(), out.end(),
                             [&](TermRef t) {
                               return !m.sig.sort_leq(t->sort, r.cast_sort);
                             }),
              out.end());
    if (out.empty())
      throw ParseError("term has no parse of sort " +
                           m.sig.sort(r.cast_sort).name,
                       r.line, r.col);
  }
  return out;
}

}  // namespace

TermRef parse_term(Module& m, const std::vector<Token>& toks, SortId expected) {
  TermParser tp(m, toks);
  Raw raw = tp.parse_whole();
  std::vector<TermRef> set = resolve(m, raw);
  if (expected != kNoSort) {
    KindId k = m.sig.kind_of(expected);
    set.erase(std::remove_if(
                  set.begin(), set.end(),
                  [&](TermRef t) { return m.sig.kind_of(t->sort) != k; }),
              set.end());
    if (set.empty())
      fail(toks.front(), "term does not parse at the kind of sort " +
                             m.sig.sort(expected).name);
  }
  if (set.size() > 1) {
    std::string sorts;
    for (TermRef t : set) {
      if (!sorts.empty()) sorts += ", ";
      sorts += m.sig.sort(t->sort).name;
    }
    fail(toks.front(), "ambiguous term (possible sorts: " + sorts + ")");
  }
  return set.front();
}

std::vector<CondFrag> parse_condition(Module& m,
                                      const std::vector<Token>& toks) {
  std::vector<CondFrag> out;
  for (const Toks& frag : detail::split_top(toks, "/\\")) {
    if (frag.empty())
      throw ParseError("empty condition fragment",
                       toks.empty() ? 0 : toks.front().line,
                       toks.empty() ? 0 : toks.front().col);
    CondFrag f;
    size_t p;
    if ((p = detail::find_top(frag, ":=")) != detail::npos) {
      f.kind = CondFrag::Kind::Assign;
      f.lhs = parse_term(m, detail::slice(frag, 0, p));
      f.rhs = parse_term(m, detail::slice(frag, p + 1, frag.size()), f.lhs->sort);
    } else if ((p = detail::find_top(frag, "=>")) != detail::npos) {
      f.kind = CondFrag::Kind::Rewrite;
      f.lhs = parse_term(m, detail::slice(frag, 0, p));
      f.rhs = parse_term(m, detail::slice(frag, p + 1, frag.size()), f.lhs->sort);
    } else if ((p = detail::find_top(frag, "=")) != detail::npos) {
      f.kind = CondFrag::Kind::Equal;
      f.lhs = parse_term(m, detail::slice(frag, 0, p));
      f.rhs = parse_term(m, detail::slice(frag, p + 1, frag.size()), f.lhs->sort);
    } else if ((p = detail::find_top(frag, ":")) != detail::npos) {
      f.kind = CondFrag::Kind::SortTest;
      f.lhs = parse_term(m, detail::slice(frag, 0, p));
      size_t i = p + 1;
      std::string sort = detail::take_sort_name(frag, i);
      if (i != frag.size())
        fail(frag[i], "trailing tokens after sort test");
      f.sort = m.sig.find_sort(sort);
      if (f.sort == kNoSort) fail(frag[p], "unknown sort '" + sort + "'");
    } else {
      f.kind = CondFrag::Kind::Bool;
      SortId b = m.sig.find_sort("Bool");
      f.lhs = parse_term(m, frag, b);
    }
    out.push_back(f);
  }
  return out;
}

}  // namespace strew
