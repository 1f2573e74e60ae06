#include "strew/term.hpp"

#include <algorithm>
#include <cassert>

namespace strew {

namespace {

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

uint64_t hash_string(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

// ---------------------------------------------------------------- Signature

SortId Signature::add_sort(const std::string& name) {
  if (frozen_) throw std::logic_error("signature frozen");
  auto it = sort_by_name_.find(name);
  if (it != sort_by_name_.end()) return it->second;
  SortId id = static_cast<SortId>(sorts_.size());
  sorts_.push_back(SortInfo{name, -1, false});
  sort_by_name_.emplace(name, id);
  return id;
}

SortId Signature::find_sort(const std::string& name) const {
  auto it = sort_by_name_.find(name);
  return it == sort_by_name_.end() ? kNoSort : it->second;
}

void Signature::add_subsort(SortId sub, SortId super) {
  if (frozen_) throw std::logic_error("signature frozen");
  subsort_edges_.emplace_back(sub, super);
}

void Signature::freeze() {
  if (frozen_) return;

  // Kinds: connected components of the subsort graph (union-find).
  int n = static_cast<int>(sorts_.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto& [a, b] : subsort_edges_) parent[find(a)] = find(b);

  std::unordered_map<int, KindId> kind_of_root;
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    auto it = kind_of_root.find(r);
    if (it == kind_of_root.end())
      it = kind_of_root.emplace(r, static_cast<KindId>(kind_of_root.size()))
               .first;
    sorts_[i].kind = it->second;
  }
  int kinds = static_cast<int>(kind_of_root.size());

  // Reflexive-transitive closure of the subsort relation over user sorts.
  leq_.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) leq_[i][i] = true;
  for (auto& [a, b] : subsort_edges_) leq_[a][b] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (leq_[i][k])
        for (int j = 0; j < n; ++j)
          if (leq_[k][j]) leq_[i][j] = true;

  // One synthesized error sort per kind, above every sort of the kind. Named
  // by the kind's maximal user sorts.
  kind_error_sort_.assign(kinds, kNoSort);
  for (KindId k = 0; k < kinds; ++k) {
    std::string label = "[";
    bool first = true;
    for (int i = 0; i < n; ++i) {
      if (sorts_[i].kind != k) continue;
      bool maximal = true;
      for (int j = 0; j < n; ++j)
        if (j != i && sorts_[j].kind == k && leq_[i][j]) maximal = false;
      if (maximal) {
        if (!first) label += ",";
        label += sorts_[i].name;
        first = false;
      }
    }
    label += "]";
    SortId err = static_cast<SortId>(sorts_.size());
    sorts_.push_back(SortInfo{label, k, true});
    sort_by_name_.emplace(label, err);
    kind_error_sort_[k] = err;
  }

  // Extend the closure to the error sorts.
  int m = static_cast<int>(sorts_.size());
  for (auto& row : leq_) row.resize(m, false);
  leq_.resize(m, std::vector<bool>(m, false));
  for (int i = 0; i < m; ++i) {
    leq_[i][i] = true;
    leq_[i][kind_error_sort_[sorts_[i].kind]] = true;
  }
  frozen_ = true;
}

bool Signature::sort_leq(SortId a, SortId b) const {
  assert(frozen_);
  return leq_[a][b];
}

SymbolId Signature::find_symbol(const std::string& name, int arity,
                                const std::vector<KindId>& arg_kinds,
                                KindId result_kind) const {
  auto it = symbols_by_name_.find(name);
  if (it == symbols_by_name_.end()) return -1;
  for (SymbolId s : it->second) {
    const Symbol& sym = symbols_[s];
    if (sym.arity != arity) continue;
    if (!arg_kinds.empty() && sym.arg_kinds != arg_kinds) continue;
    if (result_kind >= 0 && sym.result_kind != result_kind) continue;
    return s;
  }
  return -1;
}

const std::vector<SymbolId>* Signature::symbols_named(
    const std::string& name) const {
  auto it = symbols_by_name_.find(name);
  return it == symbols_by_name_.end() ? nullptr : &it->second;
}

SymbolId Signature::declare_op(const std::string& name,
                               const std::vector<SortId>& args, SortId result) {
  if (!frozen_) throw std::logic_error("declare_op before freeze");
  std::vector<KindId> arg_kinds;
  arg_kinds.reserve(args.size());
  for (SortId a : args) arg_kinds.push_back(sorts_[a].kind);

  SymbolId s = find_symbol(name, static_cast<int>(args.size()), arg_kinds,
                           sorts_[result].kind);
  if (s < 0) {
    s = static_cast<SymbolId>(symbols_.size());
    Symbol sym;
    sym.name = name;
    sym.arity = static_cast<int>(args.size());
    sym.arg_kinds = arg_kinds;
    sym.result_kind = sorts_[result].kind;

    // Mixfix pieces: runs of non-underscore characters are literals, each
    // underscore is a slot. "size" has no slots and uses call syntax.
    std::string run;
    for (char c : name) {
      if (c == '_') {
        if (!run.empty()) sym.pieces.push_back(run), run.clear();
        sym.pieces.push_back("");
      } else {
        run += c;
      }
    }
    if (!run.empty()) sym.pieces.push_back(run);
    sym.function_form =
        name.find('_') == std::string::npos;
    symbols_.push_back(std::move(sym));
    symbols_by_name_[name].push_back(s);
  }
  Symbol& sym = symbols_[s];
  for (const auto& d : sym.decls)
    if (d.args == args && d.result == result) return s;  // duplicate decl
  sym.decls.push_back(OpDeclSig{args, result});
  return s;
}

SortId Signature::binary_result_sort(SymbolId sym_id, SortId a,
                                     SortId b) const {
  const Symbol& sym = symbols_[sym_id];
  SortId best = kNoSort;
  for (const auto& d : sym.decls) {
    if (d.args.size() != 2) continue;
    if (!sort_leq(a, d.args[0]) || !sort_leq(b, d.args[1])) continue;
    if (best == kNoSort || sort_leq(d.result, best)) best = d.result;
  }
  return best == kNoSort ? error_sort(sym.result_kind) : best;
}

SortId Signature::result_sort(SymbolId sym_id,
                              const std::vector<SortId>& arg_sorts) const {
  const Symbol& sym = symbols_[sym_id];
  if (sym.assoc && arg_sorts.size() > 2) {
    SortId s = binary_result_sort(sym_id, arg_sorts[0], arg_sorts[1]);
    for (size_t i = 2; i < arg_sorts.size(); ++i)
      s = binary_result_sort(sym_id, s, arg_sorts[i]);
    return s;
  }
  SortId best = kNoSort;
  for (const auto& d : sym.decls) {
    if (d.args.size() != arg_sorts.size()) continue;
    bool ok = true;
    for (size_t i = 0; i < d.args.size() && ok; ++i)
      ok = sort_leq(arg_sorts[i], d.args[i]);
    if (!ok) continue;
    if (best == kNoSort || sort_leq(d.result, best)) best = d.result;
  }
  return best == kNoSort ? error_sort(sym.result_kind) : best;
}

// ------------------------------------------------------------- term compare

static int tag_rank(TermNode::Tag t) {
  switch (t) {
    case TermNode::Tag::Num: return 0;
    case TermNode::Tag::Qid: return 1;
    case TermNode::Tag::Var: return 2;
    case TermNode::Tag::App: return 3;
  }
  return 4;
}

int term_compare(TermRef a, TermRef b) {
  if (a == b) return 0;
  int ra = tag_rank(a->tag), rb = tag_rank(b->tag);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a->tag) {
    case TermNode::Tag::Num:
      return a->value < b->value ? -1 : (a->value > b->value ? 1 : 0);
    case TermNode::Tag::Qid:
      return a->name.compare(b->name) < 0 ? -1
             : a->name == b->name         ? 0
                                          : 1;
    case TermNode::Tag::Var: {
      int c = a->name.compare(b->name);
      if (c != 0) return c < 0 ? -1 : 1;
      return a->sort < b->sort ? -1 : (a->sort > b->sort ? 1 : 0);
    }
    case TermNode::Tag::App: {
      if (a->sym != b->sym) return a->sym < b->sym ? -1 : 1;
      if (a->args.size() != b->args.size())
        return a->args.size() < b->args.size() ? -1 : 1;
      for (size_t i = 0; i < a->args.size(); ++i) {
        int c = term_compare(a->args[i], b->args[i]);
        if (c != 0) return c;
      }
      return 0;
    }
  }
  return 0;
}

// ----------------------------------------------------------------- TermStore

bool TermStore::NodeEq::operator()(TermRef a, TermRef b) const {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case TermNode::Tag::Num: return a->value == b->value;
    case TermNode::Tag::Qid: return a->name == b->name;
    case TermNode::Tag::Var: return a->name == b->name && a->sort == b->sort;
    case TermNode::Tag::App: return a->sym == b->sym && a->args == b->args;
  }
  return false;
}

TermStore::TermStore(const Signature& sig) : sig_(sig) {
  assert(sig.frozen());
}

TermRef TermStore::intern(TermNode&& n) {
  auto it = index_.find(&n);
  if (it != index_.end()) return *it;
  nodes_.push_back(std::move(n));
  TermRef ref = &nodes_.back();
  index_.insert(ref);
  return ref;
}

TermRef TermStore::var(const std::string& name, SortId sort) {
  TermNode n;
  n.tag = TermNode::Tag::Var;
  n.ground = false;
  n.sort = sort;
  n.name = name;
  n.size = 1;
  n.hash = mix(mix(2, hash_string(name)), static_cast<uint64_t>(sort));
  return intern(std::move(n));
}

SortId TermStore::numeral_sort(long long v) const {
  const char* want = v == 0 ? "Zero" : v > 0 ? "NzNat" : "NzInt";
  SortId s = sig_.find_sort(want);
  if (s == kNoSort)
    throw EvalError(std::string("no sort for numeral (missing ") +
                    (v < 0 ? "INT" : "NAT") + " import)");
  return s;
}

TermRef TermStore::num(long long v) {
  TermNode n;
  n.tag = TermNode::Tag::Num;
  n.ground = true;
  n.sort = numeral_sort(v);
  n.value = v;
  n.size = 1;
  n.hash = mix(0, static_cast<uint64_t>(v) * 0x2545F4914F6CDD1DULL + 7);
  return intern(std::move(n));
}

TermRef TermStore::qid(const std::string& text) {
  SortId s = sig_.find_sort("Qid");
  if (s == kNoSort)
    throw EvalError("quoted identifier without a QID import: " + text);
  TermNode n;
  n.tag = TermNode::Tag::Qid;
  n.ground = true;
  n.sort = s;
  n.name = text;
  n.size = 1;
  n.hash = mix(1, hash_string(text));
  return intern(std::move(n));
}

TermRef TermStore::hole(KindId kind) {
  return var("[]", sig_.error_sort(kind));
}

bool TermStore::is_hole(TermRef t) const {
  return t->is_var() && t->name == "[]";
}

TermRef TermStore::app(SymbolId sym_id, std::vector<TermRef> args) {
  const Symbol& sym = sig_.symbol(sym_id);

  // Successor/negation folding over numeral payloads.
  if (sym.builtin == Builtin::Succ && args.size() == 1 && args[0]->is_num() &&
      args[0]->value >= 0)
    return num(args[0]->value + 1);
  if (sym.builtin == Builtin::Neg && args.size() == 1 && args[0]->is_num())
    return num(-args[0]->value);

  if (sym.assoc) {
    std::vector<TermRef> flat;
    flat.reserve(args.size());
    for (TermRef a : args) {
      if (a->is_app() && a->sym == sym_id)
        flat.insert(flat.end(), a->args.begin(), a->args.end());
      else
        flat.push_back(a);
    }
    args = std::move(flat);
  }

  if (sym.identity) {
    std::erase(args, sym.identity);
    if (args.empty()) return sym.identity;
    if (args.size() == 1) return args[0];
  }

  if (sym.comm)
    std::sort(args.begin(), args.end(),
              [](TermRef a, TermRef b) { return term_compare(a, b) < 0; });

  assert(sym.assoc ? args.size() >= 2
                   : args.size() == static_cast<size_t>(sym.arity));

  TermNode n;
  n.tag = TermNode::Tag::App;
  n.sym = sym_id;
  n.ground = true;
  n.size = 1;
  uint64_t h = mix(3, static_cast<uint64_t>(sym_id));
  std::vector<SortId> arg_sorts;
  arg_sorts.reserve(args.size());
  for (TermRef a : args) {
    n.ground = n.ground && a->ground;
    n.size += a->size;
    h = mix(h, a->hash);
    arg_sorts.push_back(a->sort);
  }
  n.hash = h;
  n.sort = sig_.result_sort(sym_id, arg_sorts);
  n.args = std::move(args);
  return intern(std::move(n));
}

// -------------------------------------------------------------------- Subst

TermRef Subst::get(TermRef var) const {
  for (auto& [v, t] : items_)
    if (v == var) return t;
  return nullptr;
}

static void insert_sorted(std::vector<std::pair<TermRef, TermRef>>& items,
                          TermRef var, TermRef value) {
  auto pos = std::lower_bound(
      items.begin(), items.end(), var,
      [](const auto& item, TermRef v) { return term_compare(item.first, v) < 0; });
  items.insert(pos, {var, value});
}

Subst Subst::with(TermRef var, TermRef value) const {
  assert(!bound(var));
  Subst s = *this;
  insert_sorted(s.items_, var, value);
  return s;
}

Subst Subst::with_override(TermRef var, TermRef value) const {
  Subst s = *this;
  for (auto& item : s.items_)
    if (item.first == var) {
      item.second = value;
      return s;
    }
  insert_sorted(s.items_, var, value);
  return s;
}

Subst Subst::merged(const Subst& over) const {
  Subst s = *this;
  for (auto& [v, t] : over.items_) s = s.with_override(v, t);
  return s;
}

uint64_t Subst::hash() const {
  uint64_t h = 0x51ed2701;
  for (auto& [v, t] : items_) h = mix(mix(h, v->hash), t->hash);
  return h;
}

TermRef apply_subst(TermStore& store, const Subst& s, TermRef t) {
  if (t->ground || s.empty()) return t;
  switch (t->tag) {
    case TermNode::Tag::Var: {
      TermRef b = s.get(t);
      return b ? b : t;
    }
    case TermNode::Tag::App: {
      std::vector<TermRef> args;
      args.reserve(t->args.size());
      bool changed = false;
      for (TermRef a : t->args) {
        TermRef a2 = apply_subst(store, s, a);
        changed = changed || a2 != a;
        args.push_back(a2);
      }
      if (!changed) return t;
      return store.app(t->sym, std::move(args));
    }
    default:
      return t;
  }
}

TermRef plug(TermStore& store, TermRef context, TermRef filling) {
  if (store.is_hole(context)) return filling;
  if (context->ground || !context->is_app()) return context;
  std::vector<TermRef> args;
  args.reserve(context->args.size());
  bool changed = false;
  for (TermRef a : context->args) {
    TermRef a2 = a->ground ? a : plug(store, a, filling);
    changed = changed || a2 != a;
    args.push_back(a2);
  }
  if (!changed) return context;
  return store.app(context->sym, std::move(args));
}

void collect_vars(TermRef t, std::vector<TermRef>& out) {
  if (t->ground) return;
  if (t->is_var()) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return;
  }
  for (TermRef a : t->args) collect_vars(a, out);
}

bool contains_node(TermRef t, TermRef needle) {
  if (t == needle) return true;
  if (!t->is_app()) return false;
  for (TermRef a : t->args)
    if (contains_node(a, needle)) return true;
  return false;
}

}  // namespace strew
