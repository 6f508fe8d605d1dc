#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "treealg/alphabet.hpp"

namespace treealg {

/// Node of a finite labelled tree. A node either carries a label of type L
/// and an ordered list of children, or it is a leaf carrying a variable
/// index.
template <typename L>
struct TermNode {
  std::variant<L, int> content;
  std::vector<TermNode<L>> children;

  bool is_var() const { return content.index() == 1; }
  int var() const { return std::get<1>(content); }
  const L& label() const { return std::get<0>(content); }
};

// comparisons are spelled out: a defaulted <=> cannot recurse through the
// child vector
template <typename L>
bool operator==(const TermNode<L>& a, const TermNode<L>& b) {
  return a.content == b.content && a.children == b.children;
}

template <typename L>
bool operator<(const TermNode<L>& a, const TermNode<L>& b) {
  if (a.content != b.content) return a.content < b.content;
  return std::lexicographical_compare(a.children.begin(), a.children.end(), b.children.begin(),
                                      b.children.end());
}

/// A finite tree of declared arity n over labels L. Variables x_0..x_{n-1}
/// may occur at most once each and never at the root; not every index needs
/// to occur.
template <typename L>
struct Term {
  int arity = 0;
  TermNode<L> root;
};

template <typename L>
bool operator==(const Term<L>& a, const Term<L>& b) {
  return a.arity == b.arity && a.root == b.root;
}

template <typename L>
bool operator<(const Term<L>& a, const Term<L>& b) {
  if (a.arity != b.arity) return a.arity < b.arity;
  return a.root < b.root;
}

template <typename L>
TermNode<L> node(L label, std::vector<TermNode<L>> children = {}) {
  return TermNode<L>{std::move(label), std::move(children)};
}

template <typename L>
TermNode<L> var_node(int index) {
  return TermNode<L>{index, {}};
}

using SymbolTerm = Term<std::string>;
using SymbolNode = TermNode<std::string>;

// ---------------------------------------------------------------------------
// basic queries

template <typename L>
int height(const TermNode<L>& n) {
  int h = 0;
  for (const auto& c : n.children) h = std::max(h, 1 + height(c));
  return h;
}

template <typename L>
int height(const Term<L>& t) { return height(t.root); }

template <typename L>
int node_count(const TermNode<L>& n) {
  int s = 1;
  for (const auto& c : n.children) s += node_count(c);
  return s;
}

template <typename L>
int node_count(const Term<L>& t) { return node_count(t.root); }

template <typename L>
void collect_vars(const TermNode<L>& n, std::set<int>& out) {
  if (n.is_var()) out.insert(n.var());
  for (const auto& c : n.children) collect_vars(c, out);
}

/// The set of variable indices that actually occur.
template <typename L>
std::set<int> occurring_vars(const Term<L>& t) {
  std::set<int> out;
  collect_vars(t.root, out);
  return out;
}

inline std::string path_to_string(const std::vector<int>& path) {
  if (path.empty()) return "<root>";
  std::string s;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(path[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// validation

struct Violation {
  std::string invariant;       // which invariant is broken
  std::vector<int> node_path;  // child indices from the root to the culprit

  std::string describe() const { return invariant + " at " + path_to_string(node_path); }
};

using ValidationResult = std::optional<Violation>;  // nullopt = ok

namespace detail {
inline ValidationResult check_term_node(const RankedAlphabet& sigma, const SymbolNode& n,
                                        int arity, std::set<int>& seen,
                                        std::vector<int>& path) {
  if (n.is_var()) {
    if (!n.children.empty()) return Violation{"variable with children", path};
    if (n.var() < 0 || n.var() >= arity)
      return Violation{"variable index out of range", path};
    if (!seen.insert(n.var()).second)
      return Violation{"variable occurs twice", path};
    return std::nullopt;
  }
  if (!sigma.contains(n.label())) return Violation{"unknown symbol " + n.label(), path};
  if (static_cast<int>(n.children.size()) != sigma.arity(n.label()))
    return Violation{"child count does not match arity of " + n.label(), path};
  for (size_t i = 0; i < n.children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    if (auto v = check_term_node(sigma, n.children[i], arity, seen, path)) return v;
    path.pop_back();
  }
  return std::nullopt;
}
}  // namespace detail

/// Checks all Term invariants; a violation names the broken invariant and the
/// offending node.
inline ValidationResult validate_term(const RankedAlphabet& sigma, const SymbolTerm& t) {
  if (t.arity < 0) return Violation{"negative arity", {}};
  if (t.root.is_var()) return Violation{"root is a variable", {}};
  std::set<int> seen;
  std::vector<int> path;
  return detail::check_term_node(sigma, t.root, t.arity, seen, path);
}

// ---------------------------------------------------------------------------
// singleton and relabelling

/// sing(a) = a(x_0, ..., x_{n-1}) for a symbol a of arity n.
inline SymbolTerm singleton(const RankedAlphabet& sigma, const std::string& name) {
  int n = sigma.arity(name);  // throws on unknown symbol
  std::vector<SymbolNode> kids;
  kids.reserve(n);
  for (int i = 0; i < n; ++i) kids.push_back(var_node<std::string>(i));
  return SymbolTerm{n, node(std::string(name), std::move(kids))};
}

template <typename L, typename F>
auto relabel_node(const TermNode<L>& n, F&& f) -> TermNode<std::decay_t<decltype(f(n.label()))>> {
  using M = std::decay_t<decltype(f(n.label()))>;
  if (n.is_var()) return var_node<M>(n.var());
  TermNode<M> out{f(n.label()), {}};
  out.children.reserve(n.children.size());
  for (const auto& c : n.children) out.children.push_back(relabel_node(c, f));
  return out;
}

/// Applies f to every non-variable label (the functor action of trees).
template <typename L, typename F>
auto relabel(const Term<L>& t, F&& f) -> Term<std::decay_t<decltype(f(t.root.label()))>> {
  using M = std::decay_t<decltype(f(t.root.label()))>;
  return Term<M>{t.arity, relabel_node(t.root, f)};
}

// ---------------------------------------------------------------------------
// flattening of a tree of trees

namespace detail {
template <typename L>
TermNode<L> splice(const TermNode<L>& inner, const std::vector<TermNode<L>>& plugs);

template <typename L>
TermNode<L> flatten_node(const TermNode<Term<L>>& outer) {
  if (outer.is_var()) return var_node<L>(outer.var());
  const Term<L>& factor = outer.label();
  if (factor.arity != static_cast<int>(outer.children.size()))
    throw error("flatten: factor arity " + std::to_string(factor.arity) +
                " does not match outer successor count " +
                std::to_string(outer.children.size()));
  std::vector<TermNode<L>> plugs;
  plugs.reserve(outer.children.size());
  for (const auto& c : outer.children) plugs.push_back(flatten_node<L>(c));
  return splice(factor.root, plugs);
}

template <typename L>
TermNode<L> splice(const TermNode<L>& inner, const std::vector<TermNode<L>>& plugs) {
  if (inner.is_var()) return plugs[static_cast<size_t>(inner.var())];
  TermNode<L> out{inner.content, {}};
  out.children.reserve(inner.children.size());
  for (const auto& c : inner.children) out.children.push_back(splice(c, plugs));
  return out;
}
}  // namespace detail

/// flat : TT A -> T A. Splices each factor's variable x_i to the subtree
/// built from the (i+1)-th outer successor; outer variables become variables
/// of the result.
template <typename L>
Term<L> flatten(const Term<Term<L>>& outer) {
  return Term<L>{outer.arity, detail::flatten_node<L>(outer.root)};
}

/// Wraps every label into a singleton factor, so flatten(wrap_singletons(t)) = t.
template <typename L>
Term<Term<L>> wrap_singletons(const Term<L>& t) {
  auto go = [](auto&& self, const TermNode<L>& n) -> TermNode<Term<L>> {
    if (n.is_var()) return var_node<Term<L>>(n.var());
    int r = static_cast<int>(n.children.size());
    Term<L> factor{r, TermNode<L>{n.content, {}}};
    for (int i = 0; i < r; ++i) factor.root.children.push_back(var_node<L>(i));
    TermNode<Term<L>> out{std::move(factor), {}};
    for (const auto& c : n.children) out.children.push_back(self(self, c));
    return out;
  };
  return Term<Term<L>>{t.arity, go(go, t.root)};
}

/// sing(t): the one-vertex factorization of t, whose flattening is t again.
template <typename L>
Term<Term<L>> sing_factorization(const Term<L>& t) {
  std::vector<TermNode<Term<L>>> kids;
  kids.reserve(static_cast<size_t>(t.arity));
  for (int i = 0; i < t.arity; ++i) kids.push_back(var_node<Term<L>>(i));
  return Term<Term<L>>{t.arity, node(Term<L>{t}, std::move(kids))};
}

// ---------------------------------------------------------------------------
// permutations

namespace detail {
template <typename L>
TermNode<L> permutation_canonical(const TermNode<L>& n) {
  TermNode<L> out{n.content, {}};
  out.children.reserve(n.children.size());
  for (const auto& c : n.children) out.children.push_back(permutation_canonical(c));
  std::sort(out.children.begin(), out.children.end());
  return out;
}
}  // namespace detail

/// True iff s is obtained from t by rearranging the successor lists of
/// vertices (a bijection preserving the successor and sibling relations).
template <typename L>
bool is_permutation(const Term<L>& s, const Term<L>& t) {
  if (s.arity != t.arity) return false;
  return detail::permutation_canonical(s.root) == detail::permutation_canonical(t.root);
}

}  // namespace treealg
