#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "treealg/term.hpp"

namespace treealg {

// ---------------------------------------------------------------------------
// pieces

/// A candidate factor region of a term: the subtree of `root_path` minus the
/// subtree of the optional cut vertex. Its arity counts the cut edge plus
/// the term variables contained in the region; its size counts all region
/// nodes, variable leaves included.
struct Piece {
  std::vector<int> root_path;
  std::optional<std::vector<int>> cut_path;
  int size = 0;
  int arity = 0;
};

namespace detail {

template <typename L>
void index_subtrees(const TermNode<L>& n, std::vector<int>& path,
                    std::vector<std::pair<std::vector<int>, const TermNode<L>*>>& out) {
  out.push_back({path, &n});
  for (size_t i = 0; i < n.children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    index_subtrees(n.children[i], path, out);
    path.pop_back();
  }
}

inline bool is_strict_prefix(const std::vector<int>& p, const std::vector<int>& q) {
  return p.size() < q.size() && std::equal(p.begin(), p.end(), q.begin());
}

}  // namespace detail

/// Enumerates all pieces with at least two nodes and arity at most one; the
/// largest one (by size, then by position) is returned first. Empty result
/// means the term is reduced.
template <typename L>
std::vector<Piece> reducible_pieces(const Term<L>& t) {
  std::vector<std::pair<std::vector<int>, const TermNode<L>*>> subs;
  std::vector<int> path;
  detail::index_subtrees(t.root, path, subs);

  std::map<std::vector<int>, int> sizes;
  std::map<std::vector<int>, int> var_counts;
  for (const auto& [p, n] : subs) {
    sizes[p] = node_count(*n);
    std::set<int> vs;
    collect_vars(*n, vs);
    var_counts[p] = static_cast<int>(vs.size());
  }

  std::vector<Piece> out;
  for (const auto& [vp, vn] : subs) {
    if (vn->is_var()) continue;  // regions are rooted at proper nodes
    // no cut
    {
      Piece p{vp, std::nullopt, sizes[vp], var_counts[vp]};
      if (p.size >= 2 && p.arity <= 1) out.push_back(p);
    }
    for (const auto& [wp, wn] : subs) {
      if (!detail::is_strict_prefix(vp, wp)) continue;
      Piece p{vp, wp, sizes[vp] - sizes[wp], 1 + var_counts[vp] - var_counts[wp]};
      if (p.size >= 2 && p.arity <= 1) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end(), [](const Piece& a, const Piece& b) {
    if (a.size != b.size) return a.size > b.size;
    if (a.root_path != b.root_path) return a.root_path < b.root_path;
    return a.cut_path < b.cut_path;
  });
  return out;
}

/// True iff no piece with two or more nodes has arity at most one.
template <typename L>
bool is_reduced(const Term<L>& t) {
  return reducible_pieces(t).empty();
}

// ---------------------------------------------------------------------------
// factorizations with absorbed variables

/// Where a factor variable is attached: to a successor of the outer vertex,
/// or directly to a variable of the whole tree (absorbed during reduction).
struct FactorBinding {
  bool is_slot = true;
  int index = 0;

  auto operator<=>(const FactorBinding&) const = default;
};

/// A factor: a term over the alphabet together with the attachment of each
/// of its variables.
struct Factor {
  SymbolTerm body;                   // body.arity == bind.size()
  std::vector<FactorBinding> bind;

  int slot_count() const {
    int n = 0;
    for (const auto& b : bind) n += b.is_slot ? 1 : 0;
    return n;
  }

  /// A singleton factor is sing(a) with the identity slot binding.
  bool is_singleton() const {
    if (body.root.is_var()) return false;
    for (size_t i = 0; i < body.root.children.size(); ++i) {
      const auto& c = body.root.children[i];
      if (!c.is_var() || c.var() != static_cast<int>(i)) return false;
      if (!bind[i].is_slot || bind[i].index != static_cast<int>(i)) return false;
    }
    return node_count(body) == static_cast<int>(body.root.children.size()) + 1;
  }

  friend bool operator==(const Factor& a, const Factor& b) {
    return a.bind == b.bind && a.body == b.body;
  }
  friend bool operator<(const Factor& a, const Factor& b) {
    if (!(a.bind == b.bind)) return a.bind < b.bind;
    return a.body < b.body;
  }
};

/// An outer tree whose vertices carry factors; leaves may be variables of
/// the result. flatten() of a factorization reproduces the factored term.
using Factorization = Term<Factor>;

/// All-singleton factorization of a term.
inline Factorization sing_all(const SymbolTerm& t) {
  auto go = [](auto&& self, const SymbolNode& n) -> TermNode<Factor> {
    if (n.is_var()) return var_node<Factor>(n.var());
    int r = static_cast<int>(n.children.size());
    Factor f;
    f.body.arity = r;
    f.body.root = SymbolNode{n.content, {}};
    for (int i = 0; i < r; ++i) {
      f.body.root.children.push_back(var_node<std::string>(i));
      f.bind.push_back({true, i});
    }
    TermNode<Factor> out{std::move(f), {}};
    for (const auto& c : n.children) out.children.push_back(self(self, c));
    return out;
  };
  return Factorization{t.arity, go(go, t.root)};
}

namespace detail {

inline SymbolNode substitute_factor(const SymbolNode& body, const Factor& f,
                                    const std::vector<SymbolNode>& slot_trees) {
  if (body.is_var()) {
    const FactorBinding& b = f.bind[static_cast<size_t>(body.var())];
    if (b.is_slot) return slot_trees[static_cast<size_t>(b.index)];
    return var_node<std::string>(b.index);
  }
  SymbolNode out{body.content, {}};
  for (const auto& c : body.children) out.children.push_back(substitute_factor(c, f, slot_trees));
  return out;
}

inline SymbolNode flatten_fnode(const TermNode<Factor>& n) {
  if (n.is_var()) return var_node<std::string>(n.var());
  const Factor& f = n.label();
  if (f.slot_count() != static_cast<int>(n.children.size()))
    throw error("factorization: slot count does not match successor count");
  std::vector<SymbolNode> slots;
  slots.reserve(n.children.size());
  for (const auto& c : n.children) slots.push_back(flatten_fnode(c));
  return substitute_factor(f.body.root, f, slots);
}

}  // namespace detail

inline SymbolTerm flatten(const Factorization& f) {
  return SymbolTerm{f.arity, detail::flatten_fnode(f.root)};
}

/// Membership in F(t): every outer vertex with more than one successor
/// carries a singleton factor.
inline bool branching_vertices_singleton(const Factorization& f) {
  auto go = [](auto&& self, const TermNode<Factor>& n) -> bool {
    if (n.is_var()) return true;
    if (n.children.size() > 1 && !n.label().is_singleton()) return false;
    for (const auto& c : n.children)
      if (!self(self, c)) return false;
    return true;
  };
  return go(go, f.root);
}

// ---------------------------------------------------------------------------
// reduction

using FactorEvaluator = std::function<std::optional<std::string>(const SymbolTerm&)>;

namespace detail {

inline const TermNode<Factor>* descend(const TermNode<Factor>* n, const std::vector<int>& path) {
  for (int i : path) n = &n->children[static_cast<size_t>(i)];
  return n;
}

/// Collapses the piece region into a single factor vertex: region factors
/// are composed, contained outer variables are absorbed into the factor, and
/// the optional cut becomes the single successor.
inline TermNode<Factor> collapse_region(const TermNode<Factor>& v,
                                        const std::optional<std::vector<int>>& cut) {
  Factor merged;
  std::optional<TermNode<Factor>> slot_child;

  auto build = [&](auto&& self, const TermNode<Factor>& u,
                   const std::vector<int>& upath) -> SymbolNode {
    const Factor& f = u.label();
    // splice this factor's body, resolving each variable through its binding
    auto walk = [&](auto&& walker, const SymbolNode& b) -> SymbolNode {
      if (!b.is_var()) {
        SymbolNode out{b.content, {}};
        for (const auto& c : b.children) out.children.push_back(walker(walker, c));
        return out;
      }
      const FactorBinding& bind = f.bind[static_cast<size_t>(b.var())];
      if (!bind.is_slot) {  // already absorbed earlier
        int fresh = static_cast<int>(merged.bind.size());
        merged.bind.push_back({false, bind.index});
        return var_node<std::string>(fresh);
      }
      std::vector<int> cpath = upath;
      cpath.push_back(bind.index);
      const TermNode<Factor>& child = u.children[static_cast<size_t>(bind.index)];
      if (cut && *cut == cpath) {
        int fresh = static_cast<int>(merged.bind.size());
        merged.bind.push_back({true, 0});
        slot_child = child;
        return var_node<std::string>(fresh);
      }
      if (child.is_var()) {  // an outer variable inside the region: absorb it
        int fresh = static_cast<int>(merged.bind.size());
        merged.bind.push_back({false, child.var()});
        return var_node<std::string>(fresh);
      }
      return self(self, child, cpath);
    };
    return walk(walk, f.body.root);
  };

  merged.body.root = build(build, v, {});
  merged.body.arity = static_cast<int>(merged.bind.size());
  TermNode<Factor> out{std::move(merged), {}};
  if (slot_child) out.children.push_back(std::move(*slot_child));
  return out;
}

inline void replace_at(TermNode<Factor>& root, const std::vector<int>& path,
                       TermNode<Factor> replacement) {
  TermNode<Factor>* n = &root;
  for (int i : path) n = &n->children[static_cast<size_t>(i)];
  *n = std::move(replacement);
}

}  // namespace detail

/// Repeatedly collapses a maximal piece of arity at most one until the outer
/// tree is reduced. The result is a factorization of t whose outer tree is
/// reduced, whose branching vertices carry singleton factors, and whose
/// height is at most 2 * arity(t). When an evaluator is supplied, it must be
/// defined on every factor body of the result.
inline Factorization reduce(const SymbolTerm& t, const FactorEvaluator& eval = {}) {
  Factorization outer = sing_all(t);
  while (true) {
    std::vector<Piece> pieces = reducible_pieces(outer);
    if (pieces.empty()) break;
    const Piece& p = pieces.front();  // maximal
    const TermNode<Factor>* v = detail::descend(&outer.root, p.root_path);
    std::optional<std::vector<int>> local_cut;
    if (p.cut_path) {
      local_cut = std::vector<int>(p.cut_path->begin() + static_cast<long>(p.root_path.size()),
                                   p.cut_path->end());
    }
    TermNode<Factor> merged = detail::collapse_region(*v, local_cut);
    detail::replace_at(outer.root, p.root_path, std::move(merged));
  }
  if (eval) {
    auto check = [&](auto&& self, const TermNode<Factor>& n) -> void {
      if (n.is_var()) return;
      if (!eval(n.label().body))
        throw error("reduce: evaluator undefined on a required factor");
      for (const auto& c : n.children) self(self, c);
    };
    check(check, outer.root);
  }
  return outer;
}

// ---------------------------------------------------------------------------
// bounded factorization search (the arity-reduction decision)

/// Evaluation table for factors: canonical factor terms (exits renumbered
/// left to right) mapped to evaluated labels.
struct EvalTable {
  std::map<SymbolTerm, std::string> entries;

  std::optional<std::string> lookup(const SymbolTerm& factor) const {
    auto it = entries.find(factor);
    if (it == entries.end()) return std::nullopt;
    return it->second;
  }
};

/// H-sets: per target label, the evaluated trees of height at most 2m it can
/// factor into.
using HSets = std::map<std::string, std::vector<SymbolTerm>>;

namespace detail {

struct RegionEval {
  SymbolTerm evaluated;  // T pi(T): labels are evaluated factor names
  bool ok = false;
};

/// Builds the evaluated outer tree for the factorization encoded by the cut
/// set; fails when a multi-node region branches or a table entry is missing.
inline std::optional<SymbolNode> eval_outer(const SymbolNode& region_root,
                                            const std::set<const SymbolNode*>& cuts,
                                            const EvalTable& table, bool& missing_entry) {
  // collect the region's factor term and its exits
  std::vector<const SymbolNode*> exits;  // cut nodes and variable leaves, in visit order
  int region_nodes = 0;
  auto carve = [&](auto&& self, const SymbolNode& n) -> SymbolNode {
    ++region_nodes;
    SymbolNode out{n.content, {}};
    for (const auto& c : n.children) {
      if (c.is_var() || cuts.count(&c)) {
        out.children.push_back(var_node<std::string>(static_cast<int>(exits.size())));
        exits.push_back(&c);
      } else {
        out.children.push_back(self(self, c));
      }
    }
    return out;
  };
  SymbolNode factor_root = carve(carve, region_root);
  if (region_nodes > 1 && exits.size() > 1) return std::nullopt;  // F(t) violation

  SymbolTerm factor{static_cast<int>(exits.size()), std::move(factor_root)};
  auto value = table.lookup(factor);
  if (!value) {
    missing_entry = true;
    return std::nullopt;
  }
  SymbolNode out{*value, {}};
  for (const SymbolNode* e : exits) {
    if (e->is_var()) {
      out.children.push_back(var_node<std::string>(e->var()));
    } else {
      auto sub = eval_outer(*e, cuts, table, missing_entry);
      if (!sub) return std::nullopt;
      out.children.push_back(std::move(*sub));
    }
  }
  return out;
}

}  // namespace detail

/// True iff some factorization of t in F(t) with outer height at most
/// 2 * arity(t) has a per-factor evaluation tree listed in H(target).
inline bool decide_low_arity(const SymbolTerm& t, const std::string& target,
                             const EvalTable& table, const HSets& h_sets) {
  auto hit = h_sets.find(target);
  if (hit == h_sets.end()) return false;
  const std::vector<SymbolTerm>& candidates = hit->second;
  if (candidates.empty()) return false;
  int bound = 2 * t.arity;

  // internal non-root, non-variable nodes are the potential region roots
  std::vector<const SymbolNode*> internal;
  auto collect = [&](auto&& self, const SymbolNode& n, bool root) -> void {
    if (!root && !n.is_var()) internal.push_back(&n);
    for (const auto& c : n.children) self(self, c, false);
  };
  collect(collect, t.root, true);
  if (internal.size() > 20) throw error("decide_low_arity: term too large for exhaustive search");

  bool missing_entry = false;
  for (size_t mask = 0; mask < (size_t{1} << internal.size()); ++mask) {
    std::set<const SymbolNode*> cuts;
    for (size_t i = 0; i < internal.size(); ++i)
      if (mask & (size_t{1} << i)) cuts.insert(internal[i]);
    auto evaluated = detail::eval_outer(t.root, cuts, table, missing_entry);
    if (!evaluated) continue;
    SymbolTerm outer{t.arity, std::move(*evaluated)};
    if (height(outer) > bound) continue;
    for (const auto& c : candidates)
      if (c == outer) return true;
  }
  if (missing_entry) throw error("decide_low_arity: missing table entry");
  return false;
}

}  // namespace treealg
