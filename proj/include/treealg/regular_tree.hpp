#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "treealg/term.hpp"

namespace treealg {

/// Reserved truncation label used by unravel().
inline const std::string kCutSymbol = "#cut";
/// Reserved hole symbol of contexts.
inline const std::string kHoleSymbol = "HOLE";

/// A finite pointed graph whose unravelling is a (possibly infinite) ranked
/// tree. Node labels are either alphabet symbols or variable indices.
/// Equality of regular trees is bisimilarity, not graph isomorphism.
struct RegularTree {
  struct Node {
    std::optional<std::string> symbol;  // exactly one of symbol / var is set
    std::optional<int> var;
    std::vector<std::string> successors;
  };

  int arity = 0;
  std::string root;
  std::map<std::string, Node> nodes;

  const Node& at(const std::string& id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw error("regular tree: no node with id " + id);
    return it->second;
  }
};

// ---------------------------------------------------------------------------
// validation

namespace detail {

inline std::set<std::string> reachable_nodes(const RegularTree& g) {
  std::set<std::string> seen;
  std::vector<std::string> todo{g.root};
  while (!todo.empty()) {
    std::string id = todo.back();
    todo.pop_back();
    if (!seen.insert(id).second) continue;
    for (const auto& s : g.at(id).successors) todo.push_back(s);
  }
  return seen;
}

// Counts root walks into `target`, treating parallel successor entries as
// distinct. Returns nullopt when the count is infinite (a cycle feeds it).
inline std::optional<long> count_root_walks(const RegularTree& g, const std::string& target) {
  // restrict to nodes that lie on some root->target walk
  std::set<std::string> reach = reachable_nodes(g);
  std::set<std::string> coreach;
  {
    std::map<std::string, std::vector<std::string>> preds;
    for (const auto& [id, n] : g.nodes)
      for (const auto& s : n.successors) preds[s].push_back(id);
    std::vector<std::string> todo{target};
    while (!todo.empty()) {
      std::string id = todo.back();
      todo.pop_back();
      if (!coreach.insert(id).second) continue;
      for (const auto& p : preds[id]) todo.push_back(p);
    }
  }
  std::set<std::string> live;
  for (const auto& id : reach)
    if (coreach.count(id)) live.insert(id);
  if (!live.count(g.root) || !live.count(target)) return 0;

  // cycle check + walk counting by DFS with memoization
  std::map<std::string, long> memo;
  std::set<std::string> on_stack;
  bool infinite = false;
  auto dfs = [&](auto&& self, const std::string& id) -> long {
    if (id == target) return 1;
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    if (!on_stack.insert(id).second) {
      infinite = true;
      return 0;
    }
    long total = 0;
    for (const auto& s : g.at(id).successors)
      if (live.count(s)) total += self(self, s);
    on_stack.erase(id);
    memo[id] = total;
    return total;
  };
  long walks = dfs(dfs, g.root);
  if (infinite) return std::nullopt;
  return walks;
}

}  // namespace detail

/// Checks the RegularTree invariants: reachability, label/successor
/// consistency against the alphabet, root not a variable, and per occurring
/// variable a unique path from the root in the unravelling.
inline ValidationResult validate_regular_tree(const RankedAlphabet& sigma,
                                              const RegularTree& g) {
  if (g.arity < 0) return Violation{"negative arity", {}};
  if (!g.nodes.count(g.root)) return Violation{"root id missing", {}};
  if (g.at(g.root).var) return Violation{"root is a variable", {}};
  std::set<std::string> reach = detail::reachable_nodes(g);
  std::map<int, std::string> var_nodes;
  for (const auto& [id, n] : g.nodes) {
    if (!reach.count(id)) return Violation{"unreachable node " + id, {}};
    if (n.symbol.has_value() == n.var.has_value())
      return Violation{"node " + id + " must carry exactly one of symbol/var", {}};
    for (const auto& s : n.successors)
      if (!g.nodes.count(s)) return Violation{"dangling successor " + s + " of " + id, {}};
    if (n.var) {
      if (*n.var < 0 || *n.var >= g.arity)
        return Violation{"variable index out of range at " + id, {}};
      if (!n.successors.empty()) return Violation{"variable node " + id + " with successors", {}};
      if (!var_nodes.emplace(*n.var, id).second)
        return Violation{"variable occurs twice (two nodes for one index)", {}};
    } else {
      if (!sigma.contains(*n.symbol)) return Violation{"unknown symbol " + *n.symbol, {}};
      if (static_cast<int>(n.successors.size()) != sigma.arity(*n.symbol))
        return Violation{"successor count does not match arity of " + *n.symbol, {}};
    }
  }
  for (const auto& [idx, id] : var_nodes) {
    auto walks = detail::count_root_walks(g, id);
    if (!walks || *walks != 1)
      return Violation{"variable x_" + std::to_string(idx) +
                           " does not have a unique root path in the unravelling", {}};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// conversions and unravelling

/// Views a finite term as a regular tree (fresh node ids "n0", "n1", ...).
inline RegularTree term_to_regular(const SymbolTerm& t) {
  RegularTree g;
  g.arity = t.arity;
  int next = 0;
  auto go = [&](auto&& self, const SymbolNode& n) -> std::string {
    std::string id = "n" + std::to_string(next++);
    RegularTree::Node gn;
    if (n.is_var()) {
      gn.var = n.var();
    } else {
      gn.symbol = n.label();
      for (const auto& c : n.children) gn.successors.push_back(self(self, c));
    }
    g.nodes.emplace(id, std::move(gn));
    return id;
  };
  // children are created after their parent id, keeping ids depth-friendly
  g.root = go(go, t.root);
  return g;
}

/// Depth-d prefix of the unravelling; nodes cut at depth d are replaced by
/// the reserved "#cut" leaf.
inline SymbolTerm unravel(const RegularTree& g, int depth) {
  if (depth < 0) throw error("unravel: negative depth");
  auto go = [&](auto&& self, const std::string& id, int d) -> SymbolNode {
    if (d == 0) return node(std::string(kCutSymbol));
    const auto& n = g.at(id);
    if (n.var) return var_node<std::string>(*n.var);
    SymbolNode out{*n.symbol, {}};
    for (const auto& s : n.successors) out.children.push_back(self(self, s, d - 1));
    return out;
  };
  return SymbolTerm{g.arity, go(go, g.root, depth)};
}

/// True iff g is acyclic (its unravelling is a finite term).
inline bool is_finite_tree(const RegularTree& g) {
  std::map<std::string, int> state;  // 0 = open, 1 = done
  auto dfs = [&](auto&& self, const std::string& id) -> bool {
    auto it = state.find(id);
    if (it != state.end()) return it->second == 1;
    state[id] = 0;
    for (const auto& s : g.at(id).successors)
      if (!self(self, s)) return false;
    state[id] = 1;
    return true;
  };
  return dfs(dfs, g.root);
}

/// Unravels an acyclic regular tree completely.
inline SymbolTerm regular_to_term(const RegularTree& g) {
  if (!is_finite_tree(g)) throw error("regular_to_term: graph has a cycle");
  auto go = [&](auto&& self, const std::string& id) -> SymbolNode {
    const auto& n = g.at(id);
    if (n.var) return var_node<std::string>(*n.var);
    SymbolNode out{*n.symbol, {}};
    for (const auto& s : n.successors) out.children.push_back(self(self, s));
    return out;
  };
  return SymbolTerm{g.arity, go(go, g.root)};
}

// ---------------------------------------------------------------------------
// bisimilarity and permutation

namespace detail {
inline bool same_content(const RegularTree::Node& a, const RegularTree::Node& b) {
  return a.symbol == b.symbol && a.var == b.var &&
         a.successors.size() == b.successors.size();
}
}  // namespace detail

/// Unravelling equality, decided as ordered bisimilarity on the product graph.
inline bool bisimilar(const RegularTree& g, const RegularTree& h) {
  if (g.arity != h.arity) return false;
  std::set<std::pair<std::string, std::string>> joint;
  std::vector<std::pair<std::string, std::string>> todo{{g.root, h.root}};
  while (!todo.empty()) {
    auto [u, v] = todo.back();
    todo.pop_back();
    if (!joint.insert({u, v}).second) continue;
    const auto& nu = g.at(u);
    const auto& nv = h.at(v);
    if (!detail::same_content(nu, nv)) return false;
    for (size_t i = 0; i < nu.successors.size(); ++i)
      todo.push_back({nu.successors[i], nv.successors[i]});
  }
  return true;
}

/// Bisimulation up to sibling permutation: greatest relation R with
/// (u,v) in R  iff  labels agree and some bijection of successors stays in R.
inline bool is_permutation(const RegularTree& g, const RegularTree& h) {
  if (g.arity != h.arity) return false;
  std::set<std::pair<std::string, std::string>> rel;
  for (const auto& [u, nu] : g.nodes)
    for (const auto& [v, nv] : h.nodes)
      if (detail::same_content(nu, nv)) rel.insert({u, v});

  auto has_matching = [&](const RegularTree::Node& nu, const RegularTree::Node& nv) {
    size_t k = nu.successors.size();
    std::vector<int> perm(k);
    for (size_t i = 0; i < k; ++i) perm[static_cast<size_t>(i)] = static_cast<int>(i);
    // arities are tiny here; trying all bijections is fine
    std::sort(perm.begin(), perm.end());
    do {
      bool ok = true;
      for (size_t i = 0; i < k && ok; ++i)
        ok = rel.count({nu.successors[i], nv.successors[static_cast<size_t>(perm[i])]}) > 0;
      if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return k == 0;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = rel.begin(); it != rel.end();) {
      const auto& nu = g.at(it->first);
      const auto& nv = h.at(it->second);
      if (!has_matching(nu, nv)) {
        it = rel.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return rel.count({g.root, h.root}) > 0;
}

// ---------------------------------------------------------------------------
// contexts

/// A tree over the alphabet extended with the hole symbol HOLE of a fixed
/// arity. The at-most-once rule is waived for the hole; it may occur any
/// number of times, including zero.
struct Context {
  int hole_arity = 0;
  RegularTree tree;
};

inline RankedAlphabet extend_with_hole(const RankedAlphabet& sigma, int hole_arity) {
  RankedAlphabet ext = sigma;
  ext.add(kHoleSymbol, hole_arity);
  return ext;
}

/// Validation mirrors regular trees, except HOLE nodes may repeat.
inline ValidationResult validate_context(const RankedAlphabet& sigma, const Context& c) {
  // Hole nodes break the unique-path analysis only through themselves, so we
  // validate on a copy where each hole is made a fresh 0-ary stopper.
  RegularTree probe = c.tree;
  RankedAlphabet ext = extend_with_hole(sigma, c.hole_arity);
  for (auto& [id, n] : probe.nodes) {
    if (n.symbol && *n.symbol == kHoleSymbol) {
      if (static_cast<int>(n.successors.size()) != c.hole_arity)
        return Violation{"hole arity mismatch at " + id, {}};
    }
  }
  return validate_regular_tree(ext, probe);
}

/// c[u]: replaces every hole of c by u, binding u's variables to the hole's
/// successors at that occurrence. Realized as a graph gluing with one copy of
/// u per hole node.
inline RegularTree substitute_hole(const Context& c, const RegularTree& u) {
  if (u.arity != c.hole_arity)
    throw error("substitute_hole: plug arity " + std::to_string(u.arity) +
                " does not match hole arity " + std::to_string(c.hole_arity));
  if (u.nodes.at(u.root).var) throw error("substitute_hole: plug root is a variable");
  RegularTree out;
  out.arity = c.tree.arity;
  out.root = "c/" + c.tree.root;

  // u's variable nodes, for rerouting
  std::map<int, std::string> u_vars;
  for (const auto& [id, n] : u.nodes)
    if (n.var) u_vars[*n.var] = id;

  // copy the context graph, remembering hole nodes
  std::vector<std::pair<std::string, RegularTree::Node>> holes;  // (id, original node)
  for (const auto& [id, n] : c.tree.nodes) {
    if (n.symbol && *n.symbol == kHoleSymbol) {
      if (static_cast<int>(n.successors.size()) != c.hole_arity)
        throw error("substitute_hole: hole node " + id + " has the wrong successor count");
      holes.emplace_back(id, n);
      continue;  // replaced below
    }
    RegularTree::Node copy = n;
    for (auto& s : copy.successors) s = "c/" + s;
    out.nodes.emplace("c/" + id, std::move(copy));
  }

  // one copy of u per hole; hole id becomes the copy's root id
  for (const auto& [hid, hole] : holes) {
    std::string prefix = "u@" + hid + "/";
    auto mapped = [&](const std::string& uid) -> std::string {
      const auto& un = u.nodes.at(uid);
      if (un.var) return "c/" + hole.successors[static_cast<size_t>(*un.var)];
      if (uid == u.root) return "c/" + hid;
      return prefix + uid;
    };
    for (const auto& [uid, un] : u.nodes) {
      if (un.var) continue;  // rerouted, no copy needed
      RegularTree::Node copy = un;
      for (auto& s : copy.successors) s = mapped(s);
      out.nodes.emplace(mapped(uid), std::move(copy));
    }
  }

  // prune nodes that became unreachable (dropped hole successors etc.)
  std::set<std::string> reach = detail::reachable_nodes(out);
  for (auto it = out.nodes.begin(); it != out.nodes.end();)
    it = reach.count(it->first) ? std::next(it) : out.nodes.erase(it);
  return out;
}

}  // namespace treealg
