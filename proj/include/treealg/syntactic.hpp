#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "treealg/profiles.hpp"

namespace treealg {

/// A reachable element of the profile algebra: its value, its arity, and a
/// witnessing regular tree over the generator alphabet with that value.
struct AlgebraElement {
  int arity = 0;
  ProfileSet value;
  RegularTree witness;
};

// ---------------------------------------------------------------------------
// saturation of the reachable part

namespace detail {

/// Glues the witnesses of a one-level composition into one graph: the root
/// is a fresh symbol node, variable slots become shared variable nodes, and
/// element children splice their witness graphs with renamed variables.
inline RegularTree composition_witness(
    const OneLevelComposition& comp,
    const std::map<int, std::vector<AlgebraElement>>& pool) {
  RegularTree out;
  out.arity = comp.result_arity;
  out.root = "r";

  std::set<int> var_ids;
  RegularTree::Node root;
  root.symbol = comp.symbol;
  for (size_t i = 0; i < comp.children.size(); ++i) {
    const auto& ch = comp.children[i];
    if (ch.is_var) {
      var_ids.insert(ch.var_index);
      root.successors.push_back("x" + std::to_string(ch.var_index));
      continue;
    }
    const RegularTree& w = pool.at(ch.pool_arity)[static_cast<size_t>(ch.pool_index)].witness;
    std::string prefix = "e" + std::to_string(i) + "/";
    auto mapped = [&](const std::string& uid) -> std::string {
      const auto& un = w.nodes.at(uid);
      if (un.var) {
        int ix = ch.var_indices[static_cast<size_t>(*un.var)];
        var_ids.insert(ix);
        return "x" + std::to_string(ix);
      }
      return prefix + uid;
    };
    for (const auto& [uid, un] : w.nodes) {
      if (un.var) continue;
      RegularTree::Node copy = un;
      for (auto& s : copy.successors) s = mapped(s);
      out.nodes.emplace(prefix + uid, std::move(copy));
    }
    root.successors.push_back(mapped(w.root));
  }
  out.nodes.emplace("r", std::move(root));
  for (int ix : var_ids) {
    RegularTree::Node vn;
    vn.var = ix;
    out.nodes.emplace("x" + std::to_string(ix), std::move(vn));
  }
  std::set<std::string> reach = reachable_nodes(out);
  for (auto it = out.nodes.begin(); it != out.nodes.end();)
    it = reach.count(it->first) ? std::next(it) : out.nodes.erase(it);
  return out;
}

}  // namespace detail

/// Fixpoint saturation of the algebra elements reachable from the generators
/// phi(sing(a)), closed under one-level compositions restricted to arities
/// at most max_arity. Termination: finitely many profile sets per arity.
inline std::map<int, std::vector<AlgebraElement>> reachable_elements(const LanguagePair& lang,
                                                                     int max_arity) {
  const ParityTreeAutomaton& a = lang.positive;
  std::map<int, std::vector<AlgebraElement>> pool;
  std::map<int, std::set<ProfileSet>> known;

  auto add = [&](int arity, ProfileSet value, RegularTree witness) {
    if (arity > max_arity) return false;
    if (!known[arity].insert(value).second) return false;
    pool[arity].push_back(AlgebraElement{arity, std::move(value), std::move(witness)});
    return true;
  };

  for (const auto& [symbol, n] : a.alphabet.symbols())
    add(n, phi_sing(a, symbol), term_to_regular(singleton(a.alphabet, symbol)));

  bool grew = true;
  while (grew) {
    grew = false;
    std::map<int, int> sizes;
    for (const auto& [ar, v] : pool) sizes[ar] = static_cast<int>(v.size());
    std::vector<std::pair<ProfileSet, OneLevelComposition>> fresh;
    for_each_one_level(a.alphabet, sizes, max_arity, [&](const OneLevelComposition& comp) {
      ProfileSet value = pi_eval(composition_term(
          comp, [&](const std::string& s) { return phi_sing(a, s); },
          [&](int ar, int ix) { return pool.at(ar)[static_cast<size_t>(ix)].value; }));
      if (!known[comp.result_arity].count(value)) fresh.push_back({std::move(value), comp});
    });
    for (auto& [value, comp] : fresh)
      if (add(comp.result_arity, value, detail::composition_witness(comp, pool))) grew = true;
  }
  return pool;
}

// ---------------------------------------------------------------------------
// the context automaton and the syntactic congruence

namespace detail {

inline std::string sim_state(const std::string& q, int tag) {
  return q + "#" + (tag < 0 ? "-" : std::to_string(tag));
}

const std::string kSimTop = "#top";

/// An automaton over the hole-extended alphabet that simulates `a` on s[u]:
/// ordinary letters run as usual; at a hole in state p it jumps over a whole
/// copy of u by picking a realizable profile tuple, re-emitting the interior
/// minima into the priority stream through tagged successor states. Hole
/// successors dropped by the run are swallowed by a top state.
inline ParityTreeAutomaton simulate_through_holes(const ParityTreeAutomaton& a,
                                                  const std::set<RunProfile>& tuples,
                                                  int hole_arity) {
  ParityTreeAutomaton out;
  out.alphabet = extend_with_hole(a.alphabet, hole_arity);
  out.initial = sim_state(a.initial, -1);

  std::set<int> tags{-1};
  for (int k : a.priorities_used()) tags.insert(k);

  for (const auto& q : a.states)
    for (int t : tags) {
      std::string id = sim_state(q, t);
      out.states.insert(id);
      out.priority[id] = t < 0 ? a.prio(q) : std::min(t, a.prio(q));
    }
  out.states.insert(kSimTop);
  out.priority[kSimTop] = 0;

  for (const auto& q : a.states)
    for (int t : tags) {
      for (const auto& tr : a.transitions) {
        if (tr.state != q) continue;
        ParityTreeAutomaton::Transition nt;
        nt.state = sim_state(q, t);
        nt.symbol = tr.symbol;
        for (const auto& p : tr.successors) nt.successors.push_back(sim_state(p, -1));
        out.transitions.push_back(std::move(nt));
      }
      for (const auto& tuple : tuples) {
        if (tuple.root_state != q) continue;
        ParityTreeAutomaton::Transition nt;
        nt.state = sim_state(q, t);
        nt.symbol = kHoleSymbol;
        for (int j = 0; j < hole_arity; ++j) {
          auto it = tuple.vars.find(j);
          if (it == tuple.vars.end())
            nt.successors.push_back(kSimTop);  // the run drops this subtree
          else
            nt.successors.push_back(sim_state(it->second.second, it->second.first));
        }
        out.transitions.push_back(std::move(nt));
      }
    }

  for (const auto& [symbol, n] : out.alphabet.symbols()) {
    ParityTreeAutomaton::Transition nt;
    nt.state = kSimTop;
    nt.symbol = symbol;
    nt.successors.assign(static_cast<size_t>(n), kSimTop);
    out.transitions.push_back(std::move(nt));
  }
  return out;
}

/// Initial-state union of two automata over one alphabet.
inline ParityTreeAutomaton automaton_union(const ParityTreeAutomaton& a,
                                           const ParityTreeAutomaton& b) {
  if (!(a.alphabet == b.alphabet)) throw error("union: alphabet mismatch");
  ParityTreeAutomaton out;
  out.alphabet = a.alphabet;
  out.initial = "u|init";
  out.states.insert(out.initial);
  out.priority[out.initial] = 0;
  auto copy_side = [&](const ParityTreeAutomaton& src, const std::string& prefix) {
    for (const auto& q : src.states) {
      out.states.insert(prefix + q);
      out.priority[prefix + q] = src.prio(q);
    }
    for (const auto& tr : src.transitions) {
      ParityTreeAutomaton::Transition nt;
      nt.state = prefix + tr.state;
      nt.symbol = tr.symbol;
      for (const auto& p : tr.successors) nt.successors.push_back(prefix + p);
      out.transitions.push_back(nt);
      if (tr.state == src.initial) {
        nt.state = out.initial;
        out.transitions.push_back(std::move(nt));
      }
    }
  };
  copy_side(a, "l|");
  copy_side(b, "r|");
  return out;
}

}  // namespace detail

struct EquivalenceResult {
  bool equivalent = false;
  std::optional<Context> separator;  // a context over Sigma + HOLE when inequivalent
};

/// Decides the syntactic congruence between two elements of the same arity:
/// no context may send one inside the language and the other inside the
/// complement. Realized by the emptiness of a context automaton that runs
/// the positive automaton on s[u] in product with the complement automaton
/// on s[v], plus the mirrored product.
inline EquivalenceResult synt_equiv_with_separator(const LanguagePair& lang,
                                                   const AlgebraElement& u,
                                                   const AlgebraElement& v) {
  if (u.arity != v.arity) throw error("synt_equiv: arity mismatch");
  int m = u.arity;
  auto u_pos = profiles_of_regular(lang.positive, u.witness);
  auto u_comp = profiles_of_regular(lang.complement, u.witness);
  auto v_pos = profiles_of_regular(lang.positive, v.witness);
  auto v_comp = profiles_of_regular(lang.complement, v.witness);

  ParityTreeAutomaton straight =
      product(detail::simulate_through_holes(lang.positive, u_pos, m),
              detail::simulate_through_holes(lang.complement, v_comp, m));
  ParityTreeAutomaton mirrored =
      product(detail::simulate_through_holes(lang.positive, v_pos, m),
              detail::simulate_through_holes(lang.complement, u_comp, m));
  ParityTreeAutomaton context_automaton = detail::automaton_union(straight, mirrored);

  if (auto w = emptiness_witness(context_automaton))
    return {false, Context{m, std::move(*w)}};
  return {true, std::nullopt};
}

inline bool synt_equiv(const LanguagePair& lang, const AlgebraElement& u,
                       const AlgebraElement& v) {
  return synt_equiv_with_separator(lang, u, v).equivalent;
}

// ---------------------------------------------------------------------------
// the syntactic algebra

struct SyntacticAlgebra {
  struct ClassInfo {
    std::string id;
    int representative = 0;          // index into elements[arity]
    std::vector<int> members;        // element indices
    std::optional<bool> accepting;   // set at the language arity
  };

  struct TableRow {
    std::string root;                // generator symbol
    std::vector<std::string> args;   // class ids and variable markers
    std::string result;              // class id
  };

  int max_arity = 0;
  int language_arity = 0;
  std::map<int, std::vector<AlgebraElement>> elements;
  std::map<int, std::vector<ClassInfo>> classes;
  std::map<int, std::vector<int>> element_class;  // element index -> class index
  std::vector<TableRow> table;

  const ClassInfo& class_of(int arity, int element_index) const {
    return classes.at(arity)[static_cast<size_t>(element_class.at(arity)[static_cast<size_t>(
        element_index)])];
  }
};

/// Quotients the reachable elements by pairwise synt_equiv, marks the
/// accepting classes at the language arity, and tabulates one-level products
/// of class representatives.
inline SyntacticAlgebra syntactic_algebra(const LanguagePair& lang, int max_arity) {
  SyntacticAlgebra s;
  s.max_arity = max_arity;
  s.language_arity = 0;
  s.elements = reachable_elements(lang, max_arity);

  for (auto& [arity, elems] : s.elements) {
    auto& classes = s.classes[arity];
    auto& assignment = s.element_class[arity];
    assignment.assign(elems.size(), -1);
    for (size_t i = 0; i < elems.size(); ++i) {
      int found = -1;
      for (size_t c = 0; c < classes.size() && found < 0; ++c)
        if (synt_equiv(lang, elems[i],
                       elems[static_cast<size_t>(classes[c].representative)]))
          found = static_cast<int>(c);
      if (found < 0) {
        found = static_cast<int>(classes.size());
        classes.push_back({"a" + std::to_string(arity) + "c" + std::to_string(found),
                           static_cast<int>(i),
                           {},
                           std::nullopt});
      }
      classes[static_cast<size_t>(found)].members.push_back(static_cast<int>(i));
      assignment[i] = found;
    }
  }

  if (auto it = s.classes.find(s.language_arity); it != s.classes.end()) {
    for (auto& cls : it->second) {
      const auto& elems = s.elements.at(s.language_arity);
      bool acc = membership(lang.positive, elems[static_cast<size_t>(cls.representative)].witness);
      for (int m : cls.members)
        if (membership(lang.positive, elems[static_cast<size_t>(m)].witness) != acc)
          throw error("syntactic_algebra: acceptance not constant on a class");
      cls.accepting = acc;
    }
  }

  // composition table over class representatives
  std::map<int, std::vector<AlgebraElement>> reps;
  for (const auto& [arity, classes] : s.classes)
    for (const auto& cls : classes)
      reps[arity].push_back(s.elements.at(arity)[static_cast<size_t>(cls.representative)]);
  std::map<int, int> sizes;
  for (const auto& [ar, v] : reps) sizes[ar] = static_cast<int>(v.size());

  const ParityTreeAutomaton& a = lang.positive;
  for_each_one_level(a.alphabet, sizes, max_arity, [&](const OneLevelComposition& comp) {
    ProfileSet value = pi_eval(composition_term(
        comp, [&](const std::string& sym) { return phi_sing(a, sym); },
        [&](int ar, int ix) { return reps.at(ar)[static_cast<size_t>(ix)].value; }));
    const auto& elems = s.elements.at(comp.result_arity);
    int element_ix = -1;
    for (size_t i = 0; i < elems.size() && element_ix < 0; ++i)
      if (elems[i].value == value) element_ix = static_cast<int>(i);
    if (element_ix < 0) throw error("syntactic_algebra: composition left the saturated set");

    SyntacticAlgebra::TableRow row;
    row.root = comp.symbol;
    for (const auto& ch : comp.children) {
      if (ch.is_var) {
        row.args.push_back("x" + std::to_string(ch.var_index));
      } else {
        std::string arg = s.classes.at(ch.pool_arity)[static_cast<size_t>(ch.pool_index)].id;
        if (ch.pool_arity > 0) {
          arg += "(";
          for (size_t k = 0; k < ch.var_indices.size(); ++k)
            arg += (k ? ",x" : "x") + std::to_string(ch.var_indices[k]);
          arg += ")";
        }
        row.args.push_back(std::move(arg));
      }
    }
    row.result = s.class_of(comp.result_arity, element_ix).id;
    s.table.push_back(std::move(row));
  });
  return s;
}

// ---------------------------------------------------------------------------
// commutativity

struct CommutativityResult {
  bool commutative = true;
  std::string symbol;            // counterexample generator when false
  std::vector<int> permutation;  // the violating sigma
  std::optional<Context> separator;
};

/// A language is commutative iff sing(a) is syntactically equivalent to each
/// of its variable permutations, for every generator symbol a.
inline CommutativityResult is_commutative(const LanguagePair& lang, const SyntacticAlgebra& s) {
  const RankedAlphabet& sigma = lang.positive.alphabet;
  for (const auto& [symbol, m] : sigma.symbols())
    if (m > s.max_arity)
      throw error("is_commutative: algebra not computed up to generator arity");

  for (const auto& [symbol, m] : sigma.symbols()) {
    if (m < 2) continue;  // only the identity permutation exists
    SymbolTerm base = singleton(sigma, symbol);
    AlgebraElement u{m, phi(lang.positive, base), term_to_regular(base)};

    std::vector<int> perm(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) perm[static_cast<size_t>(i)] = i;
    while (std::next_permutation(perm.begin(), perm.end())) {
      SymbolTerm permuted = base;
      permuted.root.children.clear();
      for (int i = 0; i < m; ++i)
        permuted.root.children.push_back(var_node<std::string>(perm[static_cast<size_t>(i)]));
      AlgebraElement v{m, phi(lang.positive, permuted), term_to_regular(permuted)};
      EquivalenceResult r = synt_equiv_with_separator(lang, u, v);
      if (!r.equivalent) return {false, symbol, perm, std::move(r.separator)};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// recognition through the quotient

namespace detail {
inline bool recognizes_value(const SyntacticAlgebra& s, const ProfileSet& value, int arity) {
  auto it = s.elements.find(arity);
  if (it == s.elements.end()) throw error("recognizes: arity outside the computed algebra");
  for (size_t i = 0; i < it->second.size(); ++i)
    if (it->second[i].value == value) {
      const auto& cls = s.class_of(arity, static_cast<int>(i));
      if (!cls.accepting) throw error("recognizes: class has no acceptance verdict");
      return *cls.accepting;
    }
  throw error("recognizes: value outside the saturated set");
}
}  // namespace detail

/// Classifies t by its algebra value and answers through the accepting
/// classes; must agree with membership in the positive automaton.
inline bool recognizes(const LanguagePair& lang, const SyntacticAlgebra& s, const SymbolTerm& t) {
  if (t.arity != s.language_arity) throw error("recognizes: arity mismatch");
  return detail::recognizes_value(s, phi(lang.positive, t), t.arity);
}

inline bool recognizes(const LanguagePair& lang, const SyntacticAlgebra& s, const RegularTree& g) {
  if (g.arity != s.language_arity) throw error("recognizes: arity mismatch");
  return detail::recognizes_value(s, profile_set_of_regular(lang.positive, g), g.arity);
}

}  // namespace treealg
