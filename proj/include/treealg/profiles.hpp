#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "treealg/automaton.hpp"

namespace treealg {

// ---------------------------------------------------------------------------
// the omega-semigroup S_A of path segments and infinite branches

/// A finite run segment: starts in `from`, ends in `to`, minimal priority
/// `min_priority` (both endpoint states included in the minimum).
struct SFin {
  std::string from;
  int min_priority;
  std::string to;

  auto operator<=>(const SFin&) const = default;
};

/// An infinite branch witness: starts in `state` and satisfies the parity
/// condition.
struct SInf {
  std::string state;

  auto operator<=>(const SInf&) const = default;
};

using SElement = std::variant<SFin, SInf>;

/// Binary product; mismatching interface states leave the product undefined.
inline std::optional<SElement> s_mul(const SElement& x, const SElement& y) {
  if (!std::holds_alternative<SFin>(x)) return std::nullopt;  // Inf * _ undefined
  const SFin& a = std::get<SFin>(x);
  if (const SFin* b = std::get_if<SFin>(&y)) {
    if (a.to != b->from) return std::nullopt;
    return SElement{SFin{a.from, std::min(a.min_priority, b->min_priority), b->to}};
  }
  const SInf& b = std::get<SInf>(y);
  if (a.to != b.state) return std::nullopt;
  return SElement{SInf{a.from}};
}

/// Infinite product of prefix . loop^omega. Defined iff the states chain and
/// the liminf of the segment minima -- the minimum over the loop -- is even.
inline std::optional<SElement> s_omega(const std::vector<SFin>& prefix,
                                       const std::vector<SFin>& loop) {
  if (loop.empty()) throw error("s_omega: empty loop");
  auto chained = [](const std::vector<SFin>& xs) {
    for (size_t i = 0; i + 1 < xs.size(); ++i)
      if (xs[i].to != xs[i + 1].from) return false;
    return true;
  };
  if (!chained(prefix) || !chained(loop)) return std::nullopt;
  if (!prefix.empty() && prefix.back().to != loop.front().from) return std::nullopt;
  if (loop.back().to != loop.front().from) return std::nullopt;
  int m = loop.front().min_priority;
  for (const auto& s : loop) m = std::min(m, s.min_priority);
  if (m % 2 != 0) return std::nullopt;
  return SElement{SInf{prefix.empty() ? loop.front().from : prefix.front().from}};
}

// ---------------------------------------------------------------------------
// partial profiles (conjunctions) and profile sets (disjunctions)

/// A variable-free branch obligation: some run from `state` keeps all its
/// infinite branches accepting.
struct BranchAtom {
  std::string state;

  auto operator<=>(const BranchAtom&) const = default;
};

/// A path obligation to variable x_index: enter at `from`, exit at `to`, with
/// minimal priority `min_priority` on the way (endpoints included).
struct VarAtom {
  std::string from;
  int min_priority;
  std::string to;
  int index;

  auto operator<=>(const VarAtom&) const = default;
};

using Atom = std::variant<BranchAtom, VarAtom>;

/// A conjunction of atoms with at most one Var atom per variable index.
struct PartialProfile {
  std::vector<Atom> atoms;  // sorted, unique

  /// Returns nullopt when two Var atoms disagree on one index (the meet of
  /// such conjunctions collapses to bottom).
  static std::optional<PartialProfile> make(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    std::set<int> var_indices;
    for (const auto& at : atoms)
      if (const VarAtom* v = std::get_if<VarAtom>(&at))
        if (!var_indices.insert(v->index).second) return std::nullopt;
    return PartialProfile{std::move(atoms)};
  }

  bool contains(const Atom& a) const {
    return std::binary_search(atoms.begin(), atoms.end(), a);
  }

  /// Set inclusion of atom sets (this contains all atoms of other).
  bool contains_all(const PartialProfile& other) const {
    return std::includes(atoms.begin(), atoms.end(), other.atoms.begin(), other.atoms.end());
  }

  auto operator<=>(const PartialProfile&) const = default;
};

/// An element of the transition algebra: a single conjunction or bottom.
using TransitionElement = std::optional<PartialProfile>;

/// A disjunction of conjunctions, kept as an antichain under the subsumption
/// order C <= C' iff C contains C' as an atom set. Bottom is the empty
/// disjunction.
struct ProfileSet {
  int arity = 0;
  std::vector<PartialProfile> disjuncts;  // sorted antichain

  bool is_bottom() const { return disjuncts.empty(); }

  static ProfileSet bottom(int arity) { return ProfileSet{arity, {}}; }

  auto operator<=>(const ProfileSet&) const = default;
};

/// Sorts, deduplicates, and drops every disjunct subsumed by (a strict
/// superset of) another.
inline ProfileSet normalize(int arity, std::vector<PartialProfile> disjuncts) {
  std::sort(disjuncts.begin(), disjuncts.end());
  disjuncts.erase(std::unique(disjuncts.begin(), disjuncts.end()), disjuncts.end());
  std::vector<PartialProfile> kept;
  for (size_t i = 0; i < disjuncts.size(); ++i) {
    bool subsumed = false;
    for (size_t j = 0; j < disjuncts.size() && !subsumed; ++j)
      subsumed = i != j && disjuncts[i].contains_all(disjuncts[j]) &&
                 disjuncts[i].atoms != disjuncts[j].atoms;
    if (!subsumed) kept.push_back(disjuncts[i]);
  }
  return ProfileSet{arity, std::move(kept)};
}

// ---------------------------------------------------------------------------
// evaluation: the product of the profile algebra on finite trees

namespace detail {

struct ChildInfo {
  bool is_outer_var = false;
  int outer_index = -1;
  const PartialProfile* chosen = nullptr;  // for entered element children
};

/// Multiplies one conjunction with chosen child disjuncts along every atom
/// path; an undefined segment product kills the whole choice.
inline std::optional<PartialProfile> compose_conjunction(const PartialProfile& c,
                                                         const std::vector<ChildInfo>& children) {
  std::vector<Atom> out;
  for (const Atom& at : c.atoms) {
    if (const BranchAtom* b = std::get_if<BranchAtom>(&at)) {
      out.push_back(*b);
      continue;
    }
    const VarAtom& v = std::get<VarAtom>(at);
    const ChildInfo& ch = children[static_cast<size_t>(v.index)];
    if (ch.is_outer_var) {
      out.push_back(VarAtom{v.from, v.min_priority, v.to, ch.outer_index});
      continue;
    }
    for (const Atom& beta : ch.chosen->atoms) {
      if (const BranchAtom* b = std::get_if<BranchAtom>(&beta)) {
        if (b->state != v.to) return std::nullopt;
        out.push_back(BranchAtom{v.from});
      } else {
        const VarAtom& w = std::get<VarAtom>(beta);
        if (w.from != v.to) return std::nullopt;
        out.push_back(VarAtom{v.from, std::min(v.min_priority, w.min_priority), w.to, w.index});
      }
    }
  }
  return PartialProfile::make(std::move(out));
}

inline ProfileSet pi_eval_node(const TermNode<ProfileSet>& n, int term_arity) {
  if (n.is_var()) throw error("pi_eval: variable cannot be evaluated on its own");
  const ProfileSet& label = n.label();
  if (label.arity != static_cast<int>(n.children.size()))
    throw error("pi_eval: label arity " + std::to_string(label.arity) +
                " does not match successor count " + std::to_string(n.children.size()));

  std::vector<ChildInfo> info(n.children.size());
  std::vector<ProfileSet> child_values(n.children.size());
  for (size_t i = 0; i < n.children.size(); ++i) {
    if (n.children[i].is_var()) {
      info[i].is_outer_var = true;
      info[i].outer_index = n.children[i].var();
    } else {
      child_values[i] = pi_eval_node(n.children[i], term_arity);
    }
  }

  std::vector<PartialProfile> out;
  for (const PartialProfile& c : label.disjuncts) {
    // only the children entered by the conjunction multiply the choices;
    // subtrees the conjunction drops also vanish from the flattening, so
    // their values (even bottom) cannot matter
    std::vector<int> entered;
    for (const Atom& at : c.atoms)
      if (const VarAtom* v = std::get_if<VarAtom>(&at))
        if (!info[static_cast<size_t>(v->index)].is_outer_var) entered.push_back(v->index);
    std::sort(entered.begin(), entered.end());
    entered.erase(std::unique(entered.begin(), entered.end()), entered.end());

    bool dead_child = false;
    for (int j : entered) dead_child |= child_values[static_cast<size_t>(j)].is_bottom();
    if (dead_child) continue;  // entering a bottom child kills this choice

    std::vector<size_t> pick(entered.size(), 0);
    while (true) {
      for (size_t k = 0; k < entered.size(); ++k)
        info[static_cast<size_t>(entered[k])].chosen =
            &child_values[static_cast<size_t>(entered[k])].disjuncts[pick[k]];
      if (auto composed = compose_conjunction(c, info)) out.push_back(std::move(*composed));
      size_t k = 0;
      for (; k < entered.size(); ++k) {
        if (++pick[k] < child_values[static_cast<size_t>(entered[k])].disjuncts.size()) break;
        pick[k] = 0;
      }
      if (k == entered.size()) break;
    }
  }
  return normalize(term_arity, std::move(out));
}

}  // namespace detail

/// The product of the profile algebra on a finite tree labelled by algebra
/// elements: for every per-vertex choice of a disjunct, the semigroup
/// elements are multiplied along every atom path, the results conjoined, and
/// the disjunction over all choices taken. A vertex labelled bottom
/// annihilates the whole product.
inline ProfileSet pi_eval(const Term<ProfileSet>& t) {
  return detail::pi_eval_node(t.root, t.arity);
}

// ---------------------------------------------------------------------------
// the morphism phi

/// Value of the singleton tree of a symbol: one disjunct per transition.
inline ProfileSet phi_sing(const ParityTreeAutomaton& a, const std::string& symbol) {
  int n = a.alphabet.arity(symbol);
  std::vector<PartialProfile> disjuncts;
  for (const auto& t : a.transitions) {
    if (t.symbol != symbol) continue;
    std::vector<Atom> atoms{BranchAtom{t.state}};
    for (int i = 0; i < n; ++i) {
      const std::string& p = t.successors[static_cast<size_t>(i)];
      atoms.push_back(VarAtom{t.state, std::min(a.prio(t.state), a.prio(p)), p, i});
    }
    auto pp = PartialProfile::make(std::move(atoms));
    disjuncts.push_back(std::move(*pp));  // distinct indices, never conflicts
  }
  return normalize(n, std::move(disjuncts));
}

/// phi(t) = the disjunction over all partial runs of their profiles,
/// computed through the algebra product (phi is a morphism).
inline ProfileSet phi(const ParityTreeAutomaton& a, const SymbolTerm& t) {
  if (auto v = validate_term(a.alphabet, t)) throw error("phi: " + v->describe());
  return pi_eval(relabel(t, [&](const std::string& s) { return phi_sing(a, s); }));
}

/// Acceptance criterion at arity 0: some disjunct is subsumed by the pure
/// initial-state obligation, i.e. contains Branch(q0).
inline bool accepts_via_phi(const ParityTreeAutomaton& a, const ProfileSet& e) {
  if (e.arity != 0) throw error("accepts_via_phi: arity 0 expected");
  for (const auto& c : e.disjuncts)
    if (c.contains(Atom{BranchAtom{a.initial}})) return true;
  return false;
}

// ---------------------------------------------------------------------------
// profiles of regular trees

namespace detail {

struct ProfileCandidate {
  std::string root_state;
  std::map<int, std::pair<int, std::string>> vars;
};

/// One parity game per candidate tuple: Even rebuilds a run top-down, Odd
/// challenges a branch; positions track the minimal priority seen on the way
/// so that variable exits can be checked exactly.
inline bool candidate_realizable(const ParityTreeAutomaton& a, const RegularTree& g,
                                 const ProfileCandidate& cand) {
  ParityGame game;
  using Key = std::tuple<std::string, std::string, int>;  // node, state, min record
  std::vector<Key> todo;
  auto pos_id = [](const Key& k) {
    return "s|" + std::get<0>(k) + "|" + std::get<1>(k) + "|" + std::to_string(std::get<2>(k));
  };
  auto state_pos = [&](const std::string& node, const std::string& q, int m) {
    Key k{node, q, m};
    std::string id = pos_id(k);
    if (!game.has_position(id)) {
      const auto& n = g.at(node);
      if (n.var) {
        auto it = cand.vars.find(*n.var);
        bool ok = it != cand.vars.end() && it->second.second == q && it->second.first == m;
        game.add_position(id, ok ? Player::odd : Player::even, a.prio(q));
      } else {
        game.add_position(id, Player::even, a.prio(q));
        todo.push_back(k);
      }
    }
    return id;
  };

  int root_m = a.prio(cand.root_state);
  std::string start = state_pos(g.root, cand.root_state, root_m);
  std::set<Key> seen;
  while (!todo.empty()) {
    Key k = todo.back();
    todo.pop_back();
    if (!seen.insert(k).second) continue;
    auto& [node, q, m] = k;
    const auto& n = g.at(node);
    auto trs = a.from(q, *n.symbol);
    for (size_t ti = 0; ti < trs.size(); ++ti) {
      std::string tid = "t|" + node + "|" + q + "|" + std::to_string(m) + "|" + std::to_string(ti);
      game.add_position(tid, Player::odd, a.prio(q));
      game.add_edge(pos_id(k), tid);
      for (size_t i = 0; i < n.successors.size(); ++i) {
        const std::string& p = trs[ti]->successors[i];
        game.add_edge(tid, state_pos(n.successors[i], p, std::min(m, a.prio(p))));
      }
    }
  }
  return solve(game).even_region.count(start) > 0;
}

}  // namespace detail

/// All tuples <q, (k_j, p_j)_j> realizable by a partial run on the
/// unravelling of g whose infinite branches all satisfy the parity condition.
inline std::set<RunProfile> profiles_of_regular(const ParityTreeAutomaton& a,
                                                const RegularTree& g) {
  for (const auto& [id, n] : g.nodes)
    if (n.symbol && !a.alphabet.contains(*n.symbol))
      throw error("profiles_of_regular: symbol " + *n.symbol + " not in automaton alphabet");

  std::set<int> vars;
  for (const auto& [id, n] : g.nodes)
    if (n.var) vars.insert(*n.var);

  std::set<RunProfile> out;
  std::vector<int> var_list(vars.begin(), vars.end());
  std::vector<std::pair<int, std::string>> options;
  for (const auto& q : a.states)
    for (int k : a.priorities_used()) options.push_back({k, q});

  for (const auto& q0 : a.states) {
    std::vector<size_t> pick(var_list.size(), 0);
    while (true) {
      detail::ProfileCandidate cand;
      cand.root_state = q0;
      bool plausible = true;
      for (size_t i = 0; i < var_list.size(); ++i) {
        const auto& [k, p] = options[pick[i]];
        // the minimum includes both endpoints
        if (k > a.prio(q0) || k > a.prio(p)) plausible = false;
        cand.vars[var_list[i]] = {k, p};
      }
      if (plausible && detail::candidate_realizable(a, g, cand))
        out.insert(RunProfile{cand.root_state, cand.vars});
      size_t i = 0;
      for (; i < var_list.size(); ++i) {
        if (++pick[i] < options.size()) break;
        pick[i] = 0;
      }
      if (i == var_list.size()) break;
    }
  }
  return out;
}

/// Assembles the realizable profiles of g into the algebra value of g (phi
/// extended to regular trees).
inline ProfileSet profile_set_of_regular(const ParityTreeAutomaton& a, const RegularTree& g) {
  std::vector<PartialProfile> disjuncts;
  for (const auto& rp : profiles_of_regular(a, g)) {
    std::vector<Atom> atoms{BranchAtom{rp.root_state}};
    for (const auto& [j, kp] : rp.vars)
      atoms.push_back(VarAtom{rp.root_state, kp.first, kp.second, j});
    disjuncts.push_back(std::move(*PartialProfile::make(std::move(atoms))));
  }
  return normalize(g.arity, std::move(disjuncts));
}

// ---------------------------------------------------------------------------
// the transition algebra T(A)

/// Meet: atom-set union; conflicting Var atoms on one index yield bottom,
/// and bottom absorbs.
inline TransitionElement t_meet(const TransitionElement& x, const TransitionElement& y) {
  if (!x || !y) return std::nullopt;
  std::vector<Atom> atoms = x->atoms;
  atoms.insert(atoms.end(), y->atoms.begin(), y->atoms.end());
  return PartialProfile::make(std::move(atoms));
}

/// Meet of two disjunctions, computed by distributing; bottom conjuncts
/// vanish from the result.
inline ProfileSet meet(const ProfileSet& x, const ProfileSet& y) {
  if (x.arity != y.arity) throw error("meet: arity mismatch");
  std::vector<PartialProfile> out;
  for (const auto& cx : x.disjuncts)
    for (const auto& cy : y.disjuncts)
      if (auto m = t_meet(cx, cy)) out.push_back(std::move(*m));
  return normalize(x.arity, std::move(out));
}

/// True iff e equals the meet of its projections: per variable index the
/// disjunction of its Var atoms, plus the disjunction of its Branch atoms.
inline bool is_rectangular(const ProfileSet& e, int arity) {
  if (e.arity != arity) throw error("is_rectangular: arity mismatch");
  if (e.is_bottom()) return true;  // bottom is the empty meet of projections
  std::vector<PartialProfile> branch_proj;
  for (const auto& c : e.disjuncts) {
    std::vector<Atom> atoms;
    for (const auto& at : c.atoms)
      if (std::holds_alternative<BranchAtom>(at)) atoms.push_back(at);
    branch_proj.push_back(std::move(*PartialProfile::make(std::move(atoms))));
  }
  ProfileSet acc = normalize(arity, std::move(branch_proj));
  for (int j = 0; j < arity; ++j) {
    std::vector<PartialProfile> var_proj;
    for (const auto& c : e.disjuncts) {
      std::vector<Atom> atoms;
      for (const auto& at : c.atoms)
        if (const VarAtom* v = std::get_if<VarAtom>(&at); v && v->index == j)
          atoms.push_back(at);
      var_proj.push_back(std::move(*PartialProfile::make(std::move(atoms))));
    }
    acc = meet(acc, normalize(arity, std::move(var_proj)));
  }
  return acc == normalize(arity, e.disjuncts);
}

// ---------------------------------------------------------------------------
// one-level compositions

/// A depth-one composition: a generator symbol applied to children that are
/// either fresh variables or elements from a per-arity pool; every variable
/// slot receives a distinct result index.
struct OneLevelComposition {
  struct Child {
    bool is_var = false;
    int var_index = -1;    // result index when is_var
    int pool_arity = -1;   // element child otherwise
    int pool_index = -1;
    std::vector<int> var_indices;  // result indices of the element's own slots
  };

  std::string symbol;
  int result_arity = 0;
  std::vector<Child> children;
};

namespace detail {

template <typename F>
void assign_slots(int slot_count, int result_arity, std::vector<int>& chosen,
                  std::vector<char>& used, F&& f) {
  if (static_cast<int>(chosen.size()) == slot_count) {
    f(chosen);
    return;
  }
  for (int ix = 0; ix < result_arity; ++ix) {
    if (used[static_cast<size_t>(ix)]) continue;
    used[static_cast<size_t>(ix)] = 1;
    chosen.push_back(ix);
    assign_slots(slot_count, result_arity, chosen, used, f);
    chosen.pop_back();
    used[static_cast<size_t>(ix)] = 0;
  }
}

}  // namespace detail

/// Enumerates every one-level composition over the given pools with result
/// arity at most max_arity, in a deterministic order.
template <typename F>
void for_each_one_level(const RankedAlphabet& sigma, const std::map<int, int>& pool_sizes,
                        int max_arity, F&& f) {
  for (const auto& [symbol, r] : sigma.symbols()) {
    // choose per child: a variable slot or an element from some pool
    std::vector<std::pair<int, int>> element_options;  // (pool arity, index)
    for (const auto& [ar, count] : pool_sizes)
      for (int i = 0; i < count; ++i) element_options.push_back({ar, i});

    std::vector<int> choice(static_cast<size_t>(r), -1);  // -1 = variable
    while (true) {
      int slot_count = 0;
      for (int i = 0; i < r; ++i) {
        int c = choice[static_cast<size_t>(i)];
        slot_count += c < 0 ? 1 : element_options[static_cast<size_t>(c)].first;
      }
      for (int n = slot_count; n <= max_arity; ++n) {
        std::vector<int> chosen;
        std::vector<char> used(static_cast<size_t>(n), 0);
        detail::assign_slots(slot_count, n, chosen, used, [&](const std::vector<int>& slots) {
          OneLevelComposition comp;
          comp.symbol = symbol;
          comp.result_arity = n;
          size_t next_slot = 0;
          for (int i = 0; i < r; ++i) {
            OneLevelComposition::Child ch;
            int c = choice[static_cast<size_t>(i)];
            if (c < 0) {
              ch.is_var = true;
              ch.var_index = slots[next_slot++];
            } else {
              ch.pool_arity = element_options[static_cast<size_t>(c)].first;
              ch.pool_index = element_options[static_cast<size_t>(c)].second;
              for (int k = 0; k < ch.pool_arity; ++k)
                ch.var_indices.push_back(slots[next_slot++]);
            }
            comp.children.push_back(std::move(ch));
          }
          f(comp);
        });
      }
      // next choice vector
      int i = 0;
      for (; i < r; ++i) {
        int& c = choice[static_cast<size_t>(i)];
        if (++c < static_cast<int>(element_options.size())) break;
        c = -1;
      }
      if (i == r) break;
    }
  }
}

/// Builds the evaluation term of a composition from the pool values.
template <typename GenValue, typename PoolValue>
Term<ProfileSet> composition_term(const OneLevelComposition& comp, GenValue&& gen,
                                  PoolValue&& pool) {
  TermNode<ProfileSet> root{gen(comp.symbol), {}};
  for (const auto& ch : comp.children) {
    if (ch.is_var) {
      root.children.push_back(var_node<ProfileSet>(ch.var_index));
    } else {
      TermNode<ProfileSet> en{pool(ch.pool_arity, ch.pool_index), {}};
      for (int ix : ch.var_indices) en.children.push_back(var_node<ProfileSet>(ix));
      root.children.push_back(std::move(en));
    }
  }
  return Term<ProfileSet>{comp.result_arity, std::move(root)};
}

// ---------------------------------------------------------------------------
// the hat algebra

/// A reachable element of the span subalgebra of A x T(A): an algebra value
/// together with the profile of one partial run (or bottom, when composed
/// runs fail to chain).
struct HatPair {
  int arity = 0;
  ProfileSet value;
  TransitionElement run;

  auto operator<=>(const HatPair&) const = default;
};

/// Generator pairs arise from singleton terms: the full phi value of the
/// symbol paired with one transition's run profile.
inline std::vector<HatPair> hat_generators(const ParityTreeAutomaton& a) {
  std::vector<HatPair> out;
  for (const auto& [symbol, n] : a.alphabet.symbols()) {
    ProfileSet value = phi_sing(a, symbol);
    for (const auto& c : value.disjuncts) out.push_back({n, value, c});
  }
  return out;
}

/// Saturates the generator pairs under one-level products up to the arity
/// bound; both coordinate algebras are finite per arity, so this terminates.
inline std::set<HatPair> hat_closure(const ParityTreeAutomaton& a,
                                     const std::vector<HatPair>& generators, int max_arity) {
  std::map<int, std::vector<HatPair>> pool;  // by arity
  std::set<HatPair> seen;
  for (const auto& g : generators)
    if (g.arity <= max_arity && seen.insert(g).second) pool[g.arity].push_back(g);

  std::map<std::string, ProfileSet> gen_value;
  std::map<std::string, std::vector<PartialProfile>> gen_runs;
  for (const auto& [symbol, n] : a.alphabet.symbols()) {
    gen_value.emplace(symbol, phi_sing(a, symbol));
    for (const auto& c : gen_value.at(symbol).disjuncts) gen_runs[symbol].push_back(c);
  }

  bool grew = true;
  while (grew) {
    grew = false;
    std::map<int, int> sizes;
    for (const auto& [ar, v] : pool) sizes[ar] = static_cast<int>(v.size());
    std::vector<HatPair> fresh;
    for_each_one_level(a.alphabet, sizes, max_arity, [&](const OneLevelComposition& comp) {
      ProfileSet value = pi_eval(composition_term(
          comp, [&](const std::string& s) { return gen_value.at(s); },
          [&](int ar, int ix) { return pool.at(ar)[static_cast<size_t>(ix)].value; }));
      // second coordinate: same product with singleton disjunctions
      for (const PartialProfile& root_run : gen_runs.at(comp.symbol)) {
        ProfileSet second = pi_eval(composition_term(
            comp,
            [&](const std::string&) {
              return ProfileSet{a.alphabet.arity(comp.symbol), {root_run}};
            },
            [&](int ar, int ix) {
              const TransitionElement& te = pool.at(ar)[static_cast<size_t>(ix)].run;
              if (!te) return ProfileSet::bottom(ar);
              return ProfileSet{ar, {*te}};
            }));
        HatPair hp{comp.result_arity, value,
                   second.is_bottom() ? TransitionElement{}
                                      : TransitionElement{second.disjuncts.front()}};
        if (!seen.count(hp)) fresh.push_back(std::move(hp));
      }
    });
    for (auto& hp : fresh)
      if (seen.insert(hp).second) {
        pool[hp.arity].push_back(hp);
        grew = true;
      }
  }
  return seen;
}

}  // namespace treealg
