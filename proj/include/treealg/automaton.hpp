#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "treealg/parity_game.hpp"
#include "treealg/regular_tree.hpp"
#include "treealg/term.hpp"

namespace treealg {

/// Nondeterministic parity tree automaton <Q, Sigma, Delta, q0, Omega>.
/// Acceptance: every infinite branch of a run has an even minimal priority
/// among those seen infinitely often.
struct ParityTreeAutomaton {
  struct Transition {
    std::string state;
    std::string symbol;
    std::vector<std::string> successors;

    auto operator<=>(const Transition&) const = default;
  };

  std::set<std::string> states;
  RankedAlphabet alphabet;
  std::string initial;
  std::map<std::string, int> priority;
  std::vector<Transition> transitions;

  int prio(const std::string& q) const {
    auto it = priority.find(q);
    if (it == priority.end()) throw error("automaton: no priority for state " + q);
    return it->second;
  }

  std::vector<const Transition*> from(const std::string& q, const std::string& symbol) const {
    std::vector<const Transition*> out;
    for (const auto& t : transitions)
      if (t.state == q && t.symbol == symbol) out.push_back(&t);
    return out;
  }

  std::set<int> priorities_used() const {
    std::set<int> out;
    for (const auto& [q, k] : priority) out.insert(k);
    return out;
  }
};

inline ValidationResult validate_automaton(const ParityTreeAutomaton& a) {
  if (!a.states.count(a.initial)) return Violation{"initial state not declared", {}};
  for (const auto& q : a.states) {
    auto it = a.priority.find(q);
    if (it == a.priority.end()) return Violation{"priority map not total (missing " + q + ")", {}};
    if (it->second < 0) return Violation{"negative priority of " + q, {}};
  }
  for (const auto& t : a.transitions) {
    if (!a.states.count(t.state)) return Violation{"transition from unknown state " + t.state, {}};
    if (!a.alphabet.contains(t.symbol))
      return Violation{"transition on unknown symbol " + t.symbol, {}};
    if (static_cast<int>(t.successors.size()) != a.alphabet.arity(t.symbol))
      return Violation{"transition successor count does not match arity of " + t.symbol, {}};
    for (const auto& p : t.successors)
      if (!a.states.count(p)) return Violation{"transition to unknown state " + p, {}};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// runs on finite trees

/// Root state plus, per occurring variable, the minimal priority along the
/// unique root path (both endpoints included) and the exit state.
struct RunProfile {
  std::string root_state;
  std::map<int, std::pair<int, std::string>> vars;  // index -> (min priority, state)

  auto operator<=>(const RunProfile&) const = default;
};

/// Checks that rho (a state-labelled tree of the same shape as t) is a
/// partial run and computes its profile. Finite trees have no infinite
/// branches, so only the transition relation is checked.
inline std::variant<RunProfile, Violation> check_run(const ParityTreeAutomaton& a,
                                                     const SymbolTerm& t,
                                                     const Term<std::string>& rho) {
  RunProfile profile;
  std::vector<int> path;
  auto rec = [&](auto&& self, const SymbolNode& tn, const TermNode<std::string>& rn,
                 int min_prio) -> std::optional<Violation> {
    if (rn.is_var()) return Violation{"run tree must label every node with a state", path};
    const std::string& q = rn.label();
    if (!a.states.count(q)) return Violation{"unknown state " + q, path};
    int m = std::min(min_prio, a.prio(q));
    if (tn.is_var()) {
      if (!rn.children.empty()) return Violation{"run node of a variable must be a leaf", path};
      profile.vars[tn.var()] = {m, q};
      return std::nullopt;
    }
    if (rn.children.size() != tn.children.size())
      return Violation{"run tree shape mismatch", path};
    bool matched = false;
    for (const auto* tr : a.from(q, tn.label())) {
      bool ok = true;
      for (size_t i = 0; i < tn.children.size() && ok; ++i)
        ok = !rn.children[i].is_var() && rn.children[i].label() == tr->successors[i];
      if (ok) {
        matched = true;
        break;
      }
    }
    if (!matched) return Violation{"no transition matches the labelling", path};
    for (size_t i = 0; i < tn.children.size(); ++i) {
      path.push_back(static_cast<int>(i));
      if (auto v = self(self, tn.children[i], rn.children[i], m)) return v;
      path.pop_back();
    }
    return std::nullopt;
  };
  if (rho.root.is_var()) return Violation{"run tree root must carry a state", {}};
  profile.root_state = rho.root.label();
  if (auto v = rec(rec, t.root, rho.root, a.prio(rho.root.label()))) return *v;
  return profile;
}

/// All profiles of partial runs of a on t that start in state q, by
/// exhaustive labelling.
inline std::set<RunProfile> enumerate_runs(const ParityTreeAutomaton& a, const SymbolTerm& t,
                                           const std::string& q) {
  using VarMap = std::map<int, std::pair<int, std::string>>;
  auto rec = [&](auto&& self, const SymbolNode& n, const std::string& state,
                 int m) -> std::set<VarMap> {
    if (n.is_var()) return {VarMap{{n.var(), {m, state}}}};
    std::set<VarMap> out;
    for (const auto* tr : a.from(state, n.label())) {
      std::set<VarMap> acc = {VarMap{}};
      for (size_t i = 0; i < n.children.size(); ++i) {
        const std::string& p = tr->successors[i];
        std::set<VarMap> child = self(self, n.children[i], p, std::min(m, a.prio(p)));
        std::set<VarMap> next;
        for (const auto& base : acc)
          for (const auto& ext : child) {
            VarMap merged = base;
            merged.insert(ext.begin(), ext.end());
            next.insert(std::move(merged));
          }
        acc = std::move(next);
        if (acc.empty()) break;
      }
      out.insert(acc.begin(), acc.end());
    }
    return out;
  };
  std::set<RunProfile> result;
  if (t.root.is_var()) throw error("enumerate_runs: root is a variable");
  if (!a.states.count(q)) throw error("enumerate_runs: unknown state " + q);
  for (auto& vars : rec(rec, t.root, q, a.prio(q))) result.insert(RunProfile{q, vars});
  return result;
}

// ---------------------------------------------------------------------------
// membership of regular trees

/// Variable handling for trees of arity > 0: x_j may be accepted exactly from
/// the states listed under j.
using AcceptFromMap = std::map<int, std::set<std::string>>;

namespace detail {

inline std::string game_state_id(const std::string& node, const std::string& q) {
  return "s|" + node + "|" + q;
}

}  // namespace detail

/// Decides whether the unravelling of g is accepted from a.initial, as a
/// parity game on (node of g) x Q: Even picks transitions, Odd picks
/// directions.
inline bool membership(const ParityTreeAutomaton& a, const RegularTree& g,
                       const AcceptFromMap& accept_from = {}) {
  for (const auto& [id, n] : g.nodes) {
    if (n.var && accept_from.empty())
      throw error("membership: tree has variables but no accept-from map");
    if (n.symbol && !a.alphabet.contains(*n.symbol))
      throw error("membership: symbol " + *n.symbol + " not in automaton alphabet");
  }

  ParityGame game;
  std::vector<std::pair<std::string, std::string>> todo;  // (node, state)
  std::set<std::pair<std::string, std::string>> seen;

  auto state_pos = [&](const std::string& node, const std::string& q) {
    std::string id = detail::game_state_id(node, q);
    if (!game.has_position(id)) {
      const auto& n = g.at(node);
      if (n.var) {
        auto it = accept_from.find(*n.var);
        bool ok = it != accept_from.end() && it->second.count(q);
        // a satisfied variable is a dead-end for Odd, a failed one for Even
        game.add_position(id, ok ? Player::odd : Player::even, a.prio(q));
      } else {
        game.add_position(id, Player::even, a.prio(q));
        todo.push_back({node, q});
      }
    }
    return id;
  };

  std::string start = state_pos(g.root, a.initial);
  while (!todo.empty()) {
    auto [node, q] = todo.back();
    todo.pop_back();
    if (!seen.insert({node, q}).second) continue;
    const auto& n = g.at(node);
    auto trs = a.from(q, *n.symbol);
    for (size_t ti = 0; ti < trs.size(); ++ti) {
      std::string tid = "t|" + node + "|" + q + "|" + std::to_string(ti);
      game.add_position(tid, Player::odd, a.prio(q));
      game.add_edge(detail::game_state_id(node, q), tid);
      for (size_t i = 0; i < n.successors.size(); ++i)
        game.add_edge(tid, state_pos(n.successors[i], trs[ti]->successors[i]));
    }
  }
  return solve(game).even_region.count(start) > 0;
}

// ---------------------------------------------------------------------------
// emptiness

/// Decides L(a) = {} via the emptiness game (Even picks transitions, Odd
/// picks directions); a nonempty language yields a regular witness read off
/// Even's positional strategy.
inline std::optional<RegularTree> emptiness_witness(const ParityTreeAutomaton& a) {
  ParityGame game;
  for (const auto& q : a.states) game.add_position("q|" + q, Player::even, a.prio(q));
  for (size_t ti = 0; ti < a.transitions.size(); ++ti) {
    const auto& t = a.transitions[ti];
    std::string tid = "t|" + std::to_string(ti);
    game.add_position(tid, Player::odd, a.prio(t.state));
    game.add_edge("q|" + t.state, tid);
    for (const auto& p : t.successors) game.add_edge(tid, "q|" + p);
  }
  GameSolution s = solve(game);
  if (!s.even_region.count("q|" + a.initial)) return std::nullopt;

  RegularTree witness;
  witness.arity = 0;
  witness.root = a.initial;
  std::vector<std::string> todo{a.initial};
  while (!todo.empty()) {
    std::string q = todo.back();
    todo.pop_back();
    if (witness.nodes.count(q)) continue;
    auto it = s.even_strategy.find("q|" + q);
    if (it == s.even_strategy.end()) throw error("emptiness: winning state without strategy");
    size_t ti = std::stoul(it->second.substr(2));
    const auto& tr = a.transitions[ti];
    RegularTree::Node n;
    n.symbol = tr.symbol;
    n.successors = tr.successors;
    witness.nodes.emplace(q, std::move(n));
    for (const auto& p : tr.successors) todo.push_back(p);
  }
  return witness;
}

inline bool is_empty(const ParityTreeAutomaton& a) { return !emptiness_witness(a); }

// ---------------------------------------------------------------------------
// product (language intersection)

namespace detail {

/// Streett pair derived from one of the two priority streams: index i is
/// "hit" as E when the stream shows exactly the odd value, and as F when the
/// stream goes below it.
struct StreettPair {
  int stream;  // 0 or 1
  int odd_value;
};

struct IarState {
  std::string qa, qb;
  std::vector<int> record;  // permutation of pair indices, front = latest F

  auto operator<=>(const IarState&) const = default;
};

inline std::string iar_id(const IarState& s) {
  std::string id = s.qa + "&" + s.qb + "&";
  for (int i : s.record) id += std::to_string(i) + ".";
  return id;
}

// min-parity output of one IAR step (uses the record *before* the update)
inline int iar_priority(const std::vector<StreettPair>& pairs, const std::vector<int>& record,
                        int prio_a, int prio_b) {
  int P = static_cast<int>(pairs.size());
  int fpos = -1, epos = -1;
  for (int pos = 0; pos < P; ++pos) {
    const auto& pr = pairs[static_cast<size_t>(record[static_cast<size_t>(pos)])];
    int c = pr.stream == 0 ? prio_a : prio_b;
    if (c < pr.odd_value) fpos = pos;
    if (c == pr.odd_value) epos = pos;
  }
  int out_max = 0;
  if (epos > fpos)
    out_max = 2 * epos + 1;
  else if (fpos >= 0)
    out_max = 2 * (fpos + 1);
  return 2 * P + 2 - out_max;
}

inline std::vector<int> iar_update(const std::vector<StreettPair>& pairs,
                                   const std::vector<int>& record, int prio_a, int prio_b) {
  std::vector<int> front, back;
  for (int ix : record) {
    const auto& pr = pairs[static_cast<size_t>(ix)];
    int c = pr.stream == 0 ? prio_a : prio_b;
    (c < pr.odd_value ? front : back).push_back(ix);
  }
  front.insert(front.end(), back.begin(), back.end());
  return front;
}

}  // namespace detail

/// Accepts exactly L(a) n L(b). The conjunction of the two parity conditions
/// is folded into a single one with a latest-appearance record over the
/// odd-priority obligations of the two streams.
inline ParityTreeAutomaton product(const ParityTreeAutomaton& a, const ParityTreeAutomaton& b) {
  if (!(a.alphabet == b.alphabet)) throw error("product: alphabet mismatch");

  std::vector<detail::StreettPair> pairs;
  for (int o : a.priorities_used())
    if (o % 2 == 1) pairs.push_back({0, o});
  for (int o : b.priorities_used())
    if (o % 2 == 1) pairs.push_back({1, o});

  std::vector<int> record0;
  for (size_t i = 0; i < pairs.size(); ++i) record0.push_back(static_cast<int>(i));

  ParityTreeAutomaton out;
  out.alphabet = a.alphabet;

  detail::IarState init{a.initial, b.initial, record0};
  out.initial = detail::iar_id(init);

  std::vector<detail::IarState> todo{init};
  std::set<detail::IarState> seen;
  while (!todo.empty()) {
    detail::IarState s = todo.back();
    todo.pop_back();
    if (!seen.insert(s).second) continue;
    std::string sid = detail::iar_id(s);
    out.states.insert(sid);
    out.priority[sid] = detail::iar_priority(pairs, s.record, a.prio(s.qa), b.prio(s.qb));
    std::vector<int> next_record = detail::iar_update(pairs, s.record, a.prio(s.qa), b.prio(s.qb));

    for (const auto& [symbol, arity] : a.alphabet.symbols()) {
      for (const auto* ta : a.from(s.qa, symbol))
        for (const auto* tb : b.from(s.qb, symbol)) {
          ParityTreeAutomaton::Transition t;
          t.state = sid;
          t.symbol = symbol;
          for (int i = 0; i < arity; ++i) {
            detail::IarState child{ta->successors[static_cast<size_t>(i)],
                                   tb->successors[static_cast<size_t>(i)], next_record};
            t.successors.push_back(detail::iar_id(child));
            todo.push_back(std::move(child));
          }
          out.transitions.push_back(std::move(t));
        }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// inverse relabellings

/// For an arity-preserving h : Sigma -> Gamma and a over Gamma, the automaton
/// accepting { t : Th(t) in L(a) }: each transition letter is replaced by all
/// of its h-preimages.
inline ParityTreeAutomaton relabel_preimage(const ParityTreeAutomaton& a,
                                            const RankedAlphabet& sigma,
                                            const std::map<std::string, std::string>& h) {
  for (const auto& [name, arity] : sigma.symbols()) {
    auto it = h.find(name);
    if (it == h.end()) throw error("relabel_preimage: h not total on " + name);
    if (!a.alphabet.contains(it->second))
      throw error("relabel_preimage: image symbol " + it->second + " unknown");
    if (a.alphabet.arity(it->second) != arity)
      throw error("relabel_preimage: h does not preserve the arity of " + name);
  }
  ParityTreeAutomaton out = a;
  out.alphabet = sigma;
  out.transitions.clear();
  for (const auto& t : a.transitions)
    for (const auto& [name, image] : h)
      if (image == t.symbol) {
        ParityTreeAutomaton::Transition nt = t;
        nt.symbol = name;
        out.transitions.push_back(std::move(nt));
      }
  return out;
}

// ---------------------------------------------------------------------------
// language pairs

/// A regular language given as two disjoint automata: one for the language
/// and one for (a sample-checked approximation of) its complement. This
/// supplies the "does not accept" tests without implementing complementation.
struct LanguagePair {
  ParityTreeAutomaton positive;
  ParityTreeAutomaton complement;
};

/// Checks disjointness (product emptiness) and that every sample tree is
/// accepted by exactly one side; returns the first violated check.
inline std::variant<LanguagePair, std::string> load_language_pair(
    const ParityTreeAutomaton& pos, const ParityTreeAutomaton& comp,
    const std::vector<RegularTree>& samples = {}) {
  if (!(pos.alphabet == comp.alphabet)) return std::string("language pair: alphabet mismatch");
  if (auto v = validate_automaton(pos)) return "language pair: positive: " + v->describe();
  if (auto v = validate_automaton(comp)) return "language pair: complement: " + v->describe();
  if (auto w = emptiness_witness(product(pos, comp)))
    return std::string("language pair: languages are not disjoint");
  for (size_t i = 0; i < samples.size(); ++i) {
    bool in_pos = membership(pos, samples[i]);
    bool in_comp = membership(comp, samples[i]);
    if (in_pos == in_comp)
      return "language pair: sample " + std::to_string(i) +
             (in_pos ? " accepted by both sides" : " rejected by both sides");
  }
  return LanguagePair{pos, comp};
}

}  // namespace treealg
