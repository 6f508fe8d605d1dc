#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "treealg/automaton.hpp"
#include "treealg/factorization.hpp"
#include "treealg/parity_game.hpp"
#include "treealg/profiles.hpp"
#include "treealg/regular_tree.hpp"
#include "treealg/syntactic.hpp"
#include "treealg/term.hpp"

namespace treealg {

using json = nlohmann::json;

namespace detail {
inline const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw error(std::string("json: missing field \"") + name + "\"");
  return *it;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// alphabet: {"symbols":[{"name":..,"arity":..}]}

inline json to_json(const RankedAlphabet& a) {
  json symbols = json::array();
  for (const auto& [name, arity] : a.symbols())
    symbols.push_back({{"name", name}, {"arity", arity}});
  return {{"symbols", symbols}};
}

inline RankedAlphabet alphabet_from_json(const json& j) {
  RankedAlphabet a;
  for (const auto& s : detail::field(j, "symbols"))
    a.add(detail::field(s, "name").get<std::string>(), detail::field(s, "arity").get<int>());
  return a;
}

// ---------------------------------------------------------------------------
// term: {"arity":..,"root":node}, node = {"symbol":..,"children":[..]} | {"var":..}

inline json to_json(const SymbolNode& n) {
  if (n.is_var()) return {{"var", n.var()}};
  json children = json::array();
  for (const auto& c : n.children) children.push_back(to_json(c));
  return {{"symbol", n.label()}, {"children", children}};
}

inline json to_json(const SymbolTerm& t) { return {{"arity", t.arity}, {"root", to_json(t.root)}}; }

inline SymbolNode term_node_from_json(const json& j) {
  if (j.contains("var")) return var_node<std::string>(j.at("var").get<int>());
  SymbolNode n{detail::field(j, "symbol").get<std::string>(), {}};
  for (const auto& c : detail::field(j, "children")) n.children.push_back(term_node_from_json(c));
  return n;
}

inline SymbolTerm term_from_json(const json& j) {
  return SymbolTerm{detail::field(j, "arity").get<int>(), term_node_from_json(detail::field(j, "root"))};
}

// ---------------------------------------------------------------------------
// regular tree: {"arity":..,"root":..,"nodes":[{"id","symbol","var","successors"}]}

inline json to_json(const RegularTree& g) {
  json nodes = json::array();
  for (const auto& [id, n] : g.nodes) {
    json jn = {{"id", id},
               {"symbol", n.symbol ? json(*n.symbol) : json(nullptr)},
               {"var", n.var ? json(*n.var) : json(nullptr)},
               {"successors", n.successors}};
    nodes.push_back(std::move(jn));
  }
  return {{"arity", g.arity}, {"root", g.root}, {"nodes", nodes}};
}

inline RegularTree regular_tree_from_json(const json& j) {
  RegularTree g;
  g.arity = detail::field(j, "arity").get<int>();
  g.root = detail::field(j, "root").get<std::string>();
  for (const auto& jn : detail::field(j, "nodes")) {
    RegularTree::Node n;
    if (jn.contains("symbol") && !jn.at("symbol").is_null())
      n.symbol = jn.at("symbol").get<std::string>();
    if (jn.contains("var") && !jn.at("var").is_null()) n.var = jn.at("var").get<int>();
    n.successors = detail::field(jn, "successors").get<std::vector<std::string>>();
    if (!g.nodes.emplace(detail::field(jn, "id").get<std::string>(), std::move(n)).second)
      throw error("json: duplicate node id in regular tree");
  }
  return g;
}

// ---------------------------------------------------------------------------
// context: a term or regular tree with symbol HOLE, plus {"hole_arity":..}

inline json to_json(const Context& c) {
  json j = to_json(c.tree);
  j["hole_arity"] = c.hole_arity;
  return j;
}

inline Context context_from_json(const json& j) {
  Context c;
  c.hole_arity = detail::field(j, "hole_arity").get<int>();
  if (j.contains("nodes"))
    c.tree = regular_tree_from_json(j);
  else
    c.tree = term_to_regular(term_from_json(j));
  return c;
}

/// Trees may come as finite terms or as graphs; both are regular trees.
inline RegularTree tree_from_json(const json& j) {
  if (j.contains("nodes")) return regular_tree_from_json(j);
  return term_to_regular(term_from_json(j));
}

// ---------------------------------------------------------------------------
// parity game + solution

inline json to_json(const ParityGame& g) {
  json positions = json::array();
  json edges = json::array();
  for (int v = 0; v < g.size(); ++v) {
    const auto& p = g.position(v);
    positions.push_back({{"id", p.id},
                         {"owner", p.owner == Player::even ? "even" : "odd"},
                         {"priority", p.priority}});
    for (int w : g.successors(v)) edges.push_back({p.id, g.position(w).id});
  }
  return {{"positions", positions}, {"edges", edges}};
}

inline ParityGame game_from_json(const json& j) {
  ParityGame g;
  for (const auto& p : detail::field(j, "positions")) {
    std::string owner = detail::field(p, "owner").get<std::string>();
    if (owner != "even" && owner != "odd") throw error("json: owner must be \"even\" or \"odd\"");
    g.add_position(detail::field(p, "id").get<std::string>(),
                   owner == "even" ? Player::even : Player::odd,
                   detail::field(p, "priority").get<int>());
  }
  for (const auto& e : detail::field(j, "edges")) {
    if (!e.is_array() || e.size() != 2) throw error("json: edge must be a pair");
    g.add_edge(e[0].get<std::string>(), e[1].get<std::string>());
  }
  return g;
}

inline json to_json(const GameSolution& s) {
  return {{"even_region", s.even_region},
          {"odd_region", s.odd_region},
          {"even_strategy", s.even_strategy},
          {"odd_strategy", s.odd_strategy}};
}

// ---------------------------------------------------------------------------
// automaton + language pair

inline json to_json(const ParityTreeAutomaton& a) {
  json transitions = json::array();
  for (const auto& t : a.transitions)
    transitions.push_back(
        {{"state", t.state}, {"symbol", t.symbol}, {"successors", t.successors}});
  return {{"states", a.states},
          {"initial", a.initial},
          {"priority", a.priority},
          {"alphabet", to_json(a.alphabet)},
          {"transitions", transitions}};
}

inline ParityTreeAutomaton automaton_from_json(const json& j) {
  ParityTreeAutomaton a;
  for (const auto& q : detail::field(j, "states")) a.states.insert(q.get<std::string>());
  a.initial = detail::field(j, "initial").get<std::string>();
  for (const auto& [q, k] : detail::field(j, "priority").items()) a.priority[q] = k.get<int>();
  a.alphabet = alphabet_from_json(detail::field(j, "alphabet"));
  for (const auto& t : detail::field(j, "transitions"))
    a.transitions.push_back({detail::field(t, "state").get<std::string>(),
                             detail::field(t, "symbol").get<std::string>(),
                             detail::field(t, "successors").get<std::vector<std::string>>()});
  if (auto v = validate_automaton(a)) throw error("json: automaton invalid: " + v->describe());
  return a;
}

struct LanguagePairInput {
  ParityTreeAutomaton positive;
  ParityTreeAutomaton complement;
  std::vector<RegularTree> samples;
};

inline LanguagePairInput language_pair_from_json(const json& j) {
  LanguagePairInput in;
  in.positive = automaton_from_json(detail::field(j, "positive"));
  in.complement = automaton_from_json(detail::field(j, "complement"));
  if (j.contains("samples"))
    for (const auto& s : j.at("samples")) in.samples.push_back(tree_from_json(s));
  return in;
}

inline json to_json(const LanguagePair& p) {
  return {{"positive", to_json(p.positive)}, {"complement", to_json(p.complement)}};
}

// ---------------------------------------------------------------------------
// profile sets: arrays of arrays of atoms

inline json to_json(const Atom& a) {
  if (const BranchAtom* b = std::get_if<BranchAtom>(&a)) return {{"branch", b->state}};
  const VarAtom& v = std::get<VarAtom>(a);
  return {{"var",
           {{"from", v.from}, {"min", v.min_priority}, {"to", v.to}, {"index", v.index}}}};
}

inline json to_json(const ProfileSet& e) {
  json out = json::array();
  for (const auto& c : e.disjuncts) {
    json conj = json::array();
    for (const auto& at : c.atoms) conj.push_back(to_json(at));
    out.push_back(std::move(conj));
  }
  return out;
}

// ---------------------------------------------------------------------------
// factorization (outer tree with factor bodies and bindings)

inline json to_json(const Factor& f) {
  json bindings = json::array();
  for (const auto& b : f.bind)
    bindings.push_back(b.is_slot ? json{{"slot", b.index}} : json{{"outer", b.index}});
  return {{"factor", to_json(f.body)}, {"bindings", bindings}};
}

inline json to_json(const TermNode<Factor>& n) {
  if (n.is_var()) return {{"var", n.var()}};
  json j = to_json(n.label());
  json children = json::array();
  for (const auto& c : n.children) children.push_back(to_json(c));
  j["children"] = children;
  return j;
}

inline json to_json(const Factorization& f) {
  return {{"arity", f.arity}, {"root", to_json(f.root)}};
}

// ---------------------------------------------------------------------------
// syntactic algebra

inline json to_json(const SyntacticAlgebra& s) {
  json arities = json::object();
  for (const auto& [arity, classes] : s.classes) {
    json jcls = json::array();
    for (const auto& cls : classes) {
      json c = {{"id", cls.id},
                {"witness",
                 to_json(s.elements.at(arity)[static_cast<size_t>(cls.representative)].witness)}};
      if (cls.accepting) c["accepting"] = *cls.accepting;
      jcls.push_back(std::move(c));
    }
    arities[std::to_string(arity)] = {{"classes", jcls}};
  }
  json table = json::array();
  for (const auto& row : s.table)
    table.push_back({{"root", row.root}, {"args", row.args}, {"result", row.result}});
  return {{"arities", arities}, {"table", table}};
}

// ---------------------------------------------------------------------------
// evaluation tables and H-sets

inline EvalTable eval_table_from_json(const json& j) {
  EvalTable t;
  for (const auto& e : detail::field(j, "entries"))
    t.entries[term_from_json(detail::field(e, "term"))] =
        detail::field(e, "value").get<std::string>();
  return t;
}

inline json to_json(const EvalTable& t) {
  json entries = json::array();
  for (const auto& [term, value] : t.entries)
    entries.push_back({{"term", to_json(term)}, {"value", value}});
  return {{"entries", entries}};
}

inline HSets h_sets_from_json(const json& j) {
  HSets h;
  for (const auto& e : j) {
    std::vector<SymbolTerm> trees;
    for (const auto& t : detail::field(e, "trees")) trees.push_back(term_from_json(t));
    h[detail::field(e, "label").get<std::string>()] = std::move(trees);
  }
  return h;
}

inline json to_json(const HSets& h) {
  json out = json::array();
  for (const auto& [label, trees] : h) {
    json jt = json::array();
    for (const auto& t : trees) jt.push_back(to_json(t));
    out.push_back({{"label", label}, {"trees", jt}});
  }
  return out;
}

}  // namespace treealg
