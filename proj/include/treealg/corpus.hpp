#pragma once

#include "treealg/automaton.hpp"
#include "treealg/regular_tree.hpp"

namespace treealg {
namespace corpus {

/// Binary a and b plus a nullary leaf, so that finite trees exist.
inline RankedAlphabet alphabet() {
  RankedAlphabet s;
  s.add("a", 2);
  s.add("b", 2);
  s.add("c", 0);
  return s;
}

/// Accepts the trees containing the label a at least once: the "seek" state
/// guesses a path to an a and must discharge its obligation (odd priority).
inline ParityTreeAutomaton contains_a() {
  ParityTreeAutomaton m;
  m.alphabet = alphabet();
  m.states = {"seek", "any"};
  m.initial = "seek";
  m.priority = {{"seek", 1}, {"any", 0}};
  m.transitions = {
      {"seek", "a", {"any", "any"}},
      {"seek", "b", {"seek", "any"}},
      {"seek", "b", {"any", "seek"}},
      {"any", "a", {"any", "any"}},
      {"any", "b", {"any", "any"}},
      {"any", "c", {}},
  };
  return m;
}

/// Accepts the trees with no a anywhere.
inline ParityTreeAutomaton no_a() {
  ParityTreeAutomaton m;
  m.alphabet = alphabet();
  m.states = {"n"};
  m.initial = "n";
  m.priority = {{"n", 0}};
  m.transitions = {
      {"n", "b", {"n", "n"}},
      {"n", "c", {}},
  };
  return m;
}

inline LanguagePair contains_a_pair() { return {contains_a(), no_a()}; }

/// Accepts the trees whose root is binary with an a-labelled first child.
inline ParityTreeAutomaton first_child_a() {
  ParityTreeAutomaton m;
  m.alphabet = alphabet();
  m.states = {"r", "fa", "any"};
  m.initial = "r";
  m.priority = {{"r", 0}, {"fa", 0}, {"any", 0}};
  m.transitions = {
      {"r", "a", {"fa", "any"}},
      {"r", "b", {"fa", "any"}},
      {"fa", "a", {"any", "any"}},
      {"any", "a", {"any", "any"}},
      {"any", "b", {"any", "any"}},
      {"any", "c", {}},
  };
  return m;
}

/// Accepts the trees that are a bare leaf or whose first child is not an a.
inline ParityTreeAutomaton first_child_not_a() {
  ParityTreeAutomaton m;
  m.alphabet = alphabet();
  m.states = {"r", "nb", "any"};
  m.initial = "r";
  m.priority = {{"r", 0}, {"nb", 0}, {"any", 0}};
  m.transitions = {
      {"r", "c", {}},
      {"r", "a", {"nb", "any"}},
      {"r", "b", {"nb", "any"}},
      {"nb", "b", {"any", "any"}},
      {"nb", "c", {}},
      {"any", "a", {"any", "any"}},
      {"any", "b", {"any", "any"}},
      {"any", "c", {}},
  };
  return m;
}

inline LanguagePair first_child_a_pair() { return {first_child_a(), first_child_not_a()}; }

/// One state, every transition, priority 0: accepts every tree.
inline ParityTreeAutomaton universal(const RankedAlphabet& sigma) {
  ParityTreeAutomaton m;
  m.alphabet = sigma;
  m.states = {"u"};
  m.initial = "u";
  m.priority = {{"u", 0}};
  for (const auto& [name, arity] : sigma.symbols())
    m.transitions.push_back({"u", name, std::vector<std::string>(static_cast<size_t>(arity), "u")});
  return m;
}

/// No transition at all: the empty language.
inline ParityTreeAutomaton empty_language(const RankedAlphabet& sigma) {
  ParityTreeAutomaton m;
  m.alphabet = sigma;
  m.states = {"e"};
  m.initial = "e";
  m.priority = {{"e", 0}};
  return m;
}

/// The regular tree b(b(b(...)), ...) with every node the same b.
inline RegularTree all_b_tree() {
  RegularTree g;
  g.arity = 0;
  g.root = "v";
  g.nodes["v"] = {std::string("b"), std::nullopt, {"v", "v"}};
  return g;
}

/// a at the root, all-b below.
inline RegularTree a_then_all_b_tree() {
  RegularTree g;
  g.arity = 0;
  g.root = "r";
  g.nodes["r"] = {std::string("a"), std::nullopt, {"v", "v"}};
  g.nodes["v"] = {std::string("b"), std::nullopt, {"v", "v"}};
  return g;
}

/// A handful of finite sample trees over the corpus alphabet.
inline std::vector<RegularTree> samples() {
  RankedAlphabet s = alphabet();
  auto leaf = singleton(s, "c");
  SymbolTerm acc{0, node<std::string>("a", {leaf.root, leaf.root})};
  SymbolTerm bcc{0, node<std::string>("b", {leaf.root, leaf.root})};
  SymbolTerm bac{0, node<std::string>("b", {acc.root, leaf.root})};
  SymbolTerm deep{0, node<std::string>("b", {bcc.root, bac.root})};
  return {term_to_regular(leaf), term_to_regular(acc), term_to_regular(bcc),
          term_to_regular(bac), term_to_regular(deep), all_b_tree(), a_then_all_b_tree()};
}

}  // namespace corpus
}  // namespace treealg
