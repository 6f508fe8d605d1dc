#include <catch_amalgamated.hpp>

#include <random>

#include "testutil.hpp"
#include "treealg/automaton.hpp"
#include "treealg/corpus.hpp"
#include "treealg/enumerate.hpp"

using namespace treealg;

namespace {

RankedAlphabet abc() { return corpus::alphabet(); }

/// Two states over {a,b,c}; "q" hands control to "p" on b-left spines.
ParityTreeAutomaton two_state() {
  ParityTreeAutomaton m;
  m.alphabet = abc();
  m.states = {"q", "p"};
  m.initial = "q";
  m.priority = {{"q", 1}, {"p", 0}};
  m.transitions = {
      {"q", "a", {"p", "p"}}, {"q", "b", {"q", "p"}}, {"p", "a", {"p", "p"}},
      {"p", "b", {"p", "p"}}, {"p", "c", {}},
  };
  return m;
}

}  // namespace

TEST_CASE("validate_automaton") {
  CHECK(!validate_automaton(corpus::contains_a()));
  CHECK(!validate_automaton(corpus::no_a()));
  CHECK(!validate_automaton(corpus::first_child_a()));
  CHECK(!validate_automaton(corpus::first_child_not_a()));
  ParityTreeAutomaton bad = corpus::contains_a();
  bad.transitions.push_back({"seek", "c", {"seek"}});
  CHECK(validate_automaton(bad).has_value());
}

TEST_CASE("check_run on a singleton matches the endpoint convention") {
  ParityTreeAutomaton m = two_state();
  SymbolTerm t = singleton(abc(), "a");
  Term<std::string> rho{2, node<std::string>("q", {node<std::string>("p"), node<std::string>("p")})};
  auto r = check_run(m, t, rho);
  REQUIRE(std::holds_alternative<RunProfile>(r));
  const RunProfile& profile = std::get<RunProfile>(r);
  CHECK(profile.root_state == "q");
  REQUIRE(profile.vars.size() == 2);
  CHECK(profile.vars.at(0) == std::pair<int, std::string>{0, "p"});  // min(1, 0)
  CHECK(profile.vars.at(1) == std::pair<int, std::string>{0, "p"});
}

TEST_CASE("check_run rejects a labelling that violates the transitions") {
  ParityTreeAutomaton m = two_state();
  SymbolTerm t = singleton(abc(), "a");
  Term<std::string> rho{2, node<std::string>("q", {node<std::string>("q"), node<std::string>("p")})};
  auto r = check_run(m, t, rho);
  REQUIRE(std::holds_alternative<Violation>(r));
}

TEST_CASE("check_run agrees with enumerate_runs on all small terms") {
  ParityTreeAutomaton m = two_state();
  for (const auto& t : oracle_enumerate_terms(abc(), 1, 2)) {
    for (const auto& q0 : m.states) {
      // exhaustive labellings, checked one by one
      std::set<RunProfile> accepted;
      std::vector<std::vector<int>> positions;  // paths of all nodes
      auto walk = [&](auto&& self, const SymbolNode& n, std::vector<int> path) -> void {
        positions.push_back(path);
        for (size_t i = 0; i < n.children.size(); ++i) {
          auto p = path;
          p.push_back(static_cast<int>(i));
          self(self, n.children[i], p);
        }
      };
      walk(walk, t.root, {});
      std::vector<std::string> states(m.states.begin(), m.states.end());
      size_t total = 1;
      for (size_t i = 0; i < positions.size(); ++i) total *= states.size();
      for (size_t mask = 0; mask < total; ++mask) {
        size_t rest = mask;
        std::map<std::vector<int>, std::string> assign;
        for (const auto& p : positions) {
          assign[p] = states[rest % states.size()];
          rest /= states.size();
        }
        if (assign[{}] != q0) continue;
        auto build = [&](auto&& self, const SymbolNode& n,
                         std::vector<int> path) -> TermNode<std::string> {
          TermNode<std::string> out{assign[path], {}};
          for (size_t i = 0; i < n.children.size(); ++i) {
            auto p = path;
            p.push_back(static_cast<int>(i));
            out.children.push_back(self(self, n.children[i], p));
          }
          return out;
        };
        Term<std::string> rho{t.arity, build(build, t.root, {})};
        auto r = check_run(m, t, rho);
        if (std::holds_alternative<RunProfile>(r)) accepted.insert(std::get<RunProfile>(r));
      }
      CHECK(accepted == enumerate_runs(m, t, q0));
    }
  }
}

TEST_CASE("enumerate_runs with no matching root transition is empty") {
  ParityTreeAutomaton m = corpus::contains_a();
  SymbolTerm t = singleton(abc(), "c");
  CHECK(enumerate_runs(m, t, "seek").empty());
}

TEST_CASE("enumerate_runs through a unary letter forces the successor state") {
  RankedAlphabet sigma;
  sigma.add("b", 1);
  sigma.add("c", 0);
  ParityTreeAutomaton m;
  m.alphabet = sigma;
  m.states = {"q", "p"};
  m.initial = "q";
  m.priority = {{"q", 1}, {"p", 0}};
  m.transitions = {{"q", "b", {"p"}}, {"p", "c", {}}};
  SymbolTerm t{1, node<std::string>("b", {var_node<std::string>(0)})};
  auto runs = enumerate_runs(m, t, "q");
  REQUIRE(runs.size() == 1);
  CHECK(runs.begin()->vars.at(0) == std::pair<int, std::string>{0, "p"});
}

TEST_CASE("membership: contains-a on hand trees") {
  ParityTreeAutomaton m = corpus::contains_a();
  CHECK(!membership(m, corpus::all_b_tree()));
  CHECK(membership(m, corpus::a_then_all_b_tree()));
  CHECK(!membership(m, term_to_regular(singleton(abc(), "c"))));
  for (const auto& g : corpus::samples())
    CHECK(membership(corpus::universal(abc()), g));
}

TEST_CASE("membership rejects variables without an accept-from map") {
  RegularTree g;
  g.arity = 1;
  g.root = "r";
  g.nodes["r"] = {std::string("b"), std::nullopt, {"x", "c"}};
  g.nodes["x"] = {std::nullopt, 0, {}};
  g.nodes["c"] = {std::string("c"), std::nullopt, {}};
  CHECK_THROWS_AS(membership(corpus::contains_a(), g), error);

  AcceptFromMap accept{{0, {"any"}}};
  CHECK(!membership(corpus::contains_a(), g, accept));  // b-spine never finds an a
  AcceptFromMap accept_seek{{0, {"seek", "any"}}};
  CHECK(membership(corpus::contains_a(), g, accept_seek));
}

TEST_CASE("membership agrees with run enumeration on finite trees") {
  ParityTreeAutomaton m = two_state();
  for (const auto& t : oracle_enumerate_terms(abc(), 0, 2))
    CHECK(membership(m, term_to_regular(t)) == testutil::oracle_accepts(m, t));
}

TEST_CASE("product against the universal automaton changes nothing") {
  ParityTreeAutomaton m = corpus::contains_a();
  ParityTreeAutomaton prod = product(m, corpus::universal(abc()));
  ParityTreeAutomaton self_prod = product(m, m);
  for (const auto& g : corpus::samples()) {
    CHECK(membership(prod, g) == membership(m, g));
    CHECK(membership(self_prod, g) == membership(m, g));
  }
}

TEST_CASE("product is the language intersection on random regular trees") {
  std::mt19937 rng(41);
  ParityTreeAutomaton ca = corpus::contains_a();
  ParityTreeAutomaton fc = corpus::first_child_a();
  ParityTreeAutomaton prod = product(ca, fc);
  for (int i = 0; i < 40; ++i) {
    RegularTree g = testutil::random_regular_tree(rng, abc(), 4);
    CHECK(membership(prod, g) == (membership(ca, g) && membership(fc, g)));
  }
}

TEST_CASE("product of disjoint languages is empty") {
  CHECK(is_empty(product(corpus::contains_a(), corpus::no_a())));
  CHECK(is_empty(product(corpus::first_child_a(), corpus::first_child_not_a())));
}

TEST_CASE("product conjunction holds across richer priority ranges") {
  // the latest-appearance record must cope with several odd obligations per
  // stream, not just the Buechi-like corpus automata
  std::mt19937 rng(44);
  for (int round = 0; round < 60; ++round) {
    ParityTreeAutomaton a = testutil::random_automaton(rng, abc(), 3, 3);
    ParityTreeAutomaton b = testutil::random_automaton(rng, abc(), 2, 3);
    ParityTreeAutomaton prod = product(a, b);
    for (int i = 0; i < 12; ++i) {
      RegularTree g = testutil::random_regular_tree(rng, abc(), 4);
      REQUIRE(membership(prod, g) == (membership(a, g) && membership(b, g)));
    }
    for (const auto& t : oracle_enumerate_terms(abc(), 0, 1)) {
      RegularTree g = term_to_regular(t);
      REQUIRE(membership(prod, g) == (membership(a, g) && membership(b, g)));
    }
  }
}

TEST_CASE("relabel_preimage") {
  ParityTreeAutomaton m = corpus::contains_a();

  std::map<std::string, std::string> identity{{"a", "a"}, {"b", "b"}, {"c", "c"}};
  ParityTreeAutomaton same = relabel_preimage(m, abc(), identity);
  for (const auto& g : corpus::samples()) CHECK(membership(same, g) == membership(m, g));

  // collapse a and a' onto a: accepts trees containing a or a'
  RankedAlphabet ext = abc();
  ext.add("a2", 2);
  std::map<std::string, std::string> collapse{{"a", "a"}, {"a2", "a"}, {"b", "b"}, {"c", "c"}};
  ParityTreeAutomaton wide = relabel_preimage(m, ext, collapse);
  SymbolTerm with_a2{0, node<std::string>("a2", {node<std::string>("c"), node<std::string>("c")})};
  SymbolTerm without{0, node<std::string>("b", {node<std::string>("c"), node<std::string>("c")})};
  CHECK(membership(wide, term_to_regular(with_a2)));
  CHECK(!membership(wide, term_to_regular(without)));

  // a target letter with no preimage: its transitions disappear
  RankedAlphabet small;
  small.add("b", 2);
  small.add("c", 0);
  std::map<std::string, std::string> partial{{"b", "b"}, {"c", "c"}};
  ParityTreeAutomaton no_a_possible = relabel_preimage(m, small, partial);
  for (const auto& t : no_a_possible.transitions) CHECK(t.symbol != "a");
  CHECK(is_empty(no_a_possible));  // contains-a needs an a

  std::map<std::string, std::string> wrong_arity{{"a", "c"}, {"b", "b"}, {"c", "c"}};
  CHECK_THROWS_AS(relabel_preimage(m, abc(), wrong_arity), error);
}

TEST_CASE("relabel_preimage satisfies the inverse-morphism property on samples") {
  ParityTreeAutomaton m = corpus::contains_a();
  RankedAlphabet ext = abc();
  ext.add("a2", 2);
  ext.add("b2", 2);
  std::map<std::string, std::string> h{
      {"a", "a"}, {"a2", "a"}, {"b", "b"}, {"b2", "b"}, {"c", "c"}};
  ParityTreeAutomaton pre = relabel_preimage(m, ext, h);
  std::mt19937 rng(43);
  for (int i = 0; i < 40; ++i) {
    SymbolTerm t = testutil::random_term(rng, ext, 0, 9);
    SymbolTerm image = relabel(t, [&](const std::string& s) { return h.at(s); });
    CHECK(membership(pre, term_to_regular(t)) == membership(m, term_to_regular(image)));
  }
}

TEST_CASE("emptiness with witnesses") {
  ParityTreeAutomaton none = corpus::empty_language(abc());
  CHECK(is_empty(none));

  auto w1 = emptiness_witness(corpus::universal(abc()));
  REQUIRE(w1.has_value());
  CHECK(membership(corpus::universal(abc()), *w1));

  auto w2 = emptiness_witness(corpus::contains_a());
  REQUIRE(w2.has_value());
  CHECK(!validate_regular_tree(abc(), *w2));
  CHECK(membership(corpus::contains_a(), *w2));
}

TEST_CASE("empty verdicts reject every probe") {
  std::mt19937 rng(42);
  ParityTreeAutomaton none = corpus::empty_language(abc());
  for (int i = 0; i < 50; ++i)
    CHECK(!membership(none, testutil::random_regular_tree(rng, abc(), 4)));
}

TEST_CASE("load_language_pair") {
  auto ok = load_language_pair(corpus::contains_a(), corpus::no_a(), corpus::samples());
  CHECK(std::holds_alternative<LanguagePair>(ok));

  auto overlap = load_language_pair(corpus::universal(abc()), corpus::universal(abc()), {});
  REQUIRE(std::holds_alternative<std::string>(overlap));
  CHECK(std::get<std::string>(overlap).find("disjoint") != std::string::npos);

  // complement too small: a sample rejected by both sides
  auto incomplete = load_language_pair(corpus::contains_a(), corpus::empty_language(abc()),
                                       {corpus::all_b_tree()});
  REQUIRE(std::holds_alternative<std::string>(incomplete));
  CHECK(std::get<std::string>(incomplete).find("sample") != std::string::npos);
}
