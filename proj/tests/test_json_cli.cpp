#include <catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <random>

#include "testutil.hpp"
#include "treealg/corpus.hpp"
#include "treealg/json_io.hpp"

using namespace treealg;

namespace {

std::string data_path(const std::string& name) { return std::string(TREEALG_DATA_DIR) + "/" + name; }

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(TREEALG_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buffer{};
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) r.output.append(buffer.data(), n);
  int status = pclose(pipe);
  r.exit_code = WEXITSTATUS(status);
  return r;
}

std::string write_temp(const std::string& name, const json& j) {
  std::string path = "/tmp/treealg_test_" + name + ".json";
  std::ofstream out(path);
  out << j.dump();
  out.close();
  return path;
}

}  // namespace

TEST_CASE("json round trips") {
  std::mt19937 rng(81);
  RankedAlphabet sigma = corpus::alphabet();
  CHECK(alphabet_from_json(to_json(sigma)) == sigma);

  for (int i = 0; i < 30; ++i) {
    SymbolTerm t = testutil::random_term(rng, sigma, i % 3, 8);
    CHECK(term_from_json(to_json(t)) == t);
  }

  for (const auto& g : corpus::samples()) {
    RegularTree back = regular_tree_from_json(to_json(g));
    CHECK(bisimilar(back, g));
  }

  ParityTreeAutomaton a = corpus::contains_a();
  ParityTreeAutomaton back = automaton_from_json(to_json(a));
  CHECK(back.states == a.states);
  CHECK(back.initial == a.initial);
  CHECK(back.priority == a.priority);
  CHECK(back.transitions == a.transitions);

  ParityGame g;
  g.add_position("x", Player::even, 0);
  g.add_position("y", Player::odd, 1);
  g.add_edge("x", "y");
  g.add_edge("y", "x");
  ParityGame gb = game_from_json(to_json(g));
  CHECK(to_json(gb) == to_json(g));

  Context c{1, corpus::all_b_tree()};
  c.tree.nodes["h"] = {std::string(kHoleSymbol), std::nullopt, {"v"}};
  c.tree.nodes["v"].successors[0] = "h";
  Context cb = context_from_json(to_json(c));
  CHECK(cb.hole_arity == 1);
  CHECK(bisimilar(cb.tree, c.tree));
}

TEST_CASE("shipped data files match the built-in corpus") {
  std::ifstream in(data_path("contains_a.language.json"));
  REQUIRE(in.good());
  json j;
  in >> j;
  LanguagePairInput pair = language_pair_from_json(j);
  CHECK(to_json(pair.positive) == to_json(corpus::contains_a()));
  CHECK(to_json(pair.complement) == to_json(corpus::no_a()));
  CHECK(!pair.samples.empty());

  std::ifstream in2(data_path("first_child_a.language.json"));
  REQUIRE(in2.good());
  json j2;
  in2 >> j2;
  LanguagePairInput pair2 = language_pair_from_json(j2);
  CHECK(to_json(pair2.positive) == to_json(corpus::first_child_a()));
  CHECK(to_json(pair2.complement) == to_json(corpus::first_child_not_a()));
}

TEST_CASE("cli: empty") {
  auto universal = run_cli("empty --automaton " +
                           write_temp("universal", to_json(corpus::universal(corpus::alphabet()))));
  REQUIRE(universal.exit_code == 0);
  json ju = json::parse(universal.output);
  CHECK(ju["command"] == "empty");
  CHECK(ju["verdict"] == false);
  REQUIRE(ju["payload"].contains("witness"));
  RegularTree w = regular_tree_from_json(ju["payload"]["witness"]);
  CHECK(membership(corpus::universal(corpus::alphabet()), w));

  auto empty = run_cli("empty --automaton " +
                       write_temp("empty", to_json(corpus::empty_language(corpus::alphabet()))));
  REQUIRE(empty.exit_code == 0);
  CHECK(json::parse(empty.output)["verdict"] == true);

  auto contains = run_cli("empty --automaton " + data_path("contains_a.automaton.json"));
  REQUIRE(contains.exit_code == 0);
  json jc = json::parse(contains.output);
  CHECK(jc["verdict"] == false);
  // pipe the witness back through member
  std::string witness_path = write_temp("witness", jc["payload"]["witness"]);
  auto member = run_cli("member --automaton " + data_path("contains_a.automaton.json") +
                        " --tree " + witness_path);
  REQUIRE(member.exit_code == 0);
  CHECK(json::parse(member.output)["verdict"] == true);
}

TEST_CASE("cli: member") {
  auto no = run_cli("member --automaton " + data_path("contains_a.automaton.json") + " --tree " +
                    write_temp("allb", to_json(corpus::all_b_tree())));
  REQUIRE(no.exit_code == 0);
  CHECK(json::parse(no.output)["verdict"] == false);

  auto yes = run_cli("member --automaton " + data_path("contains_a.automaton.json") + " --tree " +
                     write_temp("aroot", to_json(corpus::a_then_all_b_tree())));
  REQUIRE(yes.exit_code == 0);
  CHECK(json::parse(yes.output)["verdict"] == true);
}

TEST_CASE("cli: equiv with separator extraction") {
  std::string lang = data_path("contains_a.language.json");
  SymbolTerm acc{0, node<std::string>("a", {node<std::string>("c"), node<std::string>("c")})};
  std::string left = write_temp("left", to_json(acc));
  std::string right = write_temp("right", to_json(singleton(corpus::alphabet(), "c")));

  auto same = run_cli("equiv --language " + lang + " --left " + right + " --right " + right);
  REQUIRE(same.exit_code == 0);
  CHECK(json::parse(same.output)["verdict"] == true);

  auto diff = run_cli("equiv --language " + lang + " --left " + left + " --right " + right);
  REQUIRE(diff.exit_code == 0);
  json jd = json::parse(diff.output);
  CHECK(jd["verdict"] == false);
  REQUIRE(jd["payload"].contains("separator"));
  Context sep = context_from_json(jd["payload"]["separator"]);
  RegularTree l = substitute_hole(sep, term_to_regular(acc));
  RegularTree r = substitute_hole(sep, term_to_regular(singleton(corpus::alphabet(), "c")));
  CHECK(membership(corpus::contains_a(), l) != membership(corpus::contains_a(), r));
}

TEST_CASE("cli: syntactic and commutative") {
  auto alg = run_cli("syntactic --language " + data_path("contains_a.language.json") +
                     " --max-arity 1");
  REQUIRE(alg.exit_code == 0);
  json ja = json::parse(alg.output);
  CHECK(ja["payload"]["arities"]["0"]["classes"].size() == 2);
  CHECK(ja["payload"]["arities"]["1"]["classes"].size() == 3);

  auto comm = run_cli("commutative --language " + data_path("contains_a.language.json"));
  REQUIRE(comm.exit_code == 0);
  CHECK(json::parse(comm.output)["verdict"] == true);

  auto not_comm = run_cli("commutative --language " + data_path("first_child_a.language.json"));
  REQUIRE(not_comm.exit_code == 0);
  json jn = json::parse(not_comm.output);
  CHECK(jn["verdict"] == false);
  CHECK(jn["payload"].contains("permutation"));
}

TEST_CASE("cli: reduce") {
  std::mt19937 rng(82);
  SymbolTerm t = testutil::random_term(rng, corpus::alphabet(), 2, 12);
  auto r = run_cli("reduce --term " + write_temp("reduceme", to_json(t)));
  REQUIRE(r.exit_code == 0);
  json jr = json::parse(r.output);
  CHECK(jr["verdict"] == true);
  CHECK(jr["payload"]["bound_ok"] == true);
  CHECK(jr["payload"]["flatten_ok"] == true);
  CHECK(jr["payload"]["is_reduced"] == true);
  CHECK(jr["payload"]["height"].get<int>() <= 4);
}

TEST_CASE("cli: eval") {
  json table = {{"entries", json::array({{{"term", to_json(SymbolTerm{0, node<std::string>("c")})},
                                          {"value", "e0"}}})}};
  json hsets = json::array(
      {{{"label", "e0"}, {"trees", json::array({to_json(SymbolTerm{0, node<std::string>("e0")})})}}});
  std::string term = write_temp("evalterm", to_json(SymbolTerm{0, node<std::string>("c")}));
  std::string tpath = write_temp("evaltable", table);
  std::string hpath = write_temp("evalh", hsets);

  auto yes = run_cli("eval --term " + term + " --target e0 --table " + tpath + " --hsets " + hpath);
  REQUIRE(yes.exit_code == 0);
  CHECK(json::parse(yes.output)["verdict"] == true);

  auto no = run_cli("eval --term " + term + " --target e9 --table " + tpath + " --hsets " + hpath);
  REQUIRE(no.exit_code == 0);
  CHECK(json::parse(no.output)["verdict"] == false);
}

TEST_CASE("cli: enumerate") {
  auto r = run_cli("enumerate --alphabet " + write_temp("alpha", to_json(corpus::alphabet())) +
                   " --arity 0 --max-height 1");
  REQUIRE(r.exit_code == 0);
  json jr = json::parse(r.output);
  CHECK(jr["payload"]["count"] == 3);  // c, a(c,c), b(c,c)
}

TEST_CASE("cli: deterministic output and input errors") {
  std::string args = "member --automaton " + data_path("contains_a.automaton.json") + " --tree " +
                     write_temp("det", to_json(corpus::all_b_tree()));
  auto first = run_cli(args);
  auto second = run_cli(args);
  CHECK(first.output == second.output);

  std::ofstream bad("/tmp/treealg_test_bad.json");
  bad << "{ not json";
  bad.close();
  auto err = run_cli("member --automaton /tmp/treealg_test_bad.json --tree " +
                     write_temp("det2", to_json(corpus::all_b_tree())));
  CHECK(err.exit_code == 2);
  CHECK(err.output.empty());

  auto missing = run_cli("member --automaton /tmp/does_not_exist.json --tree " +
                         write_temp("det3", to_json(corpus::all_b_tree())));
  CHECK(missing.exit_code == 2);

  auto badflag = run_cli("member --bogus-flag x");
  CHECK(badflag.exit_code == 2);
}
