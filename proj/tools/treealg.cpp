// treealg: command-line frontend for the tree-algebra toolkit.
//
// Every command prints one JSON document {"command","verdict","payload"} on
// standard output; diagnostics go to standard error. Exit code 0 means the
// command computed a result (the verdict may be true or false), 2 means the
// input was rejected.

#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "treealg/corpus.hpp"
#include "treealg/enumerate.hpp"
#include "treealg/json_io.hpp"

namespace {

using treealg::json;

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw treealg::error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw treealg::error(path + ": " + e.what());
  }
  return j;
}

treealg::LanguagePair load_language(const std::string& path) {
  treealg::LanguagePairInput in = treealg::language_pair_from_json(load_file(path));
  auto checked = treealg::load_language_pair(in.positive, in.complement, in.samples);
  if (auto* report = std::get_if<std::string>(&checked)) throw treealg::error(*report);
  return std::get<treealg::LanguagePair>(checked);
}

void emit(const std::string& command, json verdict, json payload) {
  json out = {{"command", command}, {"verdict", std::move(verdict)}, {"payload", std::move(payload)}};
  std::cout << out.dump(2) << "\n";
}

treealg::AlgebraElement element_from_tree(const treealg::LanguagePair& lang,
                                          const treealg::RegularTree& tree) {
  if (auto v = treealg::validate_regular_tree(lang.positive.alphabet, tree))
    throw treealg::error("element tree invalid: " + v->describe());
  return {tree.arity, treealg::profile_set_of_regular(lang.positive, tree), tree};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"treealg: regular languages of infinite trees via tree algebras"};
  app.require_subcommand(1);
  unsigned seed = 0;
  app.add_option("--seed", seed, "seed for randomized corpus sampling");

  std::string automaton_file, tree_file, language_file, left_file, right_file;
  std::string term_file, target_label, table_file, hsets_file, alphabet_file;
  int max_arity = 1, arity = 0, max_height = 2, sample = 0;

  CLI::App* cmd_empty = app.add_subcommand("empty", "decide language emptiness");
  cmd_empty->add_option("--automaton", automaton_file)->required();

  CLI::App* cmd_member = app.add_subcommand("member", "decide membership of a regular tree");
  cmd_member->add_option("--automaton", automaton_file)->required();
  cmd_member->add_option("--tree", tree_file)->required();

  CLI::App* cmd_equiv = app.add_subcommand("equiv", "decide the syntactic congruence");
  cmd_equiv->add_option("--language", language_file)->required();
  cmd_equiv->add_option("--left", left_file)->required();
  cmd_equiv->add_option("--right", right_file)->required();

  CLI::App* cmd_syntactic = app.add_subcommand("syntactic", "compute the syntactic algebra");
  cmd_syntactic->add_option("--language", language_file)->required();
  cmd_syntactic->add_option("--max-arity", max_arity);

  CLI::App* cmd_comm = app.add_subcommand("commutative", "decide commutativity");
  cmd_comm->add_option("--language", language_file)->required();

  CLI::App* cmd_reduce = app.add_subcommand("reduce", "reduced factorization of a finite term");
  cmd_reduce->add_option("--term", term_file)->required();

  CLI::App* cmd_eval = app.add_subcommand("eval", "bounded factorization evaluation");
  cmd_eval->add_option("--term", term_file)->required();
  cmd_eval->add_option("--target", target_label)->required();
  cmd_eval->add_option("--table", table_file)->required();
  cmd_eval->add_option("--hsets", hsets_file)->required();

  CLI::App* cmd_enum = app.add_subcommand("enumerate", "enumerate terms up to a height bound");
  cmd_enum->add_option("--alphabet", alphabet_file)->required();
  cmd_enum->add_option("--arity", arity);
  cmd_enum->add_option("--max-height", max_height);
  cmd_enum->add_option("--sample", sample, "emit only a seeded random sample of this size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (*cmd_empty) {
      auto a = treealg::automaton_from_json(load_file(automaton_file));
      auto witness = treealg::emptiness_witness(a);
      json payload = json::object();
      if (witness) payload["witness"] = treealg::to_json(*witness);
      emit("empty", !witness.has_value(), payload);
    } else if (*cmd_member) {
      auto a = treealg::automaton_from_json(load_file(automaton_file));
      auto g = treealg::tree_from_json(load_file(tree_file));
      if (auto v = treealg::validate_regular_tree(a.alphabet, g))
        throw treealg::error("tree invalid: " + v->describe());
      if (g.arity != 0) throw treealg::error("member: tree arity must be 0");
      emit("member", treealg::membership(a, g), json::object());
    } else if (*cmd_equiv) {
      auto lang = load_language(language_file);
      auto u = element_from_tree(lang, treealg::tree_from_json(load_file(left_file)));
      auto v = element_from_tree(lang, treealg::tree_from_json(load_file(right_file)));
      if (u.arity != v.arity) throw treealg::error("equiv: arity mismatch");
      auto r = treealg::synt_equiv_with_separator(lang, u, v);
      json payload = json::object();
      if (r.separator) payload["separator"] = treealg::to_json(*r.separator);
      emit("equiv", r.equivalent, payload);
    } else if (*cmd_syntactic) {
      auto lang = load_language(language_file);
      if (max_arity < 0) throw treealg::error("syntactic: negative arity bound");
      auto s = treealg::syntactic_algebra(lang, max_arity);
      emit("syntactic", nullptr, treealg::to_json(s));
    } else if (*cmd_comm) {
      auto lang = load_language(language_file);
      int bound = 0;
      for (const auto& [name, ar] : lang.positive.alphabet.symbols()) bound = std::max(bound, ar);
      auto s = treealg::syntactic_algebra(lang, bound);
      auto r = treealg::is_commutative(lang, s);
      json payload = json::object();
      if (!r.commutative) {
        payload["symbol"] = r.symbol;
        payload["permutation"] = r.permutation;
        if (r.separator) payload["separator"] = treealg::to_json(*r.separator);
      }
      emit("commutative", r.commutative, payload);
    } else if (*cmd_reduce) {
      auto t = treealg::term_from_json(load_file(term_file));
      auto f = treealg::reduce(t);
      int h = treealg::height(f);
      bool reduced = treealg::is_reduced(f);
      bool bound_ok = h <= 2 * t.arity;
      bool flatten_ok = treealg::flatten(f) == t;
      json payload = {{"factorization", treealg::to_json(f)},
                      {"height", h},
                      {"height_bound", 2 * t.arity},
                      {"is_reduced", reduced},
                      {"bound_ok", bound_ok},
                      {"flatten_ok", flatten_ok}};
      emit("reduce", reduced && bound_ok && flatten_ok, payload);
    } else if (*cmd_eval) {
      auto t = treealg::term_from_json(load_file(term_file));
      auto table = treealg::eval_table_from_json(load_file(table_file));
      auto h = treealg::h_sets_from_json(load_file(hsets_file));
      emit("eval", treealg::decide_low_arity(t, target_label, table, h), json::object());
    } else if (*cmd_enum) {
      auto sigma = treealg::alphabet_from_json(load_file(alphabet_file));
      auto terms = treealg::oracle_enumerate_terms(sigma, arity, max_height);
      if (sample > 0 && sample < static_cast<int>(terms.size())) {
        std::mt19937 rng(seed);
        std::shuffle(terms.begin(), terms.end(), rng);
        terms.resize(static_cast<size_t>(sample));
      }
      json jt = json::array();
      for (const auto& t : terms) jt.push_back(treealg::to_json(t));
      emit("enumerate", nullptr, {{"count", terms.size()}, {"terms", jt}});
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
