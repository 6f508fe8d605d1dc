#include <catch_amalgamated.hpp>

#include <random>

#include "testutil.hpp"
#include "treealg/parity_game.hpp"

using namespace treealg;

namespace {

/// Deterministic random game: every position gets one or two out-edges.
ParityGame random_game(std::mt19937& rng, int n, int max_priority, bool allow_dead_ends) {
  ParityGame g;
  for (int i = 0; i < n; ++i)
    g.add_position("p" + std::to_string(i),
                   std::uniform_int_distribution<int>(0, 1)(rng) ? Player::even : Player::odd,
                   std::uniform_int_distribution<int>(0, max_priority)(rng));
  for (int i = 0; i < n; ++i) {
    int degree = std::uniform_int_distribution<int>(allow_dead_ends ? 0 : 1, 2)(rng);
    for (int e = 0; e < degree; ++e)
      g.add_edge(i, std::uniform_int_distribution<int>(0, n - 1)(rng));
  }
  return g;
}

}  // namespace

TEST_CASE("self-loop with priority 0 is winning for Even") {
  ParityGame g;
  g.add_position("p", Player::even, 0);
  g.add_edge("p", "p");
  GameSolution s = solve(g);
  CHECK(s.even_region == std::set<std::string>{"p"});
  CHECK(s.even_strategy.at("p") == "p");
  CHECK(verify_strategy(g, s));
}

TEST_CASE("self-loop with priority 1 is winning for Odd") {
  ParityGame g;
  g.add_position("p", Player::even, 1);
  g.add_edge("p", "p");
  GameSolution s = solve(g);
  CHECK(s.odd_region == std::set<std::string>{"p"});
  CHECK(s.even_strategy.empty());
  CHECK(verify_strategy(g, s));
}

TEST_CASE("dead-ends lose for their owner") {
  ParityGame g;
  g.add_position("e", Player::even, 0);
  g.add_position("o", Player::odd, 0);
  GameSolution s = solve(g);
  CHECK(s.odd_region.count("e") == 1);
  CHECK(s.even_region.count("o") == 1);
  CHECK(verify_strategy(g, s));
}

TEST_CASE("a liminf example with alternating priorities") {
  // Odd must leave the favourable 2-cycle through priority 1 eventually or
  // stay in it forever; staying gives liminf 2 for Even.
  ParityGame g;
  g.add_position("x", Player::odd, 2);
  g.add_position("y", Player::even, 3);
  g.add_edge("x", "y");
  g.add_edge("y", "x");
  GameSolution s = solve(g);
  CHECK(s.even_region == std::set<std::string>{"x", "y"});
  CHECK(verify_strategy(g, s));
}

TEST_CASE("solve agrees with the brute-force oracle on random games") {
  std::mt19937 rng(31);
  for (int round = 0; round < 300; ++round) {
    int n = 2 + round % 5;
    ParityGame g = random_game(rng, n, 3, true);
    GameSolution s = solve(g);
    CHECK(s.even_region == testutil::brute_even_region(g));
    CHECK(verify_strategy(g, s));
  }
}

TEST_CASE("exhaustive agreement on all two-position games") {
  // all owner/priority/edge combinations over two positions
  for (int owners = 0; owners < 4; ++owners)
    for (int p0 = 0; p0 <= 3; ++p0)
      for (int p1 = 0; p1 <= 3; ++p1)
        for (int e0 = 0; e0 < 4; ++e0)    // subsets of {->0, ->1}
          for (int e1 = 0; e1 < 4; ++e1) {
            ParityGame g;
            g.add_position("p0", owners & 1 ? Player::even : Player::odd, p0);
            g.add_position("p1", owners & 2 ? Player::even : Player::odd, p1);
            for (int t = 0; t < 2; ++t) {
              if (e0 & (1 << t)) g.add_edge(0, t);
              if (e1 & (1 << t)) g.add_edge(1, t);
            }
            GameSolution s = solve(g);
            REQUIRE(s.even_region == testutil::brute_even_region(g));
            REQUIRE(verify_strategy(g, s));
          }
}

TEST_CASE("determinacy: the regions partition the positions") {
  std::mt19937 rng(32);
  for (int round = 0; round < 100; ++round) {
    ParityGame g = random_game(rng, 2 + round % 6, 4, true);
    GameSolution s = solve(g);
    CHECK(static_cast<int>(s.even_region.size() + s.odd_region.size()) == g.size());
    for (const auto& id : s.even_region) CHECK(s.odd_region.count(id) == 0);
  }
}

TEST_CASE("dualization swaps the winning regions") {
  std::mt19937 rng(33);
  for (int round = 0; round < 100; ++round) {
    ParityGame g = random_game(rng, 2 + round % 6, 3, true);
    ParityGame dual;
    for (int v = 0; v < g.size(); ++v) {
      const auto& p = g.position(v);
      dual.add_position(p.id, opponent(p.owner), p.priority + 1);
    }
    for (int v = 0; v < g.size(); ++v)
      for (int w : g.successors(v)) dual.add_edge(v, w);
    GameSolution s = solve(g);
    GameSolution d = solve(dual);
    CHECK(s.even_region == d.odd_region);
    CHECK(s.odd_region == d.even_region);
  }
}

TEST_CASE("verify_strategy rejects tampered solutions") {
  ParityGame g;
  g.add_position("x", Player::even, 1);
  g.add_position("y", Player::even, 0);
  g.add_position("z", Player::odd, 1);
  g.add_edge("x", "y");
  g.add_edge("x", "z");
  g.add_edge("y", "y");
  g.add_edge("z", "x");
  GameSolution good = solve(g);
  REQUIRE(good.even_region == std::set<std::string>{"x", "y", "z"});
  REQUIRE(verify_strategy(g, good));

  // deliberately losing strategy: x loops through z instead of reaching y
  GameSolution bad = good;
  bad.even_strategy["x"] = "z";
  CHECK(!verify_strategy(g, bad));

  // a strategy edge leaving the claimed region
  GameSolution leak = good;
  leak.even_region = {"x", "y"};
  leak.odd_region = {"z"};
  CHECK(!verify_strategy(g, leak));

  // regions that do not partition the positions
  GameSolution overlap = good;
  overlap.odd_region.insert("x");
  CHECK(!verify_strategy(g, overlap));
}
