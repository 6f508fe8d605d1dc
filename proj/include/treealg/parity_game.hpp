#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "treealg/alphabet.hpp"

namespace treealg {

enum class Player { even, odd };

inline Player opponent(Player p) { return p == Player::even ? Player::odd : Player::even; }

/// Finite two-player parity game. Winning condition: the minimal priority
/// seen infinitely often is even for player Even ("liminf is even"). A play
/// that gets stuck loses for the player who cannot move.
class ParityGame {
public:
  struct Position {
    std::string id;
    Player owner;
    int priority;
  };

  int add_position(const std::string& id, Player owner, int priority) {
    if (priority < 0) throw error("parity game: negative priority at " + id);
    if (index_.count(id)) throw error("parity game: duplicate position id " + id);
    int ix = static_cast<int>(positions_.size());
    positions_.push_back({id, owner, priority});
    succ_.emplace_back();
    index_.emplace(id, ix);
    return ix;
  }

  void add_edge(int from, int to) {
    auto& row = succ_[static_cast<size_t>(from)];
    if (std::find(row.begin(), row.end(), to) == row.end()) row.push_back(to);
  }

  void add_edge(const std::string& from, const std::string& to) {
    add_edge(index_of(from), index_of(to));
  }

  int index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw error("parity game: unknown position " + id);
    return it->second;
  }

  bool has_position(const std::string& id) const { return index_.count(id) > 0; }

  int size() const { return static_cast<int>(positions_.size()); }
  const Position& position(int ix) const { return positions_[static_cast<size_t>(ix)]; }
  const std::vector<int>& successors(int ix) const { return succ_[static_cast<size_t>(ix)]; }

private:
  std::vector<Position> positions_;
  std::vector<std::vector<int>> succ_;
  std::map<std::string, int> index_;
};

/// Winning regions plus positional strategies. The strategy of a player is
/// defined exactly on the positions they own inside their winning region.
struct GameSolution {
  std::set<std::string> even_region;
  std::set<std::string> odd_region;
  std::map<std::string, std::string> even_strategy;
  std::map<std::string, std::string> odd_strategy;

  const std::set<std::string>& region(Player p) const {
    return p == Player::even ? even_region : odd_region;
  }
  const std::map<std::string, std::string>& strategy(Player p) const {
    return p == Player::even ? even_strategy : odd_strategy;
  }
};

namespace detail {

// Zielonka's recursive algorithm on an arena without dead-ends.
class ZielonkaSolver {
public:
  ZielonkaSolver(const std::vector<Player>& owner, const std::vector<int>& prio,
                 const std::vector<std::vector<int>>& succ)
      : owner_(owner), prio_(prio), succ_(succ), n_(static_cast<int>(owner.size())) {
    pred_.resize(owner.size());
    for (int v = 0; v < n_; ++v)
      for (int w : succ_[static_cast<size_t>(v)]) pred_[static_cast<size_t>(w)].push_back(v);
    strat_.assign(owner.size(), -1);
    win_.assign(owner.size(), Player::even);
  }

  void run() {
    std::vector<char> active(static_cast<size_t>(n_), 1);
    solve(active);
  }

  Player winner(int v) const { return win_[static_cast<size_t>(v)]; }
  int strategy(int v) const { return strat_[static_cast<size_t>(v)]; }

private:
  const std::vector<Player>& owner_;
  const std::vector<int>& prio_;
  const std::vector<std::vector<int>>& succ_;
  int n_;
  std::vector<std::vector<int>> pred_;
  std::vector<int> strat_;
  std::vector<Player> win_;

  // p-attractor of `targets` within `active`; records the forcing edge for
  // newly attracted p-positions.
  std::vector<char> attract(const std::vector<char>& active, Player p,
                            const std::vector<int>& targets) {
    std::vector<int> cnt(static_cast<size_t>(n_), 0);
    for (int v = 0; v < n_; ++v)
      if (active[static_cast<size_t>(v)])
        for (int w : succ_[static_cast<size_t>(v)])
          if (active[static_cast<size_t>(w)]) ++cnt[static_cast<size_t>(v)];

    std::vector<char> in(static_cast<size_t>(n_), 0);
    std::vector<int> queue;
    for (int t : targets) {
      in[static_cast<size_t>(t)] = 1;
      queue.push_back(t);
    }
    while (!queue.empty()) {
      int t = queue.back();
      queue.pop_back();
      for (int u : pred_[static_cast<size_t>(t)]) {
        if (!active[static_cast<size_t>(u)] || in[static_cast<size_t>(u)]) continue;
        if (owner_[static_cast<size_t>(u)] == p) {
          in[static_cast<size_t>(u)] = 1;
          strat_[static_cast<size_t>(u)] = t;
          queue.push_back(u);
        } else if (--cnt[static_cast<size_t>(u)] == 0) {
          in[static_cast<size_t>(u)] = 1;
          queue.push_back(u);
        }
      }
    }
    return in;
  }

  void solve(const std::vector<char>& active) {
    int d = -1;
    for (int v = 0; v < n_; ++v)
      if (active[static_cast<size_t>(v)] && (d < 0 || prio_[static_cast<size_t>(v)] < d))
        d = prio_[static_cast<size_t>(v)];
    if (d < 0) return;  // empty subgame

    Player p = (d % 2 == 0) ? Player::even : Player::odd;
    std::vector<int> tops;
    for (int v = 0; v < n_; ++v)
      if (active[static_cast<size_t>(v)] && prio_[static_cast<size_t>(v)] == d) tops.push_back(v);

    std::vector<char> a = attract(active, p, tops);
    std::vector<char> rest(static_cast<size_t>(n_), 0);
    for (int v = 0; v < n_; ++v)
      rest[static_cast<size_t>(v)] = active[static_cast<size_t>(v)] && !a[static_cast<size_t>(v)];
    solve(rest);

    std::vector<int> opp_won;
    for (int v = 0; v < n_; ++v)
      if (rest[static_cast<size_t>(v)] && win_[static_cast<size_t>(v)] != p) opp_won.push_back(v);

    if (opp_won.empty()) {
      // p wins everywhere: attractor edges cover a \ tops, tops move anywhere
      // inside the subgame, the rest keeps its recursive strategy.
      for (int v = 0; v < n_; ++v)
        if (active[static_cast<size_t>(v)]) win_[static_cast<size_t>(v)] = p;
      for (int v : tops) {
        if (owner_[static_cast<size_t>(v)] != p) continue;
        for (int w : succ_[static_cast<size_t>(v)])
          if (active[static_cast<size_t>(w)]) {
            strat_[static_cast<size_t>(v)] = w;
            break;
          }
      }
      return;
    }

    std::vector<char> b = attract(active, opponent(p), opp_won);
    for (int v = 0; v < n_; ++v)
      if (b[static_cast<size_t>(v)]) win_[static_cast<size_t>(v)] = opponent(p);
    std::vector<char> rest2(static_cast<size_t>(n_), 0);
    for (int v = 0; v < n_; ++v)
      rest2[static_cast<size_t>(v)] = active[static_cast<size_t>(v)] && !b[static_cast<size_t>(v)];
    solve(rest2);
  }
};

}  // namespace detail

/// Solves g under the min-parity condition with positional strategies for
/// both players. Dead-ends lose for their owner.
inline GameSolution solve(const ParityGame& g) {
  int n = g.size();
  std::vector<Player> owner;
  std::vector<int> prio;
  std::vector<std::vector<int>> succ;
  owner.reserve(static_cast<size_t>(n) + 2);
  for (int v = 0; v < n; ++v) {
    owner.push_back(g.position(v).owner);
    prio.push_back(g.position(v).priority);
    succ.push_back(g.successors(v));
  }
  // dead-ends are rerouted to a losing sink for their owner
  int sink_odd_min = -1, sink_even_min = -1;  // liminf 1 / liminf 0 sinks
  auto sink_for = [&](Player p) {
    int& s = (p == Player::even) ? sink_odd_min : sink_even_min;
    if (s < 0) {
      s = static_cast<int>(owner.size());
      owner.push_back(Player::even);
      prio.push_back(p == Player::even ? 1 : 0);
      succ.push_back({s});
    }
    return s;
  };
  for (int v = 0; v < n; ++v)
    if (succ[static_cast<size_t>(v)].empty()) {
      int s = sink_for(owner[static_cast<size_t>(v)]);  // may reallocate succ
      succ[static_cast<size_t>(v)].push_back(s);
    }

  detail::ZielonkaSolver z(owner, prio, succ);
  z.run();

  GameSolution s;
  for (int v = 0; v < n; ++v) {
    const auto& pos = g.position(v);
    bool even_wins = z.winner(v) == Player::even;
    (even_wins ? s.even_region : s.odd_region).insert(pos.id);
    if ((pos.owner == Player::even) == even_wins) {
      int e = z.strategy(v);
      if (e >= 0 && e < n)  // sink edges stand for "no move possible"
        (even_wins ? s.even_strategy : s.odd_strategy).emplace(pos.id, g.position(e).id);
    }
  }
  return s;
}

/// Checks a claimed solution: regions partition the positions, strategies are
/// well-placed and stay inside the owner's region, the opponent cannot leave
/// a region, and in the one-player game obtained by fixing each strategy
/// every reachable cycle has the owner's parity as its minimal priority.
inline bool verify_strategy(const ParityGame& g, const GameSolution& s) {
  int n = g.size();
  for (int v = 0; v < n; ++v) {
    const auto& id = g.position(v).id;
    if (s.even_region.count(id) + s.odd_region.count(id) != 1) return false;
  }
  if (static_cast<int>(s.even_region.size() + s.odd_region.size()) != n) return false;

  for (Player p : {Player::even, Player::odd}) {
    const auto& region = s.region(p);
    const auto& strat = s.strategy(p);

    for (const auto& [from, to] : strat) {
      if (!g.has_position(from) || !g.has_position(to)) return false;
      int v = g.index_of(from);
      if (g.position(v).owner != p || !region.count(from)) return false;
      const auto& row = g.successors(v);
      if (std::find(row.begin(), row.end(), g.index_of(to)) == row.end()) return false;
      if (!region.count(to)) return false;
    }

    // region-local one-player graph
    std::vector<int> verts;
    std::map<int, std::vector<int>> edges;
    for (const auto& id : region) {
      int v = g.index_of(id);
      verts.push_back(v);
      if (g.position(v).owner == p) {
        auto it = strat.find(id);
        if (it == strat.end()) return false;  // owner must have a move here
        edges[v].push_back(g.index_of(it->second));
      } else {
        for (int w : g.successors(v)) {
          if (!region.count(g.position(w).id)) return false;  // opponent escapes
          edges[v].push_back(w);
        }
        // an opponent dead-end inside the region is fine: it loses there
      }
    }

    // no reachable cycle may have a minimal priority of the wrong parity
    std::set<int> prios;
    for (int v : verts) prios.insert(g.position(v).priority);
    for (int d : prios) {
      bool wrong = (d % 2 == 0) != (p == Player::even);
      if (!wrong) continue;
      // cycle through a d-vertex inside the subgraph restricted to >= d
      std::set<int> sub;
      for (int v : verts)
        if (g.position(v).priority >= d) sub.insert(v);
      // DFS from each d-vertex; a walk back to it means a bad cycle
      for (int start : sub) {
        if (g.position(start).priority != d) continue;
        std::set<int> seen;
        std::vector<int> todo;
        for (int w : edges[start])
          if (sub.count(w)) todo.push_back(w);
        while (!todo.empty()) {
          int v = todo.back();
          todo.pop_back();
          if (v == start) return false;
          if (!seen.insert(v).second) continue;
          for (int w : edges[v])
            if (sub.count(w)) todo.push_back(w);
        }
      }
    }
  }
  return true;
}

}  // namespace treealg
