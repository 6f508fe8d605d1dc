#pragma once

#include <vector>

#include "treealg/term.hpp"

namespace treealg {

namespace detail {

using VarMask = unsigned;

/// All nodes of height <= h using only variables from `avail`, paired with
/// the set of variables they use.
inline std::vector<std::pair<SymbolNode, VarMask>> enum_nodes(const RankedAlphabet& sigma, int h,
                                                              VarMask avail, bool allow_var) {
  std::vector<std::pair<SymbolNode, VarMask>> out;
  if (allow_var)
    for (int j = 0; (VarMask{1} << j) <= avail; ++j)
      if (avail & (VarMask{1} << j)) out.push_back({var_node<std::string>(j), VarMask{1} << j});

  for (const auto& [name, r] : sigma.symbols()) {
    if (r == 0) {
      out.push_back({node(std::string(name)), 0});
      continue;
    }
    if (h == 0) continue;
    // children in sequence, with pairwise disjoint variable sets
    std::vector<std::pair<std::vector<SymbolNode>, VarMask>> partial{{{}, 0}};
    for (int i = 0; i < r; ++i) {
      std::vector<std::pair<std::vector<SymbolNode>, VarMask>> next;
      for (const auto& [kids, used] : partial)
        for (const auto& [child, cu] : enum_nodes(sigma, h - 1, avail & ~used, true)) {
          auto ext = kids;
          ext.push_back(child);
          next.push_back({std::move(ext), used | cu});
        }
      partial = std::move(next);
    }
    for (auto& [kids, used] : partial)
      out.push_back({node(std::string(name), std::move(kids)), used});
  }
  return out;
}

}  // namespace detail

/// Every well-formed term of the given arity and height at most max_height,
/// each exactly once.
inline std::vector<SymbolTerm> oracle_enumerate_terms(const RankedAlphabet& sigma, int arity,
                                                      int max_height) {
  if (arity < 0 || arity > 16) throw error("oracle_enumerate_terms: arity out of range");
  if (max_height < 0) throw error("oracle_enumerate_terms: negative height");
  detail::VarMask avail = (detail::VarMask{1} << arity) - 1;
  std::vector<SymbolTerm> out;
  for (auto& [root, used] : detail::enum_nodes(sigma, max_height, avail, false))
    out.push_back(SymbolTerm{arity, std::move(root)});
  return out;
}

}  // namespace treealg
