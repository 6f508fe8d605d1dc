#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace treealg {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A ranked alphabet: finitely many symbols, each with a fixed arity.
class RankedAlphabet {
public:
  RankedAlphabet() = default;

  explicit RankedAlphabet(std::map<std::string, int> symbols)
      : symbols_(std::move(symbols)) {
    for (const auto& [name, ar] : symbols_)
      if (ar < 0) throw error("alphabet: negative arity for symbol " + name);
  }

  void add(const std::string& name, int arity) {
    if (arity < 0) throw error("alphabet: negative arity for symbol " + name);
    auto [it, fresh] = symbols_.emplace(name, arity);
    if (!fresh && it->second != arity)
      throw error("alphabet: symbol " + name + " redeclared with different arity");
  }

  bool contains(const std::string& name) const { return symbols_.count(name) > 0; }

  int arity(const std::string& name) const {
    auto it = symbols_.find(name);
    if (it == symbols_.end()) throw error("alphabet: unknown symbol " + name);
    return it->second;
  }

  const std::map<std::string, int>& symbols() const { return symbols_; }

  bool operator==(const RankedAlphabet& other) const = default;

private:
  std::map<std::string, int> symbols_;  // name -> arity, sorted for determinism
};

}  // namespace treealg
