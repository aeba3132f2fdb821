#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "hwp/delta_solver.hpp"
#include "hwp/permutation.hpp"

namespace hwp {

enum class MappingStatus { Found, NotFound, Nonexistent };

struct CompleteMappingResult {
  MappingStatus status;
  std::optional<Permutation> mapping;
};

/// True when the Sylow 2-subgroup is cyclic and nontrivial. Decided for the two
/// supported families only.
inline bool sylow2_cyclic_nontrivial(const Group& g) {
  if (g.is_dihedral()) return false;  // contains a reflection and a nontrivial 2-part of G, or is Klein
  int even = 0;
  for (int q : g.moduli())
    if (q % 2 == 0) ++even;
  return even == 1;
}

inline bool is_complete_mapping(const Permutation& pi) {
  const Group& g = pi.group();
  std::vector<char> seen(g.order(), 0);
  for (Elem x : g.elements()) {
    Elem y = g.add(x, pi(x));
    if (seen[y]) return false;
    seen[y] = 1;
  }
  return true;
}

/// Permutation pi with x -> x + pi(x) also a permutation.
inline CompleteMappingResult find_complete_mapping(const Group& g, const SearchBudget& budget = {}) {
  if (sylow2_cyclic_nontrivial(g)) return {MappingStatus::Nonexistent, std::nullopt};
  if (g.order() % 2 == 1) return {MappingStatus::Found, Permutation(g)};
  LabelProblem p{g, g.elements(), {}, {}};
  for (Elem e : g.elements()) p.labels.emplace_back(e, 1);
  auto labels = solve_labels(p, budget);
  if (!labels) return {MappingStatus::NotFound, std::nullopt};
  Permutation pi(g, *labels);
  if (!is_complete_mapping(pi)) throw InternalError("find_complete_mapping: result is not a complete mapping");
  return {MappingStatus::Found, std::move(pi)};
}

/// Memoized find_complete_mapping with a fixed seed, shared by constructions
/// that only need some complete mapping of a group.
inline CompleteMappingResult cached_complete_mapping(const Group& g) {
  static std::mutex mu;
  static std::map<std::string, CompleteMappingResult> cache;
  const std::string key = g.descriptor();
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto r = find_complete_mapping(g, {0x5eed, 50000, 16});
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, r);
  return r;
}

}  // namespace hwp
