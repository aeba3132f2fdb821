#pragma once

// Backtracking search for maps a -> a + d(a) on a set X of group elements,
// where d(a) is drawn from a labelled multiset D and the images cover X
// exactly once. Delta-permutations (abelian) and complete mappings (any group)
// are both instances.
//
// Branching picks whichever element or image has the fewest live options,
// values are tried in random order, and the search restarts with a doubled
// node budget until the attempt limit is reached.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hwp/error.hpp"
#include "hwp/group.hpp"
#include "hwp/rng.hpp"

namespace hwp {

struct SearchBudget {
  std::uint64_t seed = 0;
  std::size_t nodes = 20000;
  int attempts = 12;
};

struct LabelProblem {
  Group group;
  std::vector<Elem> universe;
  /// Distinct labels with multiplicities; multiplicities sum to |universe|.
  std::vector<std::pair<Elem, std::size_t>> labels;
  /// Forced (element, label) assignments.
  std::vector<std::pair<Elem, Elem>> pins;
};

namespace detail {

class LabelSearch {
 public:
  explicit LabelSearch(const LabelProblem& p) : p_(p) {
    n_ = p.universe.size();
    L_ = p.labels.size();
    std::vector<int> pos(p.group.order(), -1);
    for (std::size_t i = 0; i < n_; ++i) {
      if (pos[p.universe[i]] != -1) throw InvalidArgument("label search: universe has repeated elements");
      pos[p.universe[i]] = static_cast<int>(i);
    }
    std::size_t total = 0;
    for (auto& [lab, c] : p.labels) total += c;
    if (total != n_) throw InvalidArgument("label search: multiplicities do not sum to the set size");
    next_.assign(n_ * L_, -1);
    prev_.assign(n_ * L_, -1);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t j = 0; j < L_; ++j) {
        int b = pos[p.group.add(p.universe[a], p.labels[j].first)];
        next_[a * L_ + j] = b;
        if (b >= 0) prev_[static_cast<std::size_t>(b) * L_ + j] = static_cast<int>(a);
      }
    pin_.assign(n_, -1);
    for (auto [e, lab] : p.pins) {
      int a = pos.at(e);
      if (a < 0) throw InvalidArgument("label search: pinned element outside the set");
      int j = -1;
      for (std::size_t t = 0; t < L_; ++t)
        if (p.labels[t].first == lab) j = static_cast<int>(t);
      if (j < 0) throw InvalidArgument("label search: pinned label not in the list");
      if (pin_[a] != -1 && pin_[a] != j) throw InvalidArgument("label search: conflicting pins");
      pin_[a] = j;
    }
  }

  std::optional<std::vector<int>> run(const SearchBudget& budget) {
    Rng seeder(budget.seed);
    std::size_t nodes = budget.nodes;
    for (int attempt = 0; attempt < budget.attempts; ++attempt) {
      Rng rng(seeder.fork());
      if (auto r = attempt_once(rng, nodes)) return r;
      nodes *= 2;
    }
    return std::nullopt;
  }

 private:
  struct OutOfBudget {};

  std::optional<std::vector<int>> attempt_once(Rng& rng, std::size_t node_limit) {
    lab_.assign(n_, -1);
    pre_.assign(n_, -1);
    left_.resize(L_);
    for (std::size_t j = 0; j < L_; ++j) left_[j] = static_cast<long long>(p_.labels[j].second);
    remaining_ = n_;
    for (std::size_t a = 0; a < n_; ++a) {
      if (pin_[a] < 0) continue;
      auto j = static_cast<std::size_t>(pin_[a]);
      int b = next_[a * L_ + j];
      if (b < 0 || pre_[b] != -1 || left_[j] == 0) return std::nullopt;
      place(a, j);
    }
    nodes_ = 0;
    limit_ = node_limit;
    rng_ = &rng;
    try {
      if (!dfs()) return std::nullopt;
    } catch (const OutOfBudget&) {
      return std::nullopt;
    }
    return lab_;
  }

  void place(std::size_t a, std::size_t j) {
    lab_[a] = static_cast<int>(j);
    pre_[static_cast<std::size_t>(next_[a * L_ + j])] = static_cast<int>(a);
    --left_[j];
    --remaining_;
  }
  void unplace(std::size_t a, std::size_t j) {
    pre_[static_cast<std::size_t>(next_[a * L_ + j])] = -1;
    lab_[a] = -1;
    ++left_[j];
    ++remaining_;
  }

  bool dfs() {
    if (remaining_ == 0) return true;
    if (++nodes_ > limit_) throw OutOfBudget{};
    // Most constrained variable: an unassigned element or an uncovered image.
    std::size_t best = n_ * L_ + 1;
    std::size_t best_var = 0;
    bool best_is_image = false;
    for (std::size_t a = 0; a < n_ && best > 1; ++a) {
      if (lab_[a] != -1) continue;
      std::size_t d = 0;
      for (std::size_t j = 0; j < L_; ++j) {
        int b = next_[a * L_ + j];
        if (left_[j] > 0 && b >= 0 && pre_[b] == -1) ++d;
      }
      if (d == 0) return false;
      if (d < best) best = d, best_var = a, best_is_image = false;
    }
    for (std::size_t b = 0; b < n_ && best > 1; ++b) {
      if (pre_[b] != -1) continue;
      std::size_t d = 0;
      for (std::size_t j = 0; j < L_; ++j) {
        int a = prev_[b * L_ + j];
        if (left_[j] > 0 && a >= 0 && lab_[a] == -1) ++d;
      }
      if (d == 0) return false;
      if (d < best) best = d, best_var = b, best_is_image = true;
    }
    std::vector<std::pair<std::size_t, std::size_t>> moves;  // (element, label)
    for (std::size_t j = 0; j < L_; ++j) {
      if (left_[j] == 0) continue;
      if (best_is_image) {
        int a = prev_[best_var * L_ + j];
        if (a >= 0 && lab_[a] == -1) moves.emplace_back(static_cast<std::size_t>(a), j);
      } else {
        int b = next_[best_var * L_ + j];
        if (b >= 0 && pre_[b] == -1) moves.emplace_back(best_var, j);
      }
    }
    rng_->shuffle(moves);
    for (auto [a, j] : moves) {
      place(a, j);
      if (dfs()) return true;
      unplace(a, j);
    }
    return false;
  }

  const LabelProblem& p_;
  std::size_t n_ = 0, L_ = 0;
  std::vector<int> next_, prev_, pin_;
  std::vector<int> lab_, pre_;
  std::vector<long long> left_;
  std::size_t remaining_ = 0, nodes_ = 0, limit_ = 0;
  Rng* rng_ = nullptr;
};

}  // namespace detail

/// Returns, for each universe position, the chosen label (not its index), or
/// nothing if the budget ran out.
inline std::optional<std::vector<Elem>> solve_labels(const LabelProblem& problem, const SearchBudget& budget) {
  detail::LabelSearch search(problem);
  auto r = search.run(budget);
  if (!r) return std::nullopt;
  std::vector<Elem> out(r->size());
  for (std::size_t i = 0; i < r->size(); ++i) out[i] = problem.labels[static_cast<std::size_t>((*r)[i])].first;
  return out;
}

}  // namespace hwp
