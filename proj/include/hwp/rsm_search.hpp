#pragma once

// Randomized backtracking for 3-column row-sum matrices over small groups.
// Used where the explicit constructions degenerate.

#include <optional>
#include <vector>

#include "hwp/rsm.hpp"

namespace hwp {

namespace detail {

class RsmSearch {
 public:
  RsmSearch(const Group& g, std::vector<Elem> support, const OrderList& target, std::uint64_t seed,
            std::size_t node_limit)
      : g_(g), support_(std::move(support)), rng_(seed), limit_(node_limit) {
    need_.assign(g.order() + 1, 0);
    for (auto v : target.items()) {
      if (v > g.order()) throw InvalidArgument("search_rsm: order exceeds the group order");
      ++need_[v];
    }
    orders_.resize(g.order());
    for (Elem e : g.elements()) orders_[e] = g.element_order(e);
    used1_.assign(g.order(), 0);
    used2_.assign(g.order(), 0);
    rows_.assign(support_.size(), {});
  }

  std::optional<std::vector<std::vector<Elem>>> run() {
    if (dfs(0)) return rows_;
    return std::nullopt;
  }

 private:
  bool dfs(std::size_t i) {
    if (i == support_.size()) return true;
    if (++nodes_ > limit_) return false;
    std::vector<Elem> xs;
    for (Elem x : support_)
      if (!used1_[x]) xs.push_back(x);
    rng_.shuffle(xs);
    for (Elem x : xs) {
      Elem p = g_.add(support_[i], x);
      std::vector<Elem> ys;
      for (Elem y : support_)
        if (!used2_[y] && need_[orders_[g_.add(p, y)]] > 0) ys.push_back(y);
      rng_.shuffle(ys);
      for (Elem y : ys) {
        std::size_t o = orders_[g_.add(p, y)];
        used1_[x] = used2_[y] = 1;
        --need_[o];
        rows_[i] = {support_[i], x, y};
        if (dfs(i + 1)) return true;
        ++need_[o];
        used1_[x] = used2_[y] = 0;
        if (nodes_ > limit_) return false;
      }
    }
    return false;
  }

  const Group& g_;
  std::vector<Elem> support_;
  Rng rng_;
  std::size_t limit_;
  std::size_t nodes_ = 0;
  std::vector<std::size_t> need_, orders_;
  std::vector<char> used1_, used2_;
  std::vector<std::vector<Elem>> rows_;
};

}  // namespace detail

/// Searches a |S| x 3 row-sum matrix with support S and the given row-sum orders.
inline std::optional<RowSumMatrix> search_rsm(const Group& g, std::vector<Elem> support, const OrderList& target,
                                              const SearchBudget& budget = {}) {
  std::sort(support.begin(), support.end());
  if (target.size() != support.size()) throw InvalidArgument("search_rsm: need one order per element of S");
  Rng seeds(budget.seed);
  std::size_t limit = budget.nodes;
  for (int attempt = 0; attempt < budget.attempts; ++attempt, limit *= 2) {
    detail::RsmSearch s(g, support, target, seeds.fork(), limit);
    if (auto rows = s.run()) {
      RowSumMatrix out{g, support, 3, std::move(*rows)};
      if (auto v = verify_rsm(out, target); !v) throw InternalError("search_rsm: " + v.diagnostic);
      return out;
    }
  }
  return std::nullopt;
}

inline std::optional<RowSumMatrix> search_rsm(const Group& g, const OrderList& target, const SearchBudget& budget = {}) {
  return search_rsm(g, g.elements(), target, budget);
}

}  // namespace hwp
