#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hwp/group.hpp"

namespace hwp {

namespace detail {

// Splits "[^3 x, ^1 y, z]" into (count, item text) pairs. Items may contain
// commas inside parentheses.
inline std::vector<std::pair<std::size_t, std::string>> split_list(std::string_view text) {
  auto first = text.find_first_not_of(" \t\n");
  auto last = text.find_last_not_of(" \t\n");
  if (first == std::string_view::npos || text[first] != '[' || text[last] != ']')
    throw InvalidArgument("list must be enclosed in brackets: " + std::string(text));
  std::string_view body = text.substr(first + 1, last - first - 1);
  std::vector<std::pair<std::size_t, std::string>> out;
  std::string cur;
  int depth = 0;
  auto flush = [&]() {
    std::string_view item = cur;
    auto a = item.find_first_not_of(" \t\n");
    if (a == std::string_view::npos) {
      if (!out.empty() || !cur.empty()) throw InvalidArgument("empty list item in: " + std::string(text));
      return;
    }
    item = item.substr(a, item.find_last_not_of(" \t\n") - a + 1);
    std::size_t count = 1;
    if (item[0] == '^') {
      std::size_t j = 1;
      while (j < item.size() && std::isdigit(static_cast<unsigned char>(item[j]))) ++j;
      auto [p, ec] = std::from_chars(item.data() + 1, item.data() + j, count);
      if (ec != std::errc() || j == 1) throw InvalidArgument("bad multiplicity in: " + std::string(text));
      item = item.substr(j);
      auto b = item.find_first_not_of(" \t\n");
      if (b == std::string_view::npos) throw InvalidArgument("missing list entry in: " + std::string(text));
      item = item.substr(b);
    }
    out.emplace_back(count, std::string(item));
    cur.clear();
  };
  for (char c : body) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      flush();
      continue;
    }
    cur += c;
  }
  if (!out.empty() || cur.find_first_not_of(" \t\n") != std::string::npos) flush();
  return out;
}

}  // namespace detail

/// Multiset of group elements.
class VList {
 public:
  explicit VList(Group g) : group_(std::move(g)) {}
  VList(Group g, std::vector<Elem> items) : group_(std::move(g)), items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
  }

  static VList parse(const Group& g, std::string_view text) {
    std::vector<Elem> items;
    for (auto& [count, item] : detail::split_list(text)) {
      Elem e = g.parse_element(item);
      items.insert(items.end(), count, e);
    }
    return VList(g, std::move(items));
  }

  void add(Elem e, std::size_t count = 1) {
    auto pos = std::upper_bound(items_.begin(), items_.end(), e);
    items_.insert(pos, count, e);
  }

  const Group& group() const { return group_; }
  const std::vector<Elem>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }

  std::size_t count(Elem e) const {
    auto [lo, hi] = std::equal_range(items_.begin(), items_.end(), e);
    return static_cast<std::size_t>(hi - lo);
  }

  /// Distinct elements with multiplicities, in canonical order.
  std::vector<std::pair<Elem, std::size_t>> counts() const {
    std::vector<std::pair<Elem, std::size_t>> out;
    for (Elem e : items_) {
      if (!out.empty() && out.back().first == e) ++out.back().second;
      else out.emplace_back(e, 1);
    }
    return out;
  }

  /// Sum of all entries. Only meaningful for abelian groups.
  Elem sum() const {
    Elem s = group_.zero();
    for (Elem e : items_) s = group_.add(s, e);
    return s;
  }

  std::string to_string() const {
    std::string s = "[";
    bool first = true;
    for (auto [e, c] : counts()) {
      if (!first) s += ", ";
      first = false;
      s += "^" + std::to_string(c) + " " + group_.format(e);
    }
    return s + "]";
  }

  friend bool operator==(const VList& a, const VList& b) { return a.group_ == b.group_ && a.items_ == b.items_; }

 private:
  Group group_;
  std::vector<Elem> items_;
};

/// Multiset of positive integers (element orders).
class OrderList {
 public:
  OrderList() = default;
  explicit OrderList(std::vector<std::size_t> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
  }
  /// [^a x, ^b y]; entries with zero multiplicity are dropped.
  OrderList(std::initializer_list<std::pair<std::size_t, std::size_t>> count_value) {
    for (auto [c, v] : count_value) items_.insert(items_.end(), c, v);
    std::sort(items_.begin(), items_.end());
  }

  static OrderList parse(std::string_view text) {
    std::vector<std::size_t> items;
    for (auto& [count, item] : detail::split_list(text)) {
      std::size_t v = 0;
      auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc() || p != item.data() + item.size() || v == 0)
        throw InvalidArgument("bad order entry '" + item + "'");
      items.insert(items.end(), count, v);
    }
    return OrderList(std::move(items));
  }

  const std::vector<std::size_t>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }

  std::map<std::size_t, std::size_t> counts() const {
    std::map<std::size_t, std::size_t> out;
    for (auto v : items_) ++out[v];
    return out;
  }

  std::string to_string() const {
    std::string s = "[";
    bool first = true;
    for (auto [v, c] : counts()) {
      if (!first) s += ", ";
      first = false;
      s += "^" + std::to_string(c) + " " + std::to_string(v);
    }
    return s + "]";
  }

  friend bool operator==(const OrderList&, const OrderList&) = default;

 private:
  std::vector<std::size_t> items_;
};

inline OrderList orders_of(const VList& list) {
  std::vector<std::size_t> out;
  out.reserve(list.size());
  for (Elem e : list.items()) out.push_back(list.group().element_order(e));
  return OrderList(std::move(out));
}

}  // namespace hwp
