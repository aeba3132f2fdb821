#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "hwp/group.hpp"

namespace hwp {

using Vertex = std::uint32_t;

/// Edge membership table: dense bitmap for small graphs, hashed otherwise.
class EdgeSet {
 public:
  explicit EdgeSet(std::size_t vertices) : n_(vertices) {
    if (dense()) bits_.assign(n_ * n_, 0);
  }
  std::size_t vertices() const { return n_; }
  /// Inserts {u, v}; false if already present.
  bool insert(Vertex u, Vertex v) {
    if (dense()) {
      auto& a = bits_[u * n_ + v];
      if (a) return false;
      a = bits_[v * n_ + u] = 1;
    } else if (!hashed_.insert(key(u, v)).second) {
      return false;
    }
    ++size_;
    return true;
  }
  bool contains(Vertex u, Vertex v) const {
    if (u >= n_ || v >= n_) return false;
    return dense() ? bits_[u * n_ + v] != 0 : hashed_.count(key(u, v)) != 0;
  }
  std::size_t size() const { return size_; }

 private:
  static constexpr std::size_t kDenseLimit = 4096;
  bool dense() const { return n_ <= kDenseLimit; }
  static std::uint64_t key(Vertex u, Vertex v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }
  std::size_t n_;
  std::size_t size_ = 0;
  std::vector<char> bits_;
  std::unordered_set<std::uint64_t> hashed_;
};

enum class GraphKind { Cayley, Complete, CompleteMinusMatching, Equipartite };

/// Simple undirected graph on vertices 0..order-1 with a textual descriptor
/// from which it can be rebuilt.
///
/// Vertex numbering: Cayley graphs use i * |Gamma| + gamma for (i, gamma);
/// equipartite graphs use p * z + j for vertex j of part p; K_v - I removes the
/// matching {2i, 2i+1}.
class Graph {
 public:
  static Graph cayley(std::size_t g, const Group& grp, std::vector<Elem> s) {
    if (g < 3) throw InvalidArgument("cayley graph: need g >= 3");
    if (s.empty()) throw InvalidArgument("cayley graph: S must be nonempty");
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw InvalidArgument("cayley graph: S has repeats");
    Graph out(GraphKind::Cayley, g * grp.order());
    out.g_ = g;
    out.group_ = grp;
    out.support_ = s;
    const std::size_t q = grp.order();
    for (std::size_t i = 0; i < g; ++i)
      for (Elem x : grp.elements())
        for (Elem d : s)
          out.add_edge(static_cast<Vertex>(i * q + x), static_cast<Vertex>(((i + 1) % g) * q + grp.add(d, x)));
    return out;
  }

  static Graph complete(std::size_t v) {
    if (v < 3) throw InvalidArgument("complete graph: need v >= 3");
    Graph out(GraphKind::Complete, v);
    for (Vertex a = 0; a < v; ++a)
      for (Vertex b = a + 1; b < v; ++b) out.add_edge(a, b);
    return out;
  }

  static Graph complete_minus_matching(std::size_t v) {
    if (v < 4 || v % 2 != 0) throw InvalidArgument("K_v - I: v must be even and at least 4");
    Graph out(GraphKind::CompleteMinusMatching, v);
    for (Vertex a = 0; a < v; ++a)
      for (Vertex b = a + 1; b < v; ++b)
        if (b != (a ^ 1u)) out.add_edge(a, b);
    return out;
  }

  /// K_v for odd v, K_v - I for even v.
  static Graph complete_star(std::size_t v) { return v % 2 == 1 ? complete(v) : complete_minus_matching(v); }

  static Graph equipartite(std::size_t t, std::size_t z) {
    if (t < 2 || z < 1) throw InvalidArgument("K_t[z]: need t >= 2 and z >= 1");
    Graph out(GraphKind::Equipartite, t * z);
    out.t_ = t;
    out.z_ = z;
    for (Vertex a = 0; a < t * z; ++a)
      for (Vertex b = a + 1; b < t * z; ++b)
        if (a / z != b / z) out.add_edge(a, b);
    return out;
  }

  static Graph parse(const std::string& descriptor);

  GraphKind kind() const { return kind_; }
  std::size_t order() const { return order_; }
  std::size_t size() const { return edges_.size(); }
  bool has_edge(Vertex a, Vertex b) const { return a != b && edges_.contains(a, b); }
  const EdgeSet& edges() const { return edges_; }
  std::size_t degree_target() const { return 2 * size() / order_; }
  /// Part index of a vertex (equipartite graphs only).
  std::size_t part(Vertex a) const { return a / z_; }
  std::size_t parts() const { return t_; }
  std::size_t part_size() const { return z_; }
  std::size_t columns() const { return g_; }
  const Group& group() const { return group_; }
  const std::vector<Elem>& support() const { return support_; }

  std::string descriptor() const {
    std::ostringstream os;
    switch (kind_) {
      case GraphKind::Cayley: {
        os << "cayley:g=" << g_ << ";group=" << group_.descriptor() << ";S=";
        for (std::size_t i = 0; i < support_.size(); ++i) os << (i ? "," : "") << support_[i];
        break;
      }
      case GraphKind::Complete: os << "complete:v=" << order_; break;
      case GraphKind::CompleteMinusMatching: os << "complete-minus-matching:v=" << order_; break;
      case GraphKind::Equipartite: os << "equipartite:t=" << t_ << ",z=" << z_; break;
    }
    return os.str();
  }

  /// Human-readable vertex name.
  std::string vertex_name(Vertex a) const {
    if (kind_ == GraphKind::Cayley)
      return "(" + std::to_string(a / group_.order()) + "," + group_.format(a % group_.order()) + ")";
    if (kind_ == GraphKind::Equipartite) return std::to_string(a / z_) + ":" + std::to_string(a % z_);
    return std::to_string(a);
  }

 private:
  Graph(GraphKind kind, std::size_t order) : kind_(kind), order_(order), edges_(order), group_(Group::cyclic({1})) {}
  void add_edge(Vertex a, Vertex b) {
    if (a == b || !edges_.insert(a, b)) throw InvalidArgument("graph would not be simple");
  }

  GraphKind kind_;
  std::size_t order_;
  EdgeSet edges_;
  std::size_t g_ = 0, t_ = 0, z_ = 1;
  Group group_;
  std::vector<Elem> support_;
};

namespace detail {
inline std::size_t parse_count(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) throw InvalidArgument("bad " + what + " '" + text + "'");
  return static_cast<std::size_t>(v);
}

inline std::string take_field(const std::string& s, const std::string& name, char sep) {
  auto at = s.find(name + "=");
  if (at == std::string::npos) throw InvalidArgument("graph descriptor lacks '" + name + "'");
  at += name.size() + 1;
  auto end = s.find(sep, at);
  return s.substr(at, end == std::string::npos ? std::string::npos : end - at);
}
}  // namespace detail

inline Graph Graph::parse(const std::string& d) {
  auto colon = d.find(':');
  if (colon == std::string::npos) throw InvalidArgument("bad graph descriptor '" + d + "'");
  const std::string kind = d.substr(0, colon), rest = d.substr(colon + 1);
  if (kind == "complete") return complete(detail::parse_count(detail::take_field(rest, "v", ','), "v"));
  if (kind == "complete-minus-matching")
    return complete_minus_matching(detail::parse_count(detail::take_field(rest, "v", ','), "v"));
  if (kind == "equipartite")
    return equipartite(detail::parse_count(detail::take_field(rest, "t", ','), "t"),
                       detail::parse_count(detail::take_field(rest, "z", ','), "z"));
  if (kind == "cayley") {
    std::size_t g = detail::parse_count(detail::take_field(rest, "g", ';'), "g");
    Group grp = Group::parse(detail::take_field(rest, "group", ';'));
    std::vector<Elem> s;
    std::stringstream ss(detail::take_field(rest, "S", ';'));
    for (std::string item; std::getline(ss, item, ',');) {
      auto e = detail::parse_count(item, "element index");
      if (e >= grp.order()) throw InvalidArgument("element index out of range in graph descriptor");
      s.push_back(static_cast<Elem>(e));
    }
    return cayley(g, grp, s);
  }
  throw InvalidArgument("unknown graph kind '" + kind + "'");
}

}  // namespace hwp
