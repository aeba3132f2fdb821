#pragma once

// Finite groups used by the constructions: products of cyclic groups
// Z_{m1} x ... x Z_{mr}, and generalized dihedral groups
// Dih(Z_m x Z_{2^{k+1} n}) = G x| Z_2 with (x,t) + (x',t') = (x + (-1)^t x', t + t').
//
// Elements are indices into a canonical enumeration: row-major over the
// coordinates (first coordinate most significant), with the reflection flag
// slowest. Index 0 is always the identity.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hwp/error.hpp"

namespace hwp {

using Elem = std::uint32_t;

enum class GroupKind { CyclicProduct, Dihedral };

inline long long mod_floor(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

/// Unique x/2 in Z_m for odd m.
inline int halve_odd(int m, long long x) {
  if (m < 1 || m % 2 == 0) throw InvalidArgument("halve_odd: modulus must be odd, got " + std::to_string(m));
  return static_cast<int>(mod_floor(mod_floor(x, m) * ((m + 1) / 2), m));
}

class Group {
 public:
  static Group cyclic(std::vector<int> moduli) {
    if (moduli.empty()) throw InvalidArgument("cyclic group needs at least one modulus");
    for (int q : moduli)
      if (q < 1) throw InvalidArgument("modulus must be positive, got " + std::to_string(q));
    return Group(GroupKind::CyclicProduct, std::move(moduli), 0, 0, 0);
  }

  static Group dihedral(int m, int n, int k) {
    if (m < 1 || m % 2 == 0) throw InvalidArgument("dihedral group needs odd m >= 1, got m=" + std::to_string(m));
    if (n < 1 || n % 2 == 0) throw InvalidArgument("dihedral group needs odd n >= 1, got n=" + std::to_string(n));
    if (k < 0 || k > 20) throw InvalidArgument("dihedral group needs 0 <= k <= 20, got k=" + std::to_string(k));
    return Group(GroupKind::Dihedral, {m, (2 << k) * n}, m, n, k);
  }

  /// Parses `cyclic:2x2x3` or `dihedral:m=3,n=1,k=1`.
  static Group parse(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw InvalidArgument("bad group descriptor: " + std::string(text));
    auto kind = text.substr(0, colon);
    auto rest = text.substr(colon + 1);
    if (kind == "cyclic") {
      std::vector<int> mods;
      std::size_t pos = 0;
      while (pos <= rest.size()) {
        auto x = rest.find('x', pos);
        if (x == std::string_view::npos) x = rest.size();
        mods.push_back(parse_int(rest.substr(pos, x - pos), text));
        pos = x + 1;
      }
      return cyclic(std::move(mods));
    }
    if (kind == "dihedral") {
      int m = -1, n = -1, k = -1;
      std::size_t pos = 0;
      while (pos < rest.size()) {
        auto comma = rest.find(',', pos);
        if (comma == std::string_view::npos) comma = rest.size();
        auto item = rest.substr(pos, comma - pos);
        auto eq = item.find('=');
        if (eq == std::string_view::npos) throw InvalidArgument("bad group descriptor: " + std::string(text));
        int value = parse_int(item.substr(eq + 1), text);
        auto key = item.substr(0, eq);
        if (key == "m") m = value;
        else if (key == "n") n = value;
        else if (key == "k") k = value;
        else throw InvalidArgument("bad group descriptor key in: " + std::string(text));
        pos = comma + 1;
      }
      if (m < 0 || n < 0 || k < 0) throw InvalidArgument("dihedral descriptor needs m, n and k: " + std::string(text));
      return dihedral(m, n, k);
    }
    throw InvalidArgument("unknown group kind in: " + std::string(text));
  }

  GroupKind kind() const { return d_->kind; }
  bool is_dihedral() const { return d_->kind == GroupKind::Dihedral; }
  /// Dih(Z_1 x Z_2) is the Klein group, the only abelian member of the dihedral family.
  bool is_abelian() const { return !is_dihedral() || d_->base_order <= 2; }

  const std::vector<int>& moduli() const { return d_->moduli; }
  std::size_t rank() const { return d_->moduli.size(); }
  std::size_t order() const { return d_->order; }
  std::size_t base_order() const { return d_->base_order; }

  int m() const { return require_dihedral(), d_->m; }
  int n() const { return require_dihedral(), d_->n; }
  int k() const { return require_dihedral(), d_->k; }

  Elem zero() const { return 0; }

  int coord(Elem a, std::size_t i) const { return d_->coords[static_cast<std::size_t>(a) * rank() + i]; }
  int tau(Elem a) const { return a >= d_->base_order ? 1 : 0; }

  Elem make(std::span<const long long> coords, int t = 0) const {
    if (coords.size() != rank()) throw InvalidArgument("element has wrong number of coordinates");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < rank(); ++i)
      idx = idx * d_->moduli[i] + static_cast<std::size_t>(mod_floor(coords[i], d_->moduli[i]));
    if (t % 2 != 0) {
      if (!is_dihedral()) throw InvalidArgument("reflection flag on a cyclic-product group");
      idx += d_->base_order;
    }
    return static_cast<Elem>(idx);
  }
  Elem make(std::initializer_list<long long> coords, int t = 0) const {
    return make(std::span<const long long>(coords.begin(), coords.size()), t);
  }

  Elem add(Elem a, Elem b) const {
    if (!d_->table.empty()) return d_->table[static_cast<std::size_t>(a) * order() + b];
    return add_slow(a, b);
  }

  Elem neg(Elem a) const { return d_->negation[a]; }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  /// t * a, for any integer t.
  Elem scale(Elem a, long long t) const {
    Elem base = t < 0 ? neg(a) : a;
    unsigned long long e = static_cast<unsigned long long>(t < 0 ? -t : t);
    Elem acc = zero();
    while (e) {
      if (e & 1) acc = add(acc, base);
      base = add(base, base);
      e >>= 1;
    }
    return acc;
  }

  /// Least t >= 1 with t*a = 0.
  std::size_t element_order(Elem a) const {
    if (tau(a) == 1) return 2;
    std::size_t ord = 1;
    for (std::size_t i = 0; i < rank(); ++i) {
      int q = d_->moduli[i];
      std::size_t o = static_cast<std::size_t>(q / std::gcd(q, coord(a, i)));
      ord = std::lcm(ord, o);
    }
    return ord;
  }

  std::string format(Elem a) const {
    std::string s = "(";
    for (std::size_t i = 0; i < rank(); ++i) {
      if (i) s += ',';
      s += std::to_string(coord(a, i));
    }
    s += ')';
    if (is_dihedral()) s = "(" + s + "," + std::to_string(tau(a)) + ")";
    return s;
  }

  /// Accepts the text produced by format(); coordinates are reduced.
  Elem parse_element(std::string_view text) const {
    std::vector<long long> nums;
    std::size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i + 1;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        long long v = 0;
        auto [p, ec] = std::from_chars(text.data() + i, text.data() + j, v);
        if (ec != std::errc() || p != text.data() + j) throw InvalidArgument("bad element: " + std::string(text));
        nums.push_back(v);
        i = j;
      } else if (c == '(' || c == ')' || c == ',' || std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else {
        throw InvalidArgument("bad element: " + std::string(text));
      }
    }
    std::size_t want = rank() + (is_dihedral() ? 1 : 0);
    if (nums.size() != want) throw InvalidArgument("element has wrong arity for " + descriptor() + ": " + std::string(text));
    int t = 0;
    if (is_dihedral()) {
      t = static_cast<int>(mod_floor(nums.back(), 2));
      nums.pop_back();
    }
    return make(std::span<const long long>(nums), t);
  }

  std::string descriptor() const {
    if (is_dihedral())
      return "dihedral:m=" + std::to_string(d_->m) + ",n=" + std::to_string(d_->n) + ",k=" + std::to_string(d_->k);
    std::string s = "cyclic:";
    for (std::size_t i = 0; i < rank(); ++i) {
      if (i) s += 'x';
      s += std::to_string(d_->moduli[i]);
    }
    return s;
  }

  std::vector<Elem> elements() const {
    std::vector<Elem> all(order());
    std::iota(all.begin(), all.end(), Elem{0});
    return all;
  }

  friend bool operator==(const Group& a, const Group& b) {
    return a.d_ == b.d_ || (a.d_->kind == b.d_->kind && a.d_->moduli == b.d_->moduli);
  }

 private:
  struct Data {
    GroupKind kind;
    std::vector<int> moduli;
    int m, n, k;
    std::size_t base_order = 1;
    std::size_t order = 1;
    std::vector<int> coords;
    std::vector<Elem> negation;
    std::vector<Elem> table;
  };

  static constexpr std::size_t kTableLimit = 1024;

  Group(GroupKind kind, std::vector<int> moduli, int m, int n, int k) {
    auto d = std::make_shared<Data>();
    d->kind = kind;
    d->moduli = std::move(moduli);
    d->m = m;
    d->n = n;
    d->k = k;
    for (int q : d->moduli) d->base_order *= static_cast<std::size_t>(q);
    d->order = d->base_order * (kind == GroupKind::Dihedral ? 2 : 1);
    const std::size_t r = d->moduli.size();
    d->coords.resize(d->order * r);
    for (std::size_t idx = 0; idx < d->order; ++idx) {
      std::size_t rem = idx % d->base_order;
      for (std::size_t i = r; i-- > 0;) {
        d->coords[idx * r + i] = static_cast<int>(rem % d->moduli[i]);
        rem /= d->moduli[i];
      }
    }
    d_ = d;
    d->negation.resize(d->order);
    for (std::size_t a = 0; a < d->order; ++a) {
      std::vector<long long> c(r);
      for (std::size_t i = 0; i < r; ++i) c[i] = -coord(static_cast<Elem>(a), i);
      int t = tau(static_cast<Elem>(a));
      // (x,1) is an involution; (x,0) negates coordinatewise.
      d->negation[a] = t ? static_cast<Elem>(a) : make(std::span<const long long>(c), 0);
    }
    if (d->order <= kTableLimit) {
      d->table.resize(d->order * d->order);
      for (std::size_t a = 0; a < d->order; ++a)
        for (std::size_t b = 0; b < d->order; ++b)
          d->table[a * d->order + b] = add_slow(static_cast<Elem>(a), static_cast<Elem>(b));
    }
  }

  Elem add_slow(Elem a, Elem b) const {
    const std::size_t r = rank();
    int ta = tau(a);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < r; ++i) {
      int q = d_->moduli[i];
      int x = coord(a, i);
      int y = coord(b, i);
      int s = ta ? x - y : x + y;
      s %= q;
      if (s < 0) s += q;
      idx = idx * q + static_cast<std::size_t>(s);
    }
    if ((ta + tau(b)) % 2) idx += d_->base_order;
    return static_cast<Elem>(idx);
  }

  void require_dihedral() const {
    if (!is_dihedral()) throw InvalidArgument("operation needs a dihedral group, got " + descriptor());
  }

  static int parse_int(std::string_view s, std::string_view whole) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
      throw InvalidArgument("bad integer in group descriptor: " + std::string(whole));
    return v;
  }

  std::shared_ptr<const Data> d_;
};

/// The subgroup 2Gamma = {((x,y),0) : y even} of a dihedral group and its complement.
struct TwoGammaSplit {
  std::vector<Elem> subgroup;
  std::vector<Elem> coset;
};

inline TwoGammaSplit two_gamma(const Group& g) {
  if (!g.is_dihedral()) throw InvalidArgument("two_gamma needs a dihedral group, got " + g.descriptor());
  TwoGammaSplit out;
  for (Elem a : g.elements()) {
    if (g.tau(a) == 0 && g.coord(a, 1) % 2 == 0) out.subgroup.push_back(a);
    else out.coset.push_back(a);
  }
  return out;
}

/// rho(y) in {0, ..., 2^k n - 1} with 2 rho(y) = y, for even y in Z_{2^{k+1} n}.
inline int rho(const Group& g, long long y) {
  long long q = g.moduli().at(1);
  long long r = mod_floor(y, q);
  if (r % 2 != 0) throw InvalidArgument("rho: argument " + std::to_string(y) + " is odd");
  return static_cast<int>(r / 2);
}

}  // namespace hwp
