#pragma once

// Uniform 2-factorizations of K_v^* and K_t[z] used as building blocks.
// Strategies, in order: explicit construction, certificate import, rotational
// starter search, raw backtracking. Every result is verified before return.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hwp/json_io.hpp"

namespace hwp {

enum class IngredientStatus { Found, Nonexistent, NotFound };

struct Ingredient {
  IngredientStatus status = IngredientStatus::NotFound;
  TwoFactorization factorization;
  std::string source;                 // "explicit", "import:<file>", "rotational search", "backtracking"
  std::vector<std::string> rejected;  // imported files that failed verification
  explicit operator bool() const { return status == IngredientStatus::Found; }
};

struct ProviderOptions {
  std::vector<std::string> import_dirs;
  std::uint64_t seed = 0;
  std::size_t nodes = 200000;  // per restart
  int restarts = 40;
  bool search = true;
  bool explicit_constructions = true;
};

namespace detail {

inline FactorProfile uniform_profile(std::size_t count, std::size_t c) { return count ? FactorProfile{{c, count}} : FactorProfile{}; }

/// Round-robin 1-factorization of K_p, p even: factor r pairs (inf, r) and (r+i, r-i).
inline std::vector<std::vector<std::pair<Vertex, Vertex>>> round_robin(std::size_t p) {
  const std::size_t q = p - 1;
  std::vector<std::vector<std::pair<Vertex, Vertex>>> out(q);
  for (std::size_t r = 0; r < q; ++r) {
    out[r].push_back({static_cast<Vertex>(q), static_cast<Vertex>(r)});
    for (std::size_t i = 1; i <= q / 2; ++i)
      out[r].push_back({static_cast<Vertex>((r + i) % q), static_cast<Vertex>((r + q - i) % q)});
  }
  return out;
}

/// C_4-factorization of K_v - I for 4 | v, from K_v - I = K_{v/2}[2].
inline TwoFactorization explicit_c4(std::size_t v) {
  TwoFactorization f;
  for (const auto& matching : round_robin(v / 2)) {
    TwoFactor x;
    for (auto [a, b] : matching) x.cycles.push_back({2 * a, 2 * b, 2 * a + 1, 2 * b + 1});
    f.factors.push_back(std::move(x));
  }
  return f;
}

/// Base-factor search for K_{2h+1} or K_{2h+2} - I, h odd, under the rotation
/// of Z_h acting on Z_h x {0,1} and fixing one or two points at infinity.
/// Every edge orbit has length h, so a base factor meeting each orbit once
/// develops into all h factors.
class RotationalSearch {
 public:
  RotationalSearch(std::size_t v, std::size_t c, std::uint64_t seed, std::size_t nodes)
      : v_(v), c_(c), rng_(seed), limit_(nodes) {
    infs_ = v % 2 == 1 ? 1 : 2;
    h_ = (v - infs_) / 2;
    half_ = (h_ - 1) / 2;
    mixed0_ = infs_ == 1 ? 0 : 1;  // for even v the difference-0 mixed orbit is I
    orbits_ = 2 * half_ + (h_ - mixed0_) + 2 * infs_;
    used_.assign(orbits_, 0);
    covered_.assign(v, 0);
  }

  static bool applicable(std::size_t v, std::size_t c) {
    if (v < 5 || c < 3 || v % c != 0) return false;
    std::size_t h = (v - (v % 2 == 1 ? 1 : 2)) / 2;
    return h % 2 == 1 && h >= 3;
  }

  std::optional<TwoFactorization> run() {
    if (!dfs_cycle()) return std::nullopt;
    TwoFactorization f;
    for (std::size_t i = 0; i < h_; ++i) {
      TwoFactor x;
      for (const auto& cyc : base_) {
        Cycle moved;
        for (Vertex a : cyc) moved.push_back(shift(a, i));
        x.cycles.push_back(std::move(moved));
      }
      f.factors.push_back(std::move(x));
    }
    return f;
  }

 private:
  bool infinite(Vertex a) const { return a >= 2 * h_; }
  Vertex shift(Vertex a, std::size_t i) const {
    if (infinite(a)) return a;
    return static_cast<Vertex>(2 * ((a / 2 + i) % h_) + a % 2);
  }
  /// Orbit index of edge {a, b}, or -1 for edges outside the graph.
  long orbit(Vertex a, Vertex b) const {
    if (infinite(a) && infinite(b)) return -1;
    if (infinite(b)) std::swap(a, b);
    if (infinite(a)) return static_cast<long>(2 * half_ + (h_ - mixed0_) + 2 * (a - 2 * h_) + b % 2);
    std::size_t x = a / 2, y = b / 2;
    if (a % 2 == b % 2) {
      std::size_t d = (y + h_ - x) % h_;
      if (d == 0) return -1;
      d = std::min(d, h_ - d);
      return static_cast<long>((a % 2) * half_ + d - 1);
    }
    if (a % 2 == 1) std::swap(x, y);
    std::size_t d = (y + h_ - x) % h_;
    if (d < mixed0_) return -1;
    return static_cast<long>(2 * half_ + d - mixed0_);
  }

  bool dfs_cycle() {
    Vertex start = 0;
    while (start < v_ && covered_[start]) ++start;
    if (start == v_) return true;
    covered_[start] = 1;
    path_.assign(1, start);
    if (extend()) return true;
    covered_[start] = 0;
    return false;
  }

  bool extend() {
    if (++nodes_ > limit_) return false;
    const Vertex last = path_.back();
    if (path_.size() == c_) {
      long o = orbit(last, path_.front());
      if (o < 0 || used_[o]) return false;
      used_[o] = 1;
      base_.push_back(path_);
      auto saved = path_;
      if (dfs_cycle()) return true;
      path_ = saved;
      base_.pop_back();
      used_[o] = 0;
      return false;
    }
    std::vector<Vertex> next;
    for (Vertex b = 0; b < v_; ++b)
      if (!covered_[b] && b > path_.front()) {
        long o = orbit(last, b);
        if (o >= 0 && !used_[o]) next.push_back(b);
      }
    rng_.shuffle(next);
    for (Vertex b : next) {
      long o = orbit(last, b);
      used_[o] = 1;
      covered_[b] = 1;
      path_.push_back(b);
      if (extend()) return true;
      path_.pop_back();
      covered_[b] = 0;
      used_[o] = 0;
      if (nodes_ > limit_) return false;
    }
    return false;
  }

  std::size_t v_, c_, infs_ = 0, h_ = 0, half_ = 0, mixed0_ = 0, orbits_ = 0;
  Rng rng_;
  std::size_t limit_, nodes_ = 0;
  std::vector<char> used_, covered_;
  Cycle path_;
  std::vector<Cycle> base_;
};

/// Exhaustive backtracking for a C_c-factorization of an arbitrary regular
/// graph: fills factor after factor, cycle after cycle, each cycle starting at
/// the least uncovered vertex.
class BacktrackSearch {
 public:
  BacktrackSearch(const Graph& graph, std::size_t c, std::uint64_t seed, std::size_t nodes)
      : n_(graph.order()), c_(c), rng_(seed), limit_(nodes) {
    adj_.assign(n_ * n_, 0);
    for (Vertex a = 0; a < n_; ++a)
      for (Vertex b = 0; b < n_; ++b)
        if (graph.has_edge(a, b)) adj_[a * n_ + b] = 1;
    std::size_t deg = n_ ? graph.degree_target() : 0;
    factors_ = deg / 2;
    covered_.assign(n_, 0);
  }

  std::optional<TwoFactorization> run() {
    if (n_ % c_ != 0) return std::nullopt;
    current_.factors.assign(factors_, {});
    if (!next_cycle(0)) return std::nullopt;
    return current_;
  }

 private:
  bool edge(Vertex a, Vertex b) const { return adj_[a * n_ + b] != 0; }
  void set(Vertex a, Vertex b, char on) { adj_[a * n_ + b] = adj_[b * n_ + a] = on; }

  bool next_cycle(std::size_t f) {
    Vertex start = 0;
    while (start < n_ && covered_[start]) ++start;
    if (start == n_) {
      if (f + 1 == factors_) return true;
      std::vector<char> saved(n_, 0);
      std::swap(saved, covered_);
      if (next_cycle(f + 1)) return true;
      std::swap(saved, covered_);
      return false;
    }
    covered_[start] = 1;
    Cycle path{start};
    if (extend(f, path)) return true;
    covered_[start] = 0;
    return false;
  }

  bool extend(std::size_t f, Cycle& path) {
    if (++nodes_ > limit_) return false;
    const Vertex last = path.back();
    if (path.size() == c_) {
      if (!edge(last, path.front())) return false;
      set(last, path.front(), 0);
      current_.factors[f].cycles.push_back(path);
      if (next_cycle(f)) return true;
      current_.factors[f].cycles.pop_back();
      set(last, path.front(), 1);
      return false;
    }
    std::vector<Vertex> next;
    for (Vertex b = path.front() + 1; b < n_; ++b)
      if (!covered_[b] && edge(last, b)) next.push_back(b);
    rng_.shuffle(next);
    for (Vertex b : next) {
      set(last, b, 0);
      covered_[b] = 1;
      path.push_back(b);
      if (extend(f, path)) return true;
      path.pop_back();
      covered_[b] = 0;
      set(last, b, 1);
      if (nodes_ > limit_) return false;
    }
    return false;
  }

  std::size_t n_, c_, factors_ = 0;
  Rng rng_;
  std::size_t limit_, nodes_ = 0;
  std::vector<char> adj_, covered_;
  TwoFactorization current_;
};

/// Scans the import directories for a factorization certificate of `graph`
/// with the expected profile.
inline std::optional<TwoFactorization> import_factorization(const Graph& graph, const FactorProfile& want,
                                                            const std::vector<std::string>& dirs, Ingredient& log) {
  namespace fs = std::filesystem;
  const std::string desc = graph.descriptor();
  for (const auto& dir : dirs) {
    std::error_code ec;
    if (dir.empty() || !fs::is_directory(dir, ec)) continue;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir, ec))
      if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
      FactorizationFile file;
      try {
        file = factorization_from_json(read_json_file(p.string()));
      } catch (const InvalidArgument& e) {
        log.rejected.push_back(p.string() + ": " + e.what());
        continue;
      }
      if (file.graph != desc || profile_of(file.factorization) != want) continue;
      if (auto v = verify_factorization(graph, file.factorization, want); !v) {
        log.rejected.push_back(p.string() + ": " + v.diagnostic);
        continue;
      }
      log.source = "import:" + p.filename().string();
      return file.factorization;
    }
  }
  return std::nullopt;
}

inline Ingredient finish(Ingredient out, const Graph& graph, TwoFactorization f, const FactorProfile& want,
                         std::string source) {
  if (auto v = verify_factorization(graph, f, want); !v) throw InternalError(source + " produced an invalid factorization: " + v.diagnostic);
  out.status = IngredientStatus::Found;
  out.factorization = std::move(f);
  out.source = std::move(source);
  return out;
}

inline Ingredient backtrack(Ingredient out, const Graph& graph, std::size_t c, const FactorProfile& want,
                            const ProviderOptions& opt) {
  Rng seeds(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int r = 0; r < opt.restarts; ++r) {
    BacktrackSearch s(graph, c, seeds.fork(), opt.nodes);
    if (auto f = s.run()) return finish(std::move(out), graph, std::move(*f), want, "backtracking");
  }
  out.status = IngredientStatus::NotFound;
  return out;
}

}  // namespace detail

/// True for the pairs (c, v) with c | v and no C_c-factorization of K_v^*.
inline bool uniform_known_nonexistent(std::size_t v, std::size_t c) { return c == 3 && (v == 6 || v == 12); }

/// C_c-factorization of K_v (v odd) or K_v - I (v even, I = {2i, 2i+1}).
inline Ingredient provide_uniform_factorization(std::size_t v, std::size_t c, const ProviderOptions& opt = {}) {
  if (c < 3 || v < 3 || v % c != 0)
    throw InvalidArgument("uniform factorization needs c >= 3 and c | v, got v=" + std::to_string(v) + ", c=" + std::to_string(c));
  Ingredient out;
  if (uniform_known_nonexistent(v, c)) {
    out.status = IngredientStatus::Nonexistent;
    out.source = "known nonexistence";
    return out;
  }
  const Graph graph = Graph::complete_star(v);
  const FactorProfile want = detail::uniform_profile((v - 1) / 2, c);
  if (opt.explicit_constructions && c == 4 && v % 4 == 0)
    return detail::finish(std::move(out), graph, detail::explicit_c4(v), want, "explicit");
  if (auto f = detail::import_factorization(graph, want, opt.import_dirs, out))
    return detail::finish(std::move(out), graph, std::move(*f), want, out.source);
  if (!opt.search) return out;
  if (detail::RotationalSearch::applicable(v, c)) {
    Rng seeds(opt.seed);
    for (int r = 0; r < opt.restarts; ++r) {
      detail::RotationalSearch s(v, c, seeds.fork(), opt.nodes);
      if (auto f = s.run()) return detail::finish(std::move(out), graph, std::move(*f), want, "rotational search");
    }
  }
  return detail::backtrack(std::move(out), graph, c, want, opt);
}

/// Necessary conditions for a C_c-factorization of K_t[z], ignoring the four exceptions.
inline bool equipartite_admissible(std::size_t t, std::size_t z, std::size_t c) {
  return c >= 3 && t >= 2 && z >= 1 && (t * z) % c == 0 && ((t - 1) * z) % 2 == 0 && (t != 2 || c % 2 == 0);
}

inline bool equipartite_known_nonexistent(std::size_t t, std::size_t z, std::size_t c) {
  return (c == 3 && t == 3 && z == 2) || (c == 3 && t == 6 && z == 2) || (c == 3 && t == 3 && z == 6) ||
         (c == 6 && t == 2 && z == 6);
}

/// C_c-factorization of K_t[z]; (t-1)z/2 factors.
inline Ingredient provide_equipartite_factorization(std::size_t t, std::size_t z, std::size_t c,
                                                   const ProviderOptions& opt = {}) {
  if (!equipartite_admissible(t, z, c))
    throw InvalidArgument("no C_" + std::to_string(c) + "-factorization of K_" + std::to_string(t) + "[" +
                          std::to_string(z) + "] can exist: need c | tz, (t-1)z even, c even when t = 2");
  Ingredient out;
  if (equipartite_known_nonexistent(t, z, c)) {
    out.status = IngredientStatus::Nonexistent;
    out.source = "known nonexistence";
    return out;
  }
  const Graph graph = Graph::equipartite(t, z);
  const FactorProfile want = detail::uniform_profile((t - 1) * z / 2, c);
  if (auto f = detail::import_factorization(graph, want, opt.import_dirs, out))
    return detail::finish(std::move(out), graph, std::move(*f), want, out.source);
  if (!opt.search) return out;
  return detail::backtrack(std::move(out), graph, c, want, opt);
}

}  // namespace hwp
