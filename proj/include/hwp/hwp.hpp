#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hwp/dihedral_rsm.hpp"
#include "hwp/ingredients.hpp"
#include "hwp/parallel.hpp"

namespace hwp {

struct HwpInstance {
  long long v = 0, M = 0, N = 0, alpha = 0, beta = 0;
};

inline std::string to_string(const HwpInstance& x) {
  return "HWP(" + std::to_string(x.v) + "; " + std::to_string(x.M) + ", " + std::to_string(x.N) + "; " +
         std::to_string(x.alpha) + ", " + std::to_string(x.beta) + ")";
}

/// Quantities of the construction after normalizing so that M = g m with m odd.
struct HwpParams {
  long long g = 0, m = 0, n = 0, k = 0, ell = 0, s = 0, t = 0, eps = 0;
  bool swapped = false;  // M, alpha exchanged with N, beta
  long long M = 0, N = 0, alpha = 0, beta = 0;
  long long block() const { return 4 * ell * eps; }
  long long blowup() const { return 4 * ell / g; }
};

enum class Admissibility { Admissible, NecessaryFail, KnownException };

struct AdmissibleResult {
  Admissibility kind = Admissibility::Admissible;
  std::string reason;
  /// M or N equals 3: admissible, but outside the proven range.
  bool outside_guarantee = false;
  HwpParams params;
};

namespace detail {
inline long long two_adic(long long x) {
  long long k = 0;
  while (x % 2 == 0) x /= 2, ++k;
  return k;
}
}  // namespace detail

inline AdmissibleResult check_admissible(const HwpInstance& x) {
  AdmissibleResult r;
  auto fail = [&](Admissibility kind, std::string why) {
    r.kind = kind;
    r.reason = std::move(why);
    return r;
  };
  if (x.M < 3 || x.N < 3) return fail(Admissibility::NecessaryFail, "cycle lengths must be at least 3");
  if (x.v < 3) return fail(Admissibility::NecessaryFail, "v must be at least 3");
  if (x.alpha < 0 || x.beta < 0) return fail(Admissibility::NecessaryFail, "alpha and beta must be non-negative");
  if (x.v % x.M != 0) return fail(Admissibility::NecessaryFail, std::to_string(x.M) + " does not divide " + std::to_string(x.v));
  if (x.v % x.N != 0) return fail(Admissibility::NecessaryFail, std::to_string(x.N) + " does not divide " + std::to_string(x.v));
  const long long degree = (x.v - 1) / 2;
  if (x.alpha + x.beta != degree)
    return fail(Admissibility::NecessaryFail, "alpha + beta must equal " + std::to_string(degree) + " for v = " + std::to_string(x.v));

  HwpParams& p = r.params;
  p.g = std::gcd(x.M, x.N);
  p.ell = std::lcm(x.M, x.N);
  const long long q = x.v / p.ell;
  if (x.v % p.ell != 0 || q % 4 != 0) return fail(Admissibility::KnownException, "4 does not divide v/l (l = " + std::to_string(p.ell) + ")");
  p.s = q / 4;
  if (p.s == 1 || p.s == 2) return fail(Admissibility::KnownException, "v/4l is in {1, 2} (l = " + std::to_string(p.ell) + ")");
  if (p.g <= 2) return fail(Admissibility::KnownException, "gcd(M, N) = " + std::to_string(p.g) + " is in {1, 2}");
  if (p.s == 4 && p.g % 2 == 1) return fail(Admissibility::KnownException, "v = 16l and gcd(M, N) = " + std::to_string(p.g) + " is odd");
  if (p.s == 6 && p.g == 3) return fail(Admissibility::KnownException, "v = 24l and gcd(M, N) = 3");

  p.swapped = (x.M / p.g) % 2 == 0;
  p.M = p.swapped ? x.N : x.M;
  p.N = p.swapped ? x.M : x.N;
  p.alpha = p.swapped ? x.beta : x.alpha;
  p.beta = p.swapped ? x.alpha : x.beta;
  p.m = p.M / p.g;
  p.k = detail::two_adic(p.N / p.g);
  p.n = (p.N / p.g) >> p.k;
  if (p.s >= 6 && p.s % 2 == 0) {
    p.t = p.s / 2;
    p.eps = 2;
  } else {
    p.t = p.s;
    p.eps = 1;
  }
  r.outside_guarantee = x.M == 3 || x.N == 3;
  return r;
}

// ---- C_g[w] solutions ---------------------------------------------------------------

/// C_g[w] realized as the Cayley graph C_g[Z_w, Z_w]; vertex i * w + j is clone j of column i.
inline Graph cycle_blowup_graph(std::size_t g, std::size_t w) {
  Group z = Group::cyclic({static_cast<int>(w)});
  return Graph::cayley(g, z, z.elements());
}

struct CgSolution {
  TwoFactorization factorization;  // on cycle_blowup_graph(g, w)
  std::string route;
};

inline FactorProfile two_length_profile(std::size_t len_a, std::size_t a, std::size_t len_b, std::size_t b) {
  FactorProfile p;
  if (a) p[len_a] += a;
  if (b) p[len_b] += b;
  return p;
}

/// HWP(C_g[2^{k+2}mn]; gm, 2^k gn; alpha, beta). Factors of length gm come first.
inline CgSolution solve_cg_blowup(std::size_t g, int k, int m, int n, long long alpha, long long beta, std::uint64_t seed = 0) {
  if (g < 3) throw InvalidArgument("solve_cg_blowup: need g >= 3");
  if (m < 1 || n < 1 || m % 2 == 0 || n % 2 == 0) throw InvalidArgument("solve_cg_blowup: m and n must be odd");
  if (k < 0 || k > 20) throw InvalidArgument("solve_cg_blowup: k out of range");
  const long long w = (4LL << k) * m * n;
  if (alpha < 0 || beta < 0 || alpha + beta != w)
    throw InvalidArgument("solve_cg_blowup: alpha + beta must equal 2^(k+2)mn = " + std::to_string(w));
  CgSolution out;
  const bool even = alpha % 2 == 0 && beta % 2 == 0;
  std::optional<DihedralRsm> dih;
  if (!even) dih = build_dihedral_rsm_traced({k, m, n, alpha, beta, g, seed});
  const RowSumMatrix rsm = even ? build_abelian_rsm(k + 1, m, n, k, alpha / 2, beta / 2, g, {seed, 20000, 12}) : dih->matrix;
  out.route = even ? "abelian" : "dihedral: " + dih->method;
  // Both groups have order w and the rows use S = Gamma, so C_g[Gamma, Gamma]
  // and C_g[Z_w, Z_w] share vertex numbering and edge set.
  Graph graph = cycle_blowup_graph(g, static_cast<std::size_t>(w));
  TwoFactorization f = rsm_to_factorization(rsm, rsm_graph(rsm));
  const std::size_t len_m = g * m;
  std::stable_partition(f.factors.begin(), f.factors.end(), [&](const TwoFactor& x) { return x.cycle_length() == len_m; });
  auto want = two_length_profile(len_m, alpha, g * (std::size_t{1} << k) * n, beta);
  if (auto v = verify_factorization(graph, f, want); !v) throw InternalError("solve_cg_blowup: " + v.diagnostic);
  out.factorization = std::move(f);
  return out;
}

// ---- decomposition of K_v and blow-up ---------------------------------------------

struct Decomposition {
  long long t = 0, eps = 0, block = 0;
  /// Part of vertex a: vertices p * block .. (p + 1) * block - 1 form block p.
  long long g0_edges() const { return t * block * (block - 1) / 2; }
  long long g1_edges() const { return t * (t - 1) / 2 * block * block; }
};

inline Decomposition decompose_Kv(long long v, long long ell, long long s) {
  if (s < 3) throw InvalidArgument("decompose_Kv: need s >= 3");
  if (ell < 1 || v != 4 * ell * s) throw InvalidArgument("decompose_Kv: need v = 4 l s");
  Decomposition d;
  if (s >= 6 && s % 2 == 0) {
    d.t = s / 2;
    d.eps = 2;
  } else {
    d.t = s;
    d.eps = 1;
  }
  d.block = 4 * ell * d.eps;
  return d;
}

/// One C_g[w] component of a blown factor: position i * w + j of C_g[w] is vertex at[i * w + j].
struct BlownComponent {
  std::vector<Vertex> at;
};

struct BlownFactorization {
  std::size_t g = 0, w = 0;
  std::vector<std::vector<BlownComponent>> factors;
};

/// Replaces each vertex x of K_t[z] by clones x * w + j of K_t[z w]; each
/// g-cycle becomes one C_g[w] component.
inline BlownFactorization blow_up_factorization(const Graph& equipartite, const TwoFactorization& f, std::size_t w) {
  if (w < 1) throw InvalidArgument("blow_up_factorization: need w >= 1");
  if (equipartite.kind() != GraphKind::Equipartite) throw InvalidArgument("blow_up_factorization: expects K_t[z]");
  BlownFactorization out;
  out.w = w;
  out.g = f.factors.empty() ? 0 : f.factors.front().cycle_length();
  if (auto v = verify_factorization(equipartite, f, detail::uniform_profile(f.factors.size(), out.g)); !v)
    throw InvalidArgument("blow_up_factorization: input is not a uniform factorization: " + v.diagnostic);
  for (const auto& factor : f.factors) {
    std::vector<BlownComponent> comps;
    for (const auto& cyc : factor.cycles) {
      BlownComponent c;
      c.at.reserve(cyc.size() * w);
      for (Vertex x : cyc)
        for (std::size_t j = 0; j < w; ++j) c.at.push_back(static_cast<Vertex>(x * w + j));
      comps.push_back(std::move(c));
    }
    out.factors.push_back(std::move(comps));
  }
  return out;
}

// ---- certificates ---------------------------------------------------------------

struct HwpCertificate {
  HwpInstance instance;
  std::vector<std::pair<Vertex, Vertex>> one_factor;  // empty for odd v
  TwoFactorization factors;
  std::vector<std::string> notes;  // ingredient sources and routes
};

inline Verdict verify_hwp_certificate(const HwpCertificate& c) {
  const HwpInstance& x = c.instance;
  if (x.v < 3 || x.M < 3 || x.N < 3) return Verdict::fail("instance parameters out of range");
  if (x.alpha < 0 || x.beta < 0 || x.alpha + x.beta != (x.v - 1) / 2)
    return Verdict::fail("alpha + beta must equal " + std::to_string((x.v - 1) / 2));
  const std::size_t v = static_cast<std::size_t>(x.v);
  const Graph kv = Graph::complete(v);
  std::size_t count_m = 0, count_n = 0;
  for (std::size_t i = 0; i < c.factors.factors.size(); ++i) {
    const auto& f = c.factors.factors[i];
    const std::size_t len = f.cycle_length();
    if (len != static_cast<std::size_t>(x.M) && len != static_cast<std::size_t>(x.N))
      return Verdict::fail("factor " + std::to_string(i) + " has cycle length " + std::to_string(len) + ", not M or N");
    if (auto ok = verify_two_factor(kv, f, len); !ok) return Verdict::fail("factor " + std::to_string(i) + ": " + ok.diagnostic);
    (len == static_cast<std::size_t>(x.M) ? count_m : count_n) += 1;
  }
  if (x.M == x.N) {
    if (count_m != static_cast<std::size_t>(x.alpha + x.beta))
      return Verdict::fail(std::to_string(count_m) + " factors, expected " + std::to_string(x.alpha + x.beta));
  } else if (count_m != static_cast<std::size_t>(x.alpha) || count_n != static_cast<std::size_t>(x.beta)) {
    return Verdict::fail("found " + std::to_string(count_m) + " C_" + std::to_string(x.M) + "-factors and " +
                         std::to_string(count_n) + " C_" + std::to_string(x.N) + "-factors, expected " +
                         std::to_string(x.alpha) + " and " + std::to_string(x.beta));
  }
  EdgeSet used(v);
  if (v % 2 == 0) {
    if (c.one_factor.size() != v / 2) return Verdict::fail("1-factor has " + std::to_string(c.one_factor.size()) + " edges, expected " + std::to_string(v / 2));
    std::vector<char> seen(v, 0);
    for (auto [a, b] : c.one_factor) {
      if (a >= v || b >= v || a == b) return Verdict::fail("1-factor has an invalid edge");
      if (seen[a] || seen[b]) return Verdict::fail("1-factor is not a matching at vertex " + std::to_string(seen[a] ? a : b));
      seen[a] = seen[b] = 1;
      used.insert(a, b);
    }
  } else if (!c.one_factor.empty()) {
    return Verdict::fail("odd v admits no 1-factor");
  }
  std::size_t repeats = 0;
  for (const auto& f : c.factors.factors)
    for (const auto& cyc : f.cycles)
      for (std::size_t i = 0; i < cyc.size(); ++i)
        if (!used.insert(cyc[i], cyc[(i + 1) % cyc.size()])) ++repeats;
  if (repeats) return Verdict::fail(std::to_string(repeats) + " edges are used more than once");
  if (used.size() != kv.size()) return Verdict::fail(std::to_string(kv.size() - used.size()) + " edges of K_v are not covered");
  return Verdict::pass();
}

inline Json certificate_to_json(const HwpCertificate& c) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["instance"] = {{"v", c.instance.v}, {"M", c.instance.M}, {"N", c.instance.N}, {"alpha", c.instance.alpha}, {"beta", c.instance.beta}};
  Json one = Json::array();
  for (auto [a, b] : c.one_factor) one.push_back({a, b});
  j["one_factor"] = one;
  j["notes"] = c.notes;
  j["factors"] = factors_to_json(c.factors);
  return j;
}

inline HwpCertificate certificate_from_json(const Json& j) {
  detail::check_schema(j, "certificate");
  try {
    HwpCertificate c;
    const Json& x = j.at("instance");
    c.instance = {x.at("v").get<long long>(), x.at("M").get<long long>(), x.at("N").get<long long>(),
                  x.at("alpha").get<long long>(), x.at("beta").get<long long>()};
    for (const auto& e : j.at("one_factor")) c.one_factor.emplace_back(e.at(0).get<Vertex>(), e.at(1).get<Vertex>());
    if (j.contains("notes")) c.notes = j["notes"].get<std::vector<std::string>>();
    c.factors = factors_from_json(j.at("factors"));
    return c;
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("certificate: malformed JSON: ") + e.what());
  }
}

// ---- solver ----------------------------------------------------------------------

enum class HwpStatus { Solved, NecessaryFail, KnownException, IngredientUnavailable };

struct HwpResult {
  HwpStatus status = HwpStatus::Solved;
  std::string message;
  std::optional<HwpCertificate> certificate;
};

struct SolveOptions {
  ProviderOptions providers;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

namespace detail {
inline std::string ingredient_name(const std::string& graph, long long c) {
  return "C_" + std::to_string(c) + "-factorization of " + graph;
}
}  // namespace detail

inline HwpResult solve_hwp(const HwpInstance& x, const SolveOptions& opt = {}) {
  HwpResult res;
  auto adm = check_admissible(x);
  if (adm.kind != Admissibility::Admissible) {
    res.status = adm.kind == Admissibility::NecessaryFail ? HwpStatus::NecessaryFail : HwpStatus::KnownException;
    res.message = adm.reason;
    return res;
  }
  const HwpParams& p = adm.params;
  const Decomposition d = decompose_Kv(x.v, p.ell, p.s);
  const long long half = 2 * p.ell * d.eps - 1;  // factors per G_0 block
  const long long alpha0 = p.alpha >= half ? half : 0, beta0 = half - alpha0;
  long long alpha1 = p.alpha - alpha0, beta1 = p.beta - beta0;
  if (alpha1 < 0 || beta1 < 0) throw InternalError("solve_hwp: negative remainder after the G_0 split");

  HwpCertificate cert;
  cert.instance = x;
  Rng seeds(opt.seed);
  ProviderOptions prov = opt.providers;

  // G_0: t disjoint copies of K_B - I.
  const long long c0 = alpha0 > 0 ? p.M : p.N;
  prov.seed = seeds.fork();
  Ingredient block = provide_uniform_factorization(static_cast<std::size_t>(d.block), static_cast<std::size_t>(c0), prov);
  if (!block) {
    res.status = HwpStatus::IngredientUnavailable;
    res.message = "ingredient unavailable: " + detail::ingredient_name("K_" + std::to_string(d.block) + " - I", c0);
    return res;
  }
  cert.notes.push_back(detail::ingredient_name("K_" + std::to_string(d.block) + " - I", c0) + ": " + block.source);

  // G_1 = K_t[g eps][w].
  const long long z = p.g * d.eps, w = p.blowup();
  prov.seed = seeds.fork();
  const std::string equi_name = detail::ingredient_name("K_" + std::to_string(d.t) + "[" + std::to_string(z) + "]", p.g);
  if (!equipartite_admissible(d.t, z, p.g) || equipartite_known_nonexistent(d.t, z, p.g)) {
    res.status = HwpStatus::IngredientUnavailable;
    res.message = "ingredient unavailable: no " + equi_name + " exists";
    return res;
  }
  Ingredient equi = provide_equipartite_factorization(d.t, z, p.g, prov);
  if (!equi) {
    res.status = HwpStatus::IngredientUnavailable;
    res.message = "ingredient unavailable: " + equi_name;
    return res;
  }
  cert.notes.push_back(equi_name + ": " + equi.source);
  BlownFactorization blown = blow_up_factorization(Graph::equipartite(d.t, z), equi.factorization, w);

  // Greedy split of (alpha1, beta1) over blown factors, M-budget first.
  std::vector<long long> split_of(blown.factors.size());
  for (auto& a : split_of) {
    a = std::min(w, alpha1);
    alpha1 -= a;
    beta1 -= w - a;
  }
  if (alpha1 != 0 || beta1 != 0) throw InternalError("solve_hwp: blown factor budget does not match (alpha1, beta1)");
  std::vector<long long> distinct = split_of;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<CgSolution> solved(distinct.size());
  const std::uint64_t cg_seed = seeds.fork();
  parallel_for(distinct.size(), opt.jobs, [&](std::size_t i) {
    solved[i] = solve_cg_blowup(static_cast<std::size_t>(p.g), static_cast<int>(p.k), static_cast<int>(p.m),
                                static_cast<int>(p.n), distinct[i], w - distinct[i], cg_seed + static_cast<std::uint64_t>(distinct[i]));
  });
  for (std::size_t i = 0; i < distinct.size(); ++i)
    cert.notes.push_back("C_" + std::to_string(p.g) + "[" + std::to_string(w) + "] with (" + std::to_string(distinct[i]) +
                         ", " + std::to_string(w - distinct[i]) + "): " + solved[i].route);

  // Assemble. Block b of G_0 occupies vertices b*B .. b*B + B - 1, matching K_t[B].
  for (const auto& f : block.factorization.factors) {
    TwoFactor global;
    for (long long b = 0; b < d.t; ++b)
      for (const auto& cyc : f.cycles) {
        Cycle moved;
        for (Vertex a : cyc) moved.push_back(static_cast<Vertex>(a + b * d.block));
        global.cycles.push_back(std::move(moved));
      }
    cert.factors.factors.push_back(std::move(global));
  }
  for (std::size_t f = 0; f < blown.factors.size(); ++f) {
    const auto idx = std::lower_bound(distinct.begin(), distinct.end(), split_of[f]) - distinct.begin();
    for (const auto& local : solved[idx].factorization.factors) {
      TwoFactor global;
      for (const auto& comp : blown.factors[f])
        for (const auto& cyc : local.cycles) {
          Cycle moved;
          for (Vertex a : cyc) moved.push_back(comp.at[a]);
          global.cycles.push_back(std::move(moved));
        }
      cert.factors.factors.push_back(std::move(global));
    }
  }
  for (Vertex a = 0; a + 1 < x.v; a += 2) cert.one_factor.emplace_back(a, a + 1);
  if (adm.outside_guarantee) cert.notes.push_back("M or N equals 3: outside the proven range");

  if (auto v = verify_hwp_certificate(cert); !v) throw InternalError("solve_hwp: assembled certificate fails: " + v.diagnostic);
  res.certificate = std::move(cert);
  return res;
}

}  // namespace hwp
