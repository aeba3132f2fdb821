// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <sys/wait.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>

#include "hwp/hwp.hpp"
#include "hwp/perms.hpp"

using namespace hwp;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;
  std::mutex mu;

  void fail(const std::string& why) {
    std::lock_guard<std::mutex> lock(mu);
    pass = false;
    if (failures.size() < 8) failures.push_back(why);
  }
};

std::size_t jobs() {
  unsigned h = std::thread::hardware_concurrency();
  return h ? h : 4;
}

// Independent check of a factorization of a Cayley graph: every factor is a
// union of cycles of the declared length through all vertices, and the cycles
// of all factors use each edge of the graph exactly once.
std::string check_factorization(const Graph& graph, const TwoFactorization& f, const std::vector<std::size_t>& lengths) {
  const std::size_t v = graph.order();
  if (f.factors.size() != lengths.size()) return "factor count " + std::to_string(f.factors.size());
  std::vector<char> used(v * v, 0);
  std::size_t edges = 0;
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    std::vector<int> deg(v, 0);
    for (const auto& cyc : f.factors[i].cycles) {
      if (cyc.size() != lengths[i]) return "factor " + std::to_string(i) + " has a cycle of length " + std::to_string(cyc.size());
      for (std::size_t j = 0; j < cyc.size(); ++j) {
        Vertex a = cyc[j], b = cyc[(j + 1) % cyc.size()];
        if (a >= v || b >= v || !graph.has_edge(a, b)) return "non-edge in factor " + std::to_string(i);
        if (used[std::min(a, b) * v + std::max(a, b)]++) return "repeated edge in factor " + std::to_string(i);
        ++edges;
        ++deg[a];
        ++deg[b];
      }
    }
    for (int d : deg)
      if (d != 2) return "factor " + std::to_string(i) + " is not 2-regular";
  }
  if (edges != graph.size()) return std::to_string(graph.size() - edges) + " edges uncovered";
  return {};
}

std::vector<std::size_t> expected_lengths(const RowSumMatrix& m) {
  std::vector<std::size_t> out;
  for (const auto& r : m.rows) {
    // Order of the row sum, by repeated addition.
    Elem s = m.group.zero();
    for (Elem e : r) s = m.group.add(s, e);
    std::size_t ord = 1;
    for (Elem x = s; x != m.group.zero(); x = m.group.add(x, s)) ++ord;
    out.push_back(m.g * ord);
  }
  return out;
}

struct GridPoint {
  std::size_t g;
  int k, m, n;
  long long alpha, beta;
};

std::vector<GridPoint> dihedral_grid() {
  std::vector<GridPoint> out;
  for (std::size_t g : {3u, 4u, 5u})
    for (int k : {0, 1, 2})
      for (int m : {1, 3})
        for (int n : {1, 3}) {
          const long long total = (4LL << k) * m * n;
          for (long long a = 0; a <= total; ++a) out.push_back({g, k, m, n, a, total - a});
        }
  return out;
}

bool dihedral_exception(int k, long long alpha, long long beta) {
  if (k >= 2 && beta == 0) return true;
  return k == 1 && (alpha == 0 || alpha == 2 || alpha == 4 || beta == 0 || beta == 2 || beta == 4);
}

OrderList two_orders(long long a, long long oa, long long b, long long ob) {
  return OrderList{{static_cast<std::size_t>(a), static_cast<std::size_t>(oa)}, {static_cast<std::size_t>(b), static_cast<std::size_t>(ob)}};
}

std::vector<RowSumMatrix> produced;  // matrices from criteria 1 and 2, reused by criterion 3
std::mutex produced_mu;

void keep(RowSumMatrix m) {
  std::lock_guard<std::mutex> lock(produced_mu);
  produced.push_back(std::move(m));
}

// ---- criteria --------------------------------------------------------------------

void dihedral_rsm_grid(Outcome& o) {
  auto grid = dihedral_grid();
  std::atomic<std::size_t> built{0}, skipped{0};
  auto t0 = Clock::now();
  parallel_for(grid.size(), jobs(), [&](std::size_t i) {
    const auto& p = grid[i];
    RsmSpec s{p.k, p.m, p.n, p.alpha, p.beta, p.g, 0};
    std::ostringstream tag;
    tag << "g=" << p.g << " k=" << p.k << " m=" << p.m << " n=" << p.n << " alpha=" << p.alpha;
    if (dihedral_exception(p.k, p.alpha, p.beta)) {
      try {
        build_dihedral_rsm(s);
        o.fail(tag.str() + ": exception case did not report Unsupported");
      } catch (const Unsupported&) {
        ++skipped;
      }
      return;
    }
    try {
      auto m = build_dihedral_rsm(s);
      if (auto v = verify_rsm(m, two_orders(p.alpha, p.m, p.beta, (1LL << p.k) * p.n)); !v) {
        o.fail(tag.str() + ": " + v.diagnostic);
        return;
      }
      ++built;
      keep(std::move(m));
    } catch (const std::exception& e) {
      o.fail(tag.str() + ": " + e.what());
    }
  });
  const double secs = since(t0);
  if (secs >= 900) o.fail("runtime " + std::to_string(secs) + " s");
  o.detail = std::to_string(built) + " built, " + std::to_string(skipped) + " exception cases, " + std::to_string(secs) + " s";
}

void abelian_rsm_grid(Outcome& o) {
  struct P {
    int ell, m, n, k;
    long long gamma;
    std::size_t g;
  };
  std::vector<P> grid;
  const std::vector<std::pair<int, int>> mns = {{1, 1}, {3, 1}, {1, 3}, {5, 1}, {1, 5}, {3, 3}, {9, 1}, {1, 9}, {5, 3}, {3, 5}, {15, 1}, {1, 15}};
  for (int ell : {1, 2, 3})
    for (auto [m, n] : mns)
      for (int k = 0; k <= ell; ++k) {
        const long long total = (1LL << ell) * m * n;
        std::set<long long> gammas = {0, 1, total / 3, total / 2, total - 1, total};
        for (long long g = 0; g <= total; g += std::max<long long>(1, total / 7)) gammas.insert(g);
        for (long long gamma : gammas)
          for (std::size_t g : {3u, 4u}) grid.push_back({ell, m, n, k, gamma, g});
      }
  std::atomic<std::size_t> ok{0};
  parallel_for(grid.size(), jobs(), [&](std::size_t i) {
    const auto& p = grid[i];
    const long long total = (1LL << p.ell) * p.m * p.n;
    std::ostringstream tag;
    tag << "ell=" << p.ell << " m=" << p.m << " n=" << p.n << " k=" << p.k << " gamma=" << p.gamma << " g=" << p.g;
    try {
      auto m = build_abelian_rsm(p.ell, p.m, p.n, p.k, p.gamma, total - p.gamma, p.g, {static_cast<std::uint64_t>(i), 20000, 12});
      if (auto v = verify_rsm(m, two_orders(2 * p.gamma, p.m, 2 * (total - p.gamma), (1LL << p.k) * p.n)); !v) {
        o.fail(tag.str() + ": " + v.diagnostic);
        return;
      }
      ++ok;
      keep(std::move(m));
    } catch (const std::exception& e) {
      o.fail(tag.str() + ": " + e.what());
    }
  });
  o.detail = std::to_string(ok) + "/" + std::to_string(grid.size()) + " verified";
}

void factorization_contract(Outcome& o) {
  std::atomic<std::size_t> ok{0};
  parallel_for(produced.size(), jobs(), [&](std::size_t i) {
    const RowSumMatrix& m = produced[i];
    try {
      Graph graph = rsm_graph(m);
      TwoFactorization f = rsm_to_factorization(m, graph);
      const auto lengths = expected_lengths(m);
      if (auto v = verify_factorization(graph, f, rsm_profile(m)); !v) return o.fail(m.group.descriptor() + ": " + v.diagnostic);
      if (auto why = check_factorization(graph, f, lengths); !why.empty()) return o.fail(m.group.descriptor() + ": " + why);
      auto file = factorization_from_json(Json::parse(factorization_to_json(graph, f).dump()));
      Graph reparsed = Graph::parse(file.graph);
      if (auto why = check_factorization(reparsed, file.factorization, lengths); !why.empty())
        return o.fail(m.group.descriptor() + " after JSON: " + why);
      ++ok;
    } catch (const std::exception& e) {
      o.fail(m.group.descriptor() + ": " + e.what());
    }
  });
  o.detail = std::to_string(ok) + "/" + std::to_string(produced.size()) + " factorizations, JSON re-verified";
  if (produced.empty()) o.fail("no matrices from criteria 1 and 2");
}

void blowup_grid(Outcome& o) {
  auto grid = dihedral_grid();
  std::atomic<std::size_t> ok{0};
  auto t0 = Clock::now();
  parallel_for(grid.size(), jobs(), [&](std::size_t i) {
    const auto& p = grid[i];
    std::ostringstream tag;
    tag << "g=" << p.g << " k=" << p.k << " m=" << p.m << " n=" << p.n << " alpha=" << p.alpha;
    try {
      auto s = solve_cg_blowup(p.g, p.k, p.m, p.n, p.alpha, p.beta);
      const std::size_t la = p.g * p.m, lb = p.g * (std::size_t{1} << p.k) * p.n;
      std::vector<std::size_t> lengths;
      for (long long a = 0; a < p.alpha; ++a) lengths.push_back(la);
      for (long long b = 0; b < p.beta; ++b) lengths.push_back(lb);
      Graph graph = cycle_blowup_graph(p.g, static_cast<std::size_t>((4LL << p.k) * p.m * p.n));
      if (auto why = check_factorization(graph, s.factorization, lengths); !why.empty()) return o.fail(tag.str() + ": " + why);
      ++ok;
    } catch (const std::exception& e) {
      o.fail(tag.str() + ": " + e.what());
    }
  });
  o.detail = std::to_string(ok) + "/" + std::to_string(grid.size()) + " splits, " + std::to_string(since(t0)) + " s";
}

// Every abelian group of order q, as a product of prime-power cyclic groups.
std::vector<std::vector<int>> abelian_types(int q) {
  std::vector<std::vector<std::vector<int>>> per_prime;
  for (int p = 2, r = q; r > 1; ++p) {
    int e = 0;
    while (r % p == 0) r /= p, ++e;
    if (!e) continue;
    std::vector<std::vector<int>> parts;
    std::function<void(int, int, std::vector<int>&)> rec = [&](int left, int cap, std::vector<int>& cur) {
      if (left == 0) {
        std::vector<int> mods;
        for (int x : cur) {
          int pw = 1;
          for (int i = 0; i < x; ++i) pw *= p;
          mods.push_back(pw);
        }
        parts.push_back(mods);
        return;
      }
      for (int x = std::min(left, cap); x >= 1; --x) {
        cur.push_back(x);
        rec(left - x, x, cur);
        cur.pop_back();
      }
    };
    std::vector<int> cur;
    rec(e, e, cur);
    per_prime.push_back(parts);
  }
  std::vector<std::vector<int>> out = {{}};
  for (const auto& parts : per_prime) {
    std::vector<std::vector<int>> next;
    for (const auto& a : out)
      for (const auto& b : parts) {
        auto c = a;
        c.insert(c.end(), b.begin(), b.end());
        next.push_back(c);
      }
    out = next;
  }
  for (auto& mods : out)
    if (mods.empty()) mods = {1};
  return out;
}

void hall_solver(Outcome& o) {
  std::vector<Group> groups;
  for (int q = 1; q <= 16; ++q)
    for (const auto& mods : abelian_types(q)) groups.push_back(Group::cyclic(mods));
  if (groups.size() != 25) o.fail("expected 25 abelian groups of order <= 16, got " + std::to_string(groups.size()));
  std::atomic<std::size_t> solved{0};
  parallel_for(groups.size(), jobs(), [&](std::size_t gi) {
    const Group& g = groups[gi];
    Rng rng(1000 + gi);
    for (int t = 0; t < 200; ++t) {
      std::vector<Elem> items(g.order());
      Elem s = g.zero();
      for (std::size_t i = 0; i + 1 < items.size(); ++i) {
        items[i] = static_cast<Elem>(rng.below(g.order()));
        s = g.add(s, items[i]);
      }
      items.back() = g.neg(s);
      VList d(g, items);
      try {
        auto phi = hall_delta_permutation(g, d, {rng.next()});
        // Differences recomputed here rather than through the library.
        std::vector<Elem> got;
        for (Elem a : g.elements()) got.push_back(g.sub(phi(a), a));
        if (!(VList(g, got) == d) || !verify_delta_permutation(phi, d)) return o.fail(g.descriptor() + ": wrong differences for " + d.to_string());
        ++solved;
      } catch (const std::exception& e) {
        return o.fail(g.descriptor() + " " + d.to_string() + ": " + e.what());
      }
    }
  });
  std::size_t special = 0;
  for (int m : {1, 3, 5})
    for (int n = 1; n <= 7; ++n) {
      auto sp = special_perm_1(m, n);
      const Group& g = sp.group;
      Elem fixed2 = g.make({-(m - 1) / 2, (n + 1) / 2 + (m - 1) / 2 * n});
      bool ok = sp.perm(g.zero()) == g.zero() && sp.perm(fixed2) == fixed2 && sp.perm.fixed_points().size() == 2;
      for (Elem a : g.elements()) ok = ok && sp.perm(sp.perm(a)) == a;
      std::vector<Elem> want = {g.zero()};
      for (Elem e : g.elements())
        if (e != g.make({0, n})) want.push_back(e);
      ok = ok && verify_delta_permutation(sp.perm, VList(g, want));
      if (!ok) o.fail("special_perm_1(" + std::to_string(m) + ", " + std::to_string(n) + ")");
      ++special;
      if (n < 3 || n % 2 == 0) continue;
      auto s2 = special_perm_2(m, n);
      const Group& h = s2.group;
      VList want2(h);
      want2.add(h.make({1, 0}), static_cast<std::size_t>(2 * m * n - 6));
      want2.add(h.make({2, 0}), 3);
      want2.add(h.make({0, 2}));
      want2.add(h.make({0, n - 2}));
      want2.add(h.make({0, n}));
      if (s2.perm(h.zero()) != h.make({0, n}) || s2.perm(h.make({0, n})) != h.make({0, n + 2}) || !verify_delta_permutation(s2.perm, want2))
        o.fail("special_perm_2(" + std::to_string(m) + ", " + std::to_string(n) + ")");
      ++special;
    }
  o.detail = std::to_string(groups.size()) + " groups, " + std::to_string(solved) + " lists solved, " + std::to_string(special) + " special permutations";
}

bool brute_force_complete_mapping(const Group& g) {
  std::vector<Elem> img = g.elements();
  do {
    std::vector<char> seen(g.order(), 0);
    bool ok = true;
    for (Elem x = 0; x < g.order() && ok; ++x) {
      Elem y = g.add(x, img[x]);
      ok = !seen[y];
      seen[y] = 1;
    }
    if (ok) return true;
  } while (std::next_permutation(img.begin(), img.end()));
  return false;
}

void complete_mappings(Outcome& o) {
  std::size_t checked = 0;
  for (int q = 1; q <= 15; q += 2) {
    Group z = Group::cyclic({q});
    auto r = find_complete_mapping(z);
    if (r.status != MappingStatus::Found || !(*r.mapping == Permutation(z)) || !is_complete_mapping(*r.mapping)) o.fail("Z_" + std::to_string(q));
    ++checked;
  }
  for (int q = 1; q <= 4; ++q) {
    Group z = Group::cyclic({2 * q});
    if (find_complete_mapping(z).status != MappingStatus::Nonexistent || brute_force_complete_mapping(z)) o.fail("Z_" + std::to_string(2 * q));
    ++checked;
  }
  // Dih(Z_m x Z_{2^{k+1} n}) covers every dihedral group of order 4r; those of order 2 * odd have cyclic Sylow-2.
  for (auto [m, n, k] : std::vector<std::tuple<int, int, int>>{{1, 1, 0}, {1, 1, 1}, {3, 1, 0}, {1, 1, 2}, {5, 1, 0}, {3, 1, 1}, {7, 1, 0}, {1, 1, 3}}) {
    Group d = Group::dihedral(m, n, k);
    auto r = find_complete_mapping(d, {7, 200000, 20});
    if (r.status != MappingStatus::Found || !is_complete_mapping(*r.mapping)) o.fail(d.descriptor());
    if (d.order() <= 8 && !brute_force_complete_mapping(d)) o.fail(d.descriptor() + " brute force");
    ++checked;
  }
  o.detail = std::to_string(checked) + " groups";
}

int run_cli(const std::string& args, std::string& out) {
  std::string cmd = std::string(HWP_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return -1;
  char buf[4096];
  out.clear();
  while (std::size_t got = std::fread(buf, 1, sizeof buf, p)) out.append(buf, got);
  int status = pclose(p);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

SolveOptions fixture_options() {
  SolveOptions opt;
  opt.providers.import_dirs = {std::string(HWP_SOURCE_DIR) + "/data/ingredients"};
  opt.jobs = jobs();
  return opt;
}

void end_to_end(Outcome& o) {
  std::ostringstream detail;
  for (auto [a, b] : std::vector<std::pair<long long, long long>>{{46, 1}, {1, 46}, {23, 24}, {24, 23}}) {
    HwpInstance x{96, 4, 8, a, b};
    auto t0 = Clock::now();
    auto r = solve_hwp(x, fixture_options());
    const double secs = since(t0);
    if (r.status != HwpStatus::Solved) {
      o.fail(to_string(x) + ": " + r.message);
      continue;
    }
    const auto& c = *r.certificate;
    std::size_t edges = c.one_factor.size();
    for (const auto& f : c.factors.factors)
      for (const auto& cyc : f.cycles) edges += cyc.size();
    auto back = certificate_from_json(Json::parse(certificate_to_json(c).dump()));
    if (c.factors.factors.size() != 47 || edges != 4560 || !verify_hwp_certificate(c) || !verify_hwp_certificate(back))
      o.fail(to_string(x) + ": certificate rejected");
    // Distinct edges, counted without the library verifier.
    std::set<std::pair<Vertex, Vertex>> seen;
    for (auto [u, w] : c.one_factor) seen.insert(std::minmax(u, w));
    for (const auto& f : c.factors.factors)
      for (const auto& cyc : f.cycles)
        for (std::size_t j = 0; j < cyc.size(); ++j) seen.insert(std::minmax(cyc[j], cyc[(j + 1) % cyc.size()]));
    if (seen.size() != 4560) o.fail(to_string(x) + ": edges not partitioned");
    if (secs >= 300) o.fail(to_string(x) + ": " + std::to_string(secs) + " s");
    detail << "(" << a << "," << b << ") " << std::fixed;
    detail.precision(2);
    detail << secs << " s; ";
  }
  struct Exc {
    std::string args, bullet;
  };
  for (const auto& e : std::vector<Exc>{{"-v 12 -M 4 -N 6 -a 2 -b 3", "4 does not divide v/l"},
                                        {"-v 144 -M 9 -N 9 -a 1 -b 70", "v = 16l and gcd(M, N) = 9 is odd"},
                                        {"-v 240 -M 4 -N 10 -a 1 -b 118", "gcd(M, N) = 2"}}) {
    std::string out;
    int code = run_cli("solve " + e.args, out);
    if (code != 2 || out.find(e.bullet) == std::string::npos) o.fail("solve " + e.args + ": exit " + std::to_string(code) + ": " + out);
  }
  detail << "3 exception inputs exit 2";
  o.detail = detail.str();
}

void mutations(Outcome& o) {
  const HwpCertificate hwp_a = *solve_hwp({96, 4, 8, 23, 24}, fixture_options()).certificate;
  const HwpCertificate hwp_b = *solve_hwp({96, 4, 8, 1, 46}, fixture_options()).certificate;
  auto rsm = build_dihedral_rsm({1, 3, 1, 13, 11, 4});
  const Graph cg = rsm_graph(rsm);
  const TwoFactorization fac = rsm_to_factorization(rsm, cg);
  const FactorProfile fac_profile = rsm_profile(rsm);
  if (!verify_hwp_certificate(hwp_a) || !verify_hwp_certificate(hwp_b) || !verify_factorization(cg, fac, fac_profile))
    return o.fail("baseline certificates do not verify");

  Rng rng(2024);
  auto mutate = [&](TwoFactorization& f, int kind, std::size_t vertices) -> std::string {
    auto& factor = f.factors[rng.below(f.factors.size())];
    switch (kind) {
      case 0: {  // edge swap: exchange two vertices lying on different cycles of one factor
        std::size_t c1 = rng.below(factor.cycles.size()), c2 = (c1 + 1 + rng.below(factor.cycles.size() - 1)) % factor.cycles.size();
        std::swap(factor.cycles[c1][rng.below(factor.cycles[c1].size())], factor.cycles[c2][rng.below(factor.cycles[c2].size())]);
        return "edge swap";
      }
      case 1:
        f.factors.erase(f.factors.begin() + static_cast<long>(rng.below(f.factors.size())));
        return "factor drop";
      default: {  // relabel one vertex of a cycle
        auto& cyc = factor.cycles[rng.below(factor.cycles.size())];
        Vertex& x = cyc[rng.below(cyc.size())];
        x = static_cast<Vertex>((x + 1 + rng.below(vertices - 1)) % vertices);
        return "cycle relabel";
      }
    }
  };
  std::size_t rejected = 0;
  for (int t = 0; t < 50; ++t) {
    const int kind = t % 3;
    const int target = (t / 3) % 3;
    bool accepted = false;
    std::string what;
    if (target < 2) {
      HwpCertificate c = target == 0 ? hwp_a : hwp_b;
      what = mutate(c.factors, kind, 96);
      accepted = static_cast<bool>(verify_hwp_certificate(c));
      try {
        accepted = accepted || verify_hwp_certificate(certificate_from_json(Json::parse(certificate_to_json(c).dump())));
      } catch (const InvalidArgument&) {
      }
    } else {
      TwoFactorization f = fac;
      what = mutate(f, kind, cg.order());
      accepted = static_cast<bool>(verify_factorization(cg, f, fac_profile));
      try {
        auto file = factorization_from_json(Json::parse(factorization_to_json(cg, f).dump()));
        accepted = accepted || verify_factorization(Graph::parse(file.graph), file.factorization, fac_profile);
      } catch (const InvalidArgument&) {
      }
    }
    if (accepted) o.fail("mutation " + std::to_string(t) + " (" + what + ") accepted");
    else ++rejected;
  }
  o.detail = std::to_string(rejected) + "/50 mutations rejected";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    void (*run)(Outcome&);
  };
  const std::vector<Criterion> criteria = {
      {"dihedral row-sum matrix grid", dihedral_rsm_grid},
      {"abelian row-sum matrix grid", abelian_rsm_grid},
      {"factorization contract with JSON re-verify", factorization_contract},
      {"C_g[w] blow-up grid, all splits", blowup_grid},
      {"Hall solver and special permutations", hall_solver},
      {"complete mappings", complete_mappings},
      {"end-to-end HWP for v=96 and exception exits", end_to_end},
      {"mutation robustness", mutations},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      criteria[i].run(o);
    } catch (const std::exception& e) {
      o.fail(std::string("uncaught: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].name << "  [" << o.detail << "; "
              << std::fixed << std::setprecision(1) << since(t0) << " s]\n";
    for (const auto& f : o.failures) std::cout << "      " << f << '\n';
    std::cout.flush();
    if (!o.pass) ++failed;
  }
  std::cout << (failed ? "FAILED: " + std::to_string(failed) + " of 8 criteria" : std::string("all 8 criteria passed")) << '\n';
  return failed ? 1 : 0;
}
