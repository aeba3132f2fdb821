// hwp: build and verify row-sum matrices, factorizations and HWP certificates.
//
// Exit codes: 0 ok, 1 verification failed, 2 known exception or unsupported
// case, 3 invalid parameters, 4 ingredient unavailable.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hwp/hwp.hpp"

using namespace hwp;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kException = 2, kInvalid = 3, kUnavailable = 4 };

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void row(const std::string& key, const std::string& value) { std::cout << std::left << std::setw(12) << key << value << '\n'; }

std::string seconds(double s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << s << " s";
  return os.str();
}

int report(const Verdict& v) {
  row("verified", v ? "yes" : "NO: " + v.diagnostic);
  return v ? kOk : kVerifyFailed;
}

/// Writes, then re-reads and re-checks the artifact.
template <typename Check>
int write_checked(const std::string& path, const Json& j, Check&& check) {
  if (path.empty()) return kOk;
  write_json_file(path, j);
  Verdict v = check(read_json_file(path));
  row("written", path);
  if (!v) {
    row("reread", "NO: " + v.diagnostic);
    return kVerifyFailed;
  }
  return kOk;
}

std::vector<std::string> ingredient_dirs(const std::vector<std::string>& flags) {
  if (!flags.empty()) return flags;
  if (const char* env = std::getenv("HWP_INGREDIENTS"); env && *env) return {env};
  return {};
}

// ---- subcommands -------------------------------------------------------------

struct RsmBuildArgs {
  std::string family = "dihedral", group, out;
  int k = 0, m = 1, n = 1, ell = 1;
  long long alpha = 0, beta = 0, gamma = 0, delta = 0;
  std::size_t g = 3;
  std::uint64_t seed = 0;
};

int rsm_build(const RsmBuildArgs& args) {
  Timer timer;
  RsmBuildArgs a = args;
  if (!a.group.empty()) {
    Group gr = Group::parse(a.group);
    if (!gr.is_dihedral() || a.family != "dihedral") throw InvalidArgument("--group takes a dihedral:m=..,n=..,k=.. descriptor");
    a.m = gr.m();
    a.n = gr.n();
    a.k = gr.k();
  }
  RowSumMatrix rsm{Group::cyclic({1}), {}, 0, {}};
  OrderList want;
  std::string method;
  if (a.family == "dihedral") {
    auto d = build_dihedral_rsm_traced({a.k, a.m, a.n, a.alpha, a.beta, a.g, a.seed});
    rsm = std::move(d.matrix);
    method = d.method;
    want = OrderList{{static_cast<std::size_t>(a.alpha), static_cast<std::size_t>(a.m)},
                     {static_cast<std::size_t>(a.beta), static_cast<std::size_t>((1 << a.k) * a.n)}};
  } else {
    rsm = build_abelian_rsm(a.ell, a.m, a.n, a.k, a.gamma, a.delta, a.g, {a.seed, 20000, 12});
    method = "abelian";
    want = OrderList{{static_cast<std::size_t>(2 * a.gamma), static_cast<std::size_t>(a.m)},
                     {static_cast<std::size_t>(2 * a.delta), static_cast<std::size_t>((1 << a.k) * a.n)}};
  }
  row("group", rsm.group.descriptor());
  row("method", method);
  row("shape", std::to_string(rsm.rows.size()) + " x " + std::to_string(rsm.g));
  row("orders", row_sum_orders(rsm).to_string());
  int code = report(verify_rsm(rsm, want));
  if (code) return code;
  code = write_checked(a.out, rsm_to_json(rsm), [&](const Json& j) { return verify_rsm(rsm_from_json(j), want); });
  row("time", seconds(timer.seconds()));
  return code;
}

int rsm_verify(const std::string& path, const std::string& orders) {
  RowSumMatrix rsm = rsm_from_json(read_json_file(path));
  const OrderList got = row_sum_orders(rsm);
  const OrderList want = orders.empty() ? got : OrderList::parse(orders);
  row("group", rsm.group.descriptor());
  row("shape", std::to_string(rsm.rows.size()) + " x " + std::to_string(rsm.g));
  row("orders", got.to_string());
  return report(verify_rsm(rsm, want));
}

int factorize(const std::string& path, const std::string& out) {
  Timer timer;
  RowSumMatrix rsm = rsm_from_json(read_json_file(path));
  if (auto v = verify_rsm(rsm, row_sum_orders(rsm)); !v) return report(v);
  Graph graph = rsm_graph(rsm);
  TwoFactorization f = rsm_to_factorization(rsm, graph);
  row("graph", graph.descriptor());
  row("profile", profile_to_string(profile_of(f)));
  int code = report(verify_factorization(graph, f, rsm_profile(rsm)));
  if (code) return code;
  code = write_checked(out, factorization_to_json(graph, f), [&](const Json& j) {
    auto file = factorization_from_json(j);
    return verify_factorization(Graph::parse(file.graph), file.factorization, rsm_profile(rsm));
  });
  row("time", seconds(timer.seconds()));
  return code;
}

int blowup(std::size_t g, int k, int m, int n, long long alpha, long long beta, std::uint64_t seed, const std::string& out) {
  Timer timer;
  CgSolution sol = solve_cg_blowup(g, k, m, n, alpha, beta, seed);
  Graph graph = cycle_blowup_graph(g, static_cast<std::size_t>((4LL << k) * m * n));
  const FactorProfile want = profile_of(sol.factorization);
  row("graph", graph.descriptor());
  row("route", sol.route);
  row("profile", profile_to_string(want));
  int code = report(verify_factorization(graph, sol.factorization, want));
  if (code) return code;
  code = write_checked(out, factorization_to_json(graph, sol.factorization), [&](const Json& j) {
    auto file = factorization_from_json(j);
    return verify_factorization(Graph::parse(file.graph), file.factorization, want);
  });
  row("time", seconds(timer.seconds()));
  return code;
}

int solve(const HwpInstance& x, const SolveOptions& opt, const std::string& out) {
  Timer timer;
  row("instance", to_string(x));
  HwpResult r = solve_hwp(x, opt);
  switch (r.status) {
    case HwpStatus::NecessaryFail:
      row("status", "invalid: " + r.message);
      return kInvalid;
    case HwpStatus::KnownException:
      row("status", "known exception: " + r.message);
      return kException;
    case HwpStatus::IngredientUnavailable:
      row("status", r.message);
      return kUnavailable;
    case HwpStatus::Solved: break;
  }
  const HwpCertificate& c = *r.certificate;
  for (const auto& note : c.notes) row("ingredient", note);
  row("profile", profile_to_string(profile_of(c.factors)) + " + 1-factor");
  int code = report(verify_hwp_certificate(c));
  if (code) return code;
  code = write_checked(out, certificate_to_json(c), [](const Json& j) { return verify_hwp_certificate(certificate_from_json(j)); });
  row("time", seconds(timer.seconds()));
  return code;
}

int verify(const std::string& path) {
  Json j = read_json_file(path);
  if (j.is_object() && j.contains("instance")) {
    HwpCertificate c;
    try {
      c = certificate_from_json(j);
    } catch (const InvalidArgument& e) {
      return report(Verdict::fail(e.what()));
    }
    row("instance", to_string(c.instance));
    row("profile", profile_to_string(profile_of(c.factors)));
    return report(verify_hwp_certificate(c));
  }
  FactorizationFile file;
  try {
    file = factorization_from_json(j);
  } catch (const InvalidArgument& e) {
    return report(Verdict::fail(e.what()));
  }
  Graph graph = Graph::parse(file.graph);
  row("graph", file.graph);
  row("profile", profile_to_string(profile_of(file.factorization)));
  return report(verify_factorization(graph, file.factorization, profile_of(file.factorization)));
}

int ingredients_search(std::size_t uniform_v, const std::vector<std::size_t>& tz, std::size_t c,
                       const ProviderOptions& opt, const std::string& out) {
  Timer timer;
  const bool equipartite = !tz.empty();
  if (equipartite == (uniform_v != 0)) throw InvalidArgument("give exactly one of --uniform or --equipartite");
  if (equipartite && tz.size() != 2) throw InvalidArgument("--equipartite takes T Z");
  Ingredient ing = equipartite ? provide_equipartite_factorization(tz[0], tz[1], c, opt) : provide_uniform_factorization(uniform_v, c, opt);
  Graph graph = equipartite ? Graph::equipartite(tz[0], tz[1]) : Graph::complete_star(uniform_v);
  row("graph", graph.descriptor());
  for (const auto& r : ing.rejected) row("rejected", r);
  if (ing.status == IngredientStatus::Nonexistent) {
    row("status", "no such factorization exists");
    return kException;
  }
  if (ing.status == IngredientStatus::NotFound) {
    row("status", "not found within budget");
    return kUnavailable;
  }
  row("source", ing.source);
  const FactorProfile want = profile_of(ing.factorization);
  row("profile", profile_to_string(want));
  int code = report(verify_factorization(graph, ing.factorization, want));
  if (code) return code;
  code = write_checked(out, factorization_to_json(graph, ing.factorization), [&](const Json& j) {
    auto file = factorization_from_json(j);
    return verify_factorization(Graph::parse(file.graph), file.factorization, want);
  });
  row("time", seconds(timer.seconds()));
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamilton-Waterloo constructions: row-sum matrices, 2-factorizations, certificates"};
  app.require_subcommand(1);

  RsmBuildArgs rb;
  auto* rsm_build_cmd = app.add_subcommand("rsm-build", "Build a row-sum matrix");
  rsm_build_cmd->add_option("--family", rb.family, "dihedral or abelian")->check(CLI::IsMember({"dihedral", "abelian"}));
  rsm_build_cmd->add_option("--group", rb.group, "dihedral:m=..,n=..,k=.. in place of -m -n -k");
  rsm_build_cmd->add_option("-k", rb.k, "2-adic exponent k");
  rsm_build_cmd->add_option("-m", rb.m, "odd m");
  rsm_build_cmd->add_option("-n", rb.n, "odd n");
  rsm_build_cmd->add_option("-g", rb.g, "number of columns (>= 3)");
  rsm_build_cmd->add_option("--alpha", rb.alpha, "rows of order m (dihedral)");
  rsm_build_cmd->add_option("--beta", rb.beta, "rows of order 2^k n (dihedral)");
  rsm_build_cmd->add_option("--ell", rb.ell, "group Z_2 x Z_2^ell x Z_mn (abelian)");
  rsm_build_cmd->add_option("--gamma", rb.gamma, "half the rows of order m (abelian)");
  rsm_build_cmd->add_option("--delta", rb.delta, "half the rows of order 2^k n (abelian)");
  rsm_build_cmd->add_option("--seed", rb.seed, "search seed");
  rsm_build_cmd->add_option("-o,--output", rb.out, "write the matrix as JSON");

  std::string rsm_path, orders;
  auto* rsm_verify_cmd = app.add_subcommand("rsm-verify", "Verify a row-sum matrix file");
  rsm_verify_cmd->add_option("file", rsm_path)->required()->check(CLI::ExistingFile);
  rsm_verify_cmd->add_option("--orders", orders, "expected row-sum orders, e.g. \"[^6 9, ^6 3]\"");

  std::string fact_in, fact_out;
  auto* factorize_cmd = app.add_subcommand("factorize", "Turn a row-sum matrix into a 2-factorization of C_g[Gamma, S]");
  factorize_cmd->add_option("--rsm", fact_in)->required()->check(CLI::ExistingFile);
  factorize_cmd->add_option("-o,--output", fact_out);

  std::size_t bg = 3;
  int bk = 0, bm = 1, bn = 1;
  long long ba = 0, bb = 0;
  std::uint64_t bseed = 0;
  std::string bout;
  auto* blowup_cmd = app.add_subcommand("blowup", "Solve HWP(C_g[2^(k+2)mn]; gm, 2^k gn; alpha, beta)");
  blowup_cmd->add_option("-g", bg)->required();
  blowup_cmd->add_option("-k", bk)->required();
  blowup_cmd->add_option("-m", bm)->required();
  blowup_cmd->add_option("-n", bn)->required();
  blowup_cmd->add_option("-a,--alpha", ba)->required();
  blowup_cmd->add_option("-b,--beta", bb)->required();
  blowup_cmd->add_option("--seed", bseed);
  blowup_cmd->add_option("-o,--output", bout);

  HwpInstance inst;
  SolveOptions sopt;
  std::vector<std::string> dirs;
  std::string sout;
  auto* solve_cmd = app.add_subcommand("solve", "Solve HWP(v; M, N; alpha, beta)");
  solve_cmd->add_option("-v", inst.v)->required();
  solve_cmd->add_option("-M", inst.M)->required();
  solve_cmd->add_option("-N", inst.N)->required();
  solve_cmd->add_option("-a,--alpha", inst.alpha)->required();
  solve_cmd->add_option("-b,--beta", inst.beta)->required();
  solve_cmd->add_option("--seed", sopt.seed, "seed (default 0)");
  solve_cmd->add_option("--jobs", sopt.jobs, "worker threads");
  solve_cmd->add_option("--ingredients", dirs, "certificate directories (default $HWP_INGREDIENTS)");
  solve_cmd->add_option("-o,--output", sout);

  std::string verify_path;
  auto* verify_cmd = app.add_subcommand("verify", "Verify an HWP certificate or a factorization file");
  verify_cmd->add_option("file", verify_path)->required()->check(CLI::ExistingFile);

  std::size_t uv = 0, ic = 3;
  std::vector<std::size_t> tz;
  ProviderOptions popt;
  std::string iout;
  auto* ing_cmd = app.add_subcommand("ingredients-search", "Search a uniform factorization of K_v^* or K_t[z]");
  ing_cmd->add_option("--uniform", uv, "v for K_v (odd) or K_v - I (even)");
  ing_cmd->add_option("--equipartite", tz, "T Z for K_T[Z]")->expected(2);
  ing_cmd->add_option("-c", ic, "cycle length")->required();
  ing_cmd->add_option("--seed", popt.seed);
  ing_cmd->add_option("--nodes", popt.nodes, "search nodes per restart");
  ing_cmd->add_option("--restarts", popt.restarts);
  ing_cmd->add_option("--ingredients", popt.import_dirs, "certificate directories to import from first");
  ing_cmd->add_option("-o,--output", iout);

  // `hwp rsm build ...` and `hwp rsm verify ...` are accepted as spellings of rsm-build and rsm-verify.
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.size() >= 2 && args[0] == "rsm" && (args[1] == "build" || args[1] == "verify")) {
    args[1] = "rsm-" + args[1];
    args.erase(args.begin());
  }
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*rsm_build_cmd) return rsm_build(rb);
    if (*rsm_verify_cmd) return rsm_verify(rsm_path, orders);
    if (*factorize_cmd) return factorize(fact_in, fact_out);
    if (*blowup_cmd) return blowup(bg, bk, bm, bn, ba, bb, bseed, bout);
    if (*solve_cmd) {
      sopt.providers.import_dirs = ingredient_dirs(dirs);
      return solve(inst, sopt, sout);
    }
    if (*verify_cmd) return verify(verify_path);
    if (*ing_cmd) return ingredients_search(uv, tz, ic, popt, iout);
  } catch (const Unsupported& e) {
    std::cerr << "unsupported (" << e.which_case() << "): " << e.what() << '\n';
    return kException;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kInvalid;
  } catch (const NotFound& e) {
    std::cerr << "not found: " << e.what() << '\n';
    return kUnavailable;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kVerifyFailed;
  }
  return kInvalid;
}
