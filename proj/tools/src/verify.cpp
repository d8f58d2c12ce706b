#include <cmath>
#include <future>
#include <random>

#include "pentagram/boussinesq.hpp"
#include "pentagram/invariants.hpp"
#include "pentagram/pentagram_map.hpp"
#include "pentagram/poisson.hpp"
#include "pentagram_cli/cli.hpp"

namespace pentagram::cli {

namespace {

json check(const std::string& name, int n, bool passed, json detail = nullptr) {
  json j = {{"name", name}, {"passed", passed}};
  if (n > 0) j["n"] = n;
  if (!detail.is_null()) j["detail"] = std::move(detail);
  return j;
}

json point_json(const std::vector<Rational>& p) {
  json a = json::array();
  for (const auto& v : p) a.push_back(io::rational_to_string(v));
  return a;
}

PoissonStructure structure_for(int n, bool mutate) {
  PoissonStructure s = PoissonStructure::corner(n);
  return mutate ? s.with_flipped_entry(0, 1) : s;
}

int expected_corank(int n) { return n % 2 ? 2 : 4; }

std::vector<json> poisson_checks(int n, int trials, std::uint64_t seed, bool mutate) {
  PoissonStructure s = structure_for(n, mutate);
  std::vector<json> out;
  InvarianceReport inv = verify_T_invariance(n, trials, seed, s);
  json d = {{"points_checked", inv.points_checked}, {"points_skipped", inv.points_skipped},
            {"max_violation", io::rational_to_string(inv.max_violation)}};
  if (!inv.exact()) d["counterexample"] = point_json(inv.counterexample);
  out.push_back(check("poisson.T_invariance", n, inv.exact() && inv.points_checked > 0, d));
  BracketCheckReport com = verify_commutation(n, s);
  out.push_back(check("poisson.commutation", n, com.passed(), {{"checked", com.checked}, {"failures", com.failures}}));
  BracketCheckReport cas = verify_casimirs(n, s);
  out.push_back(check("poisson.casimirs", n, cas.passed(), {{"checked", cas.checked}, {"failures", cas.failures}}));
  int corank = structure_corank(n, Chart::Corner);
  out.push_back(check("poisson.corank", n, corank == expected_corank(n), {{"corank", corank}, {"expected", expected_corank(n)}}));
  return out;
}

LaurentPoly product_of(int n, int first_var) {
  Monomial m;
  for (int i = 0; i < n; ++i) m = m * Monomial::var(first_var + i);
  return LaurentPoly::monomial(2 * n, m);
}

std::vector<json> invariant_checks(int n, int trials, std::uint64_t seed) {
  std::vector<json> out;
  std::mt19937_64 rng(seed);
  bool same = true;
  json bad = nullptr;
  for (int t = 0; t < trials && same; ++t) {
    std::vector<Rational> p = random_corner_point(n, rng);
    CornerCoords<Rational> c{std::vector<Rational>(p.begin(), p.begin() + n), std::vector<Rational>(p.begin() + n, p.end())};
    CornerCoords<Rational> tc;
    try {
      tc = pentagram_in_corner(c);
    } catch (const Error& e) {
      if (e.code() != Errc::MapSingularity) throw;
      continue;
    }
    CornerInvariantValues<Rational> a = evaluate_invariants(c), b = evaluate_invariants(tc);
    if (a.O != b.O || a.E != b.E || a.On != b.On || a.En != b.En || a.On2 != b.On2 || a.En2 != b.En2) {
      same = false;
      bad = point_json(p);
    }
  }
  out.push_back(check("invariants.exact_invariance", n, same, bad.is_null() ? json(nullptr) : json{{"counterexample", bad}}));

  const TraceInvariants& ti = trace_invariants(n);
  out.push_back(check("invariants.trace_equals_markings", n, ti.I == combinatorial_invariants(n)));

  if (n % 3 != 0) {
    const CornerInvariants& ci = corner_monodromy_invariants(n);
    std::vector<LaurentPoly> img = corner_in_ab(n);
    LaurentPoly A = product_of(n, 0), B = product_of(n, n);
    Rational sn = n % 2 ? -1 : 1;
    bool ok = ci.En.substitute(img) * A * A == B * sn && ci.On.substitute(img) * B * B == A;
    for (int j = 1; j <= ci.k && ok; ++j)
      ok = ci.E[j - 1].substitute(img) * A == ti.I[ci.k - j] && ci.O[j - 1].substitute(img) * B == ti.J[ci.k - j] * sn;
    out.push_back(check("invariants.bridges", n, ok));
  }

  std::vector<Rational> p = random_corner_point(n, rng);
  int rank = algebraic_independence_rank(n, p);
  int expected = n % 2 ? n + 1 : n;
  out.push_back(check("invariants.independence_rank", n, rank == expected, {{"rank", rank}, {"expected", expected}}));
  return out;
}

std::vector<json> closed_checks(std::uint64_t seed) {
  std::vector<json> out;
  ABCoords<Rational> q = closed_quadrilateral();
  auto r4 = closed_relations_residual(q);
  ABInvariantValues<Rational> v4 = evaluate_invariants(q);
  bool ok4 = v4.I == std::vector<Rational>{2, 0, 1};
  for (const auto& r : r4) ok4 = ok4 && sgn(r) == 0;
  out.push_back(check("closed.quadrilateral", 4, ok4));

  std::mt19937_64 rng(seed);
  bool ok5 = true;
  int tried = 0;
  while (tried < 10) {
    Rational x = random_rational(rng, 9), y = random_rational(rng, 9);
    if (x * y == 1 || x == -1 || y == -1) continue;
    ++tried;
    ABCoords<Rational> c = closed_pentagon(x, y);
    for (const auto& r : closed_relations_residual(c)) ok5 = ok5 && sgn(r) == 0;
    Rational z = x * y * (1 + x) * (1 + y) / (1 - x * y);
    ABInvariantValues<Rational> v = evaluate_invariants(c);
    ok5 = ok5 && v.I[0] == 2 - z && v.I[1] == 1 + 2 * z && v.I[2] == -z;
  }
  out.push_back(check("closed.pentagon_family", 5, ok5, {{"samples", tried}}));
  return out;
}

std::vector<json> boussinesq_checks(std::uint64_t seed) {
  std::vector<json> out;
  int n = 64;
  BoussinesqState s = make_state(PeriodicField::random_band_limited(4, 0.5, seed),
                                 PeriodicField::random_band_limited(4, 0.5, seed + 1), n);
  FunctionalValue f0 = functionals(s);
  for (int i = 0; i < 1000; ++i) s = step(s, default_dt(n));
  FunctionalValue f1 = functionals(s);
  double d12 = std::max(std::abs(f1.H1 - f0.H1), std::abs(f1.H2 - f0.H2));
  double d3h = std::max(std::abs(f1.H3 - f0.H3) / std::abs(f0.H3), std::abs(f1.H - f0.H) / std::abs(f0.H));
  out.push_back(check("boussinesq.conservation", 0, d12 < 1e-12 && d3h < 1e-7, {{"casimir_drift", d12}, {"relative_drift", d3h}}));

  BoussinesqState big = make_state(PeriodicField::random_band_limited(6, 0.5, seed + 2),
                                   PeriodicField::random_band_limited(6, 0.5, seed + 3), 256);
  double res = hamiltonian_consistency(big);
  out.push_back(check("boussinesq.hamiltonian_form", 0, res < 1e-10, {{"residual", res}}));

  PeriodicField u = PeriodicField::mode(1, 0.3, 0.2) + PeriodicField::constant(0.1);
  PeriodicField w = PeriodicField::mode(1, -0.1, 0.25);
  double x = 0.3;
  std::vector<double> eps = default_eps_list();
  ExpansionFit fit = discretization_expansion(u, w, x, eps);
  double ux = u(x), up = u.derivative(1)(x), wx = w(x);
  double err = std::max({std::abs(fit.a[0] - 3) / 1e-6, std::abs(fit.b[0] + 3) / 1e-6, std::abs(fit.a[1]) / 1e-5,
                         std::abs(fit.b[1]) / 1e-5, std::abs(fit.a[2] + ux) / 1e-4, std::abs(fit.b[2] - ux) / 1e-4,
                         std::abs(fit.a[3] + 1.75 * up + wx / 2) / 1e-3, std::abs(fit.b[3] - 1.25 * up + wx / 2) / 1e-3});
  out.push_back(check("boussinesq.discretization", 0, err < 1.0, {{"worst_over_tolerance", err}}));
  return out;
}

}  // namespace

json poisson_report(int n, int trials, std::uint64_t seed, bool mutate) {
  PoissonStructure s = structure_for(n, mutate);
  InvarianceReport inv = verify_T_invariance(n, trials, seed, s);
  BracketCheckReport com = verify_commutation(n, s);
  BracketCheckReport cas = verify_casimirs(n, s);
  json r = {{"n", n}};
  if (inv.exact()) {
    r["invariance"] = "exact";
  } else {
    r["invariance"] = {{"max_violation", io::rational_to_string(inv.max_violation)},
                       {"counterexample", point_json(inv.counterexample)}};
  }
  r["commutation"] = {{"checked", com.checked}, {"failures", com.failures}};
  r["casimirs"] = {{"checked", cas.checked}, {"failures", cas.failures}};
  r["corank"] = structure_corank(n, Chart::Corner);
  r["passed"] = inv.exact() && com.passed() && cas.passed() && r["corank"] == expected_corank(n);
  return r;
}

json verify(const std::string& suite, int n_min, int n_max, std::uint64_t seed, bool mutate) {
  static const std::vector<std::string> suites{"all", "poisson", "invariants", "closed", "boussinesq"};
  if (std::find(suites.begin(), suites.end(), suite) == suites.end()) throw UsageError("unknown suite '" + suite + "'");
  if (n_min < 4 || n_max < n_min || n_max > 12) throw UsageError("n range must satisfy 4 <= min <= max <= 12");
  bool all = suite == "all";
  // One task per (n, family); results are merged in task order.
  std::vector<std::future<std::vector<json>>> tasks;
  for (int n = n_min; n <= n_max; ++n) {
    if (all || suite == "poisson")
      tasks.push_back(std::async(std::launch::async, [=] { return poisson_checks(n, 5, seed + n, mutate); }));
    if (all || suite == "invariants")
      tasks.push_back(std::async(std::launch::async, [=] { return invariant_checks(n, 10, seed + 100 + n); }));
  }
  if (all || suite == "closed") tasks.push_back(std::async(std::launch::async, [=] { return closed_checks(seed); }));
  if (all || suite == "boussinesq")
    tasks.push_back(std::async(std::launch::async, [=] { return boussinesq_checks(seed); }));
  json checks = json::array();
  bool passed = true;
  for (auto& t : tasks)
    for (json& c : t.get()) {
      passed = passed && c["passed"].get<bool>();
      checks.push_back(std::move(c));
    }
  return {{"suite", suite}, {"n_min", n_min}, {"n_max", n_max}, {"mutated", mutate}, {"passed", passed}, {"checks", checks}};
}

}  // namespace pentagram::cli
