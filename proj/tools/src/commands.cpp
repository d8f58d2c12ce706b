#include <cmath>
#include <random>
#include <set>

#include "pentagram/invariants.hpp"
#include "pentagram/pentagram_map.hpp"
#include "pentagram_cli/cli.hpp"

namespace pentagram::cli {

void RunConfig::validate() const {
  if (mode != "rational" && mode != "float") throw UsageError("--mode must be rational or float");
  if (n < 0) throw UsageError("n must be non-negative");
  if (iterations < 0) throw UsageError("iteration count must be non-negative");
  if (!(tol > 0.0)) throw UsageError("--tol must be positive");
}

json RunConfig::to_json() const {
  return {{"schema", kSchema}, {"command", command}, {"n", n},    {"mode", mode},    {"seed", seed},
          {"iterations", iterations}, {"out", out},  {"tol", tol}, {"params", params}};
}

ABCoords<Rational> closed_quadrilateral() { return ABCoords<Rational>({1, 1, 1, 1}, {-1, -1, -1, -1}); }

ABCoords<Rational> closed_pentagon(const Rational& x, const Rational& y) {
  Rational d = 1 - x * y;
  if (sgn(d) == 0) throw Error(Errc::InvalidParameters, "closed pentagon family needs xy != 1");
  std::vector<Rational> a = {x, y, Rational(-(1 + x) / d), Rational(-d), Rational(-(1 + y) / d)};
  std::vector<Rational> b(5);
  for (int i = 0; i < 5; ++i) b[i] = -a[(i + 2) % 5];
  return ABCoords<Rational>(a, b);
}

namespace {

template <class T>
T param(const json& p, const char* key, T fallback) {
  return p.contains(key) ? p.at(key).get<T>() : fallback;
}

Rational rational_param(const json& p, const char* key, const Rational& fallback) {
  if (!p.contains(key)) return fallback;
  return io::scalar_from_json<Rational>(p.at(key));
}

json with_config(json j, const RunConfig& cfg) {
  j["config"] = cfg.to_json();
  return j;
}

template <class T>
json polygon_in_mode(const TwistedPolygon<T>& p, const RunConfig& cfg) {
  if constexpr (is_exact_v<T>) {
    if (cfg.mode == "float") return io::polygon_to_json(to_double(p));
  } else {
    if (cfg.mode == "rational") throw UsageError("this generator only produces float polygons; pass --mode float");
  }
  return io::polygon_to_json(p);
}

}  // namespace

json generate(const std::string& kind, const RunConfig& cfg) {
  const json& p = cfg.params;
  if (kind == "uconvex") {
    int n = cfg.n > 0 ? cfg.n : 7;
    auto poly = generate_universally_convex(n, param(p, "eigen_a", 0.5), param(p, "eigen_b", 2.0), param(p, "x0", 1.0),
                                            param(p, "y0", 1.0), param(p, "jitter", 0.0), cfg.seed);
    return with_config(polygon_in_mode(poly, cfg), cfg);
  }
  if (kind == "spiral") {
    int n = cfg.n > 0 ? cfg.n : 8;
    auto poly = generate_spiral(n, param(p, "theta", 0.3), param(p, "d", 1.05), param(p, "jitter", 0.0), cfg.seed);
    return with_config(polygon_in_mode(poly, cfg), cfg);
  }
  if (kind == "random") return with_config(polygon_in_mode(random_polygon(cfg.n > 0 ? cfg.n : 5, cfg.seed), cfg), cfg);
  if (kind == "convex")
    return with_config(polygon_in_mode(random_convex_polygon(cfg.n > 0 ? cfg.n : 5, cfg.seed), cfg), cfg);
  if (kind == "closed4") return with_config(polygon_in_mode(reconstruct_from_ab(closed_quadrilateral()), cfg), cfg);
  if (kind == "closed5") {
    Rational x = rational_param(p, "x", Rational(1)), y = rational_param(p, "y", Rational(2));
    return with_config(polygon_in_mode(reconstruct_from_ab(closed_pentagon(x, y)), cfg), cfg);
  }
  throw UsageError("unknown polygon kind '" + kind + "'");
}

namespace {

template <class T>
json invariants_of(const TwistedPolygon<T>& p) {
  int n = p.n();
  json r = {{"n", n}, {"mode", ScalarTraits<T>::mode}};
  CornerCoords<T> c = corner_coords(p);
  CornerInvariantValues<T> v = evaluate_invariants(c);
  json O = json::array(), E = json::array();
  for (const T& x : v.O) O.push_back(io::scalar_to_json(x));
  for (const T& x : v.E) E.push_back(io::scalar_to_json(x));
  O.push_back(io::scalar_to_json(v.On));
  E.push_back(io::scalar_to_json(v.En));
  r["O"] = O;
  r["E"] = E;
  if (v.On2) {
    r["O_half"] = io::scalar_to_json(*v.On2);
    r["E_half"] = io::scalar_to_json(*v.En2);
  }
  try {
    r["H"] = io::scalar_to_json(hilbert_data(p).H);
  } catch (const Error&) {
    r["H"] = nullptr;
  }
  r["I"] = nullptr;
  r["J"] = nullptr;
  r["closed_residuals"] = nullptr;
  if (n % 3 != 0) {
    try {
      ABCoords<T> ab = ab_coords(p);
      ABInvariantValues<T> iv = evaluate_invariants(ab);
      json I = json::array(), J = json::array();
      for (const T& x : iv.I) I.push_back(io::scalar_to_json(x));
      for (const T& x : iv.J) J.push_back(io::scalar_to_json(x));
      r["I"] = I;
      r["J"] = J;
      try {
        json res = json::array();
        for (const T& x : closed_relations_residual(ab, p.tolerance())) res.push_back(io::scalar_to_json(x));
        r["closed_residuals"] = res;
      } catch (const Error& e) {
        if (e.code() != Errc::NotClosed) throw;
      }
    } catch (const Error& e) {
      if (e.code() != Errc::NonRationalLift) throw;
      r["I_unavailable"] = "canonical lift is irrational in exact mode";
    }
  }
  return r;
}

}  // namespace

json invariants_report(const io::AnyPolygon& p) {
  return std::visit([](const auto& poly) { return invariants_of(poly); }, p);
}

json conic_experiment(int n, int samples, std::uint64_t seed) {
  if (n < 4) throw UsageError("conic experiment needs n >= 4");
  if (samples < 0) throw UsageError("sample count must be non-negative");
  std::mt19937_64 rng(seed);
  json report = {{"label", "conjecture experiment"}, {"n", n}, {"samples", json::array()}, {"controls", json::array()}};
  double max_inscribed = 0.0, min_control = -1.0;
  int skipped = 0;
  auto residual = [&](const std::vector<Vec3<Rational>>& verts, const Rational& lambda) {
    std::vector<ProjPoint<Rational>> pts;
    for (const auto& v : verts) pts.push_back({v});
    Mat3<Rational> m{};
    m[0][0] = lambda;
    m[1][1] = lambda * lambda;
    m[2][2] = 1;
    TwistedPolygon<Rational> poly(std::move(pts), make_map(m));
    CornerInvariantValues<Rational> v = evaluate_invariants(corner_coords(poly));
    json diffs = json::array();
    double worst = 0.0;
    for (std::size_t k = 0; k < v.O.size(); ++k) {
      Rational d = v.E[k] - v.O[k];
      diffs.push_back(io::scalar_to_json(d));
      worst = std::max(worst, std::abs(d.get_d()));
    }
    Rational dn = v.En - v.On;
    diffs.push_back(io::scalar_to_json(dn));
    worst = std::max(worst, std::abs(dn.get_d()));
    return std::pair{diffs, worst};
  };
  for (int s = 0; s < samples; ++s) {
    // Vertices (t, t², 1) with 1 = t_0 < ... < t_{n-1} < λ, monodromy diag(λ, λ², 1).
    Rational lambda = 2 + random_rational_in(rng, Rational(0), Rational(2), 12);
    std::set<Rational> ts;
    ts.insert(Rational(1));
    while (static_cast<int>(ts.size()) < n) ts.insert(random_rational_in(rng, Rational(1), lambda, 60));
    std::vector<Vec3<Rational>> verts;
    for (const Rational& t : ts) verts.push_back({t, Rational(t * t), Rational(1)});
    try {
      auto [diffs, worst] = residual(verts, lambda);
      report["samples"].push_back({{"lambda", io::scalar_to_json(lambda)}, {"E_minus_O", diffs}, {"max_abs", worst}});
      max_inscribed = std::max(max_inscribed, worst);
      // Control: lift vertex 1 off the conic.
      verts[1][1] += Rational(1, 17);
      auto [cd, cw] = residual(verts, lambda);
      report["controls"].push_back({{"E_minus_O", cd}, {"max_abs", cw}});
      min_control = min_control < 0 ? cw : std::min(min_control, cw);
    } catch (const Error& e) {
      if (e.code() != Errc::DegenerateConfiguration && e.code() != Errc::MapSingularity &&
          e.code() != Errc::DegenerateCrossRatio)
        throw;
      ++skipped;
    }
  }
  report["skipped"] = skipped;
  report["max_abs_inscribed"] = max_inscribed;
  report["min_abs_control"] = min_control < 0 ? json(nullptr) : json(min_control);
  return report;
}

}  // namespace pentagram::cli
