#include "pentagram/poisson.hpp"

#include <sstream>

#include "pentagram/invariants.hpp"
#include "pentagram/pentagram_map.hpp"

namespace pentagram {

const char* chart_name(Chart c) { return c == Chart::Corner ? "corner" : "ab"; }

PoissonStructure::PoissonStructure(int n, Chart chart, std::vector<int> table)
    : n_(n), chart_(chart), table_(std::move(table)), rows_(2 * n) {
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j)
      if (int v = c(i, j)) rows_[i].emplace_back(j, v);
}

PoissonStructure PoissonStructure::corner(int n) {
  if (n < 3) throw Error(Errc::InvalidParameters, "need n >= 3");
  int d = 2 * n;
  std::vector<int> t(d * d, 0);
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    t[var_x(i, n) * d + var_x(j, n)] -= 1;
    t[var_x(j, n) * d + var_x(i, n)] += 1;
    t[var_y(i, n) * d + var_y(j, n)] += 1;
    t[var_y(j, n) * d + var_y(i, n)] -= 1;
  }
  return PoissonStructure(n, Chart::Corner, std::move(t));
}

PoissonStructure PoissonStructure::ab(int n) {
  if (n < 3) throw Error(Errc::InvalidParameters, "need n >= 3");
  int d = 2 * n;
  int m = n / 3;
  std::vector<int> t(d * d, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int v = 0;
      for (int k = 1; k <= m; ++k) {
        if (wrap(i - j - 3 * k, n) == 0) ++v;
        if (wrap(i - j + 3 * k, n) == 0) --v;
      }
      t[var_a(i, n) * d + var_a(j, n)] = v;
      t[var_b(i, n) * d + var_b(j, n)] = -v;
    }
  return PoissonStructure(n, Chart::AB, std::move(t));
}

PoissonStructure PoissonStructure::with_flipped_entry(int i, int j) const {
  std::vector<int> t = table_;
  t[i * dim() + j] = -t[i * dim() + j];
  if (i != j) t[j * dim() + i] = -t[j * dim() + i];
  return PoissonStructure(n_, chart_, std::move(t));
}

// For monomials z^α, z^β the bracket is (αᵀCβ) z^{α+β}.
LaurentPoly bracket_poly(const LaurentPoly& f, const LaurentPoly& g, const PoissonStructure& s) {
  if (f.n_vars() != s.dim() || g.n_vars() != s.dim())
    throw Error(Errc::ArityMismatch, "bracket arity");
  LaurentPoly out(s.dim());
  std::vector<long> ca(s.dim());
  for (const auto& [ma, a] : f.terms()) {
    std::fill(ca.begin(), ca.end(), 0);
    bool any = false;
    for (auto [v, e] : ma.e)
      for (auto [w, c] : s.row(v)) {
        ca[w] += static_cast<long>(e) * c;
        any = true;
      }
    if (!any) continue;
    for (const auto& [mb, b] : g.terms()) {
      long coef = 0;
      for (auto [w, e] : mb.e) coef += ca[w] * e;
      if (coef != 0) out.add_term(ma * mb, Rational(a * b * coef));
    }
  }
  return out;
}

std::vector<DualScalar> dual_point(std::span<const Rational> point) {
  std::vector<DualScalar> z;
  z.reserve(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) z.push_back(DualScalar::variable(point[i], static_cast<int>(i)));
  return z;
}

Rational bracket_of_duals(const DualScalar& f, const DualScalar& g, std::span<const Rational> point,
                          const PoissonStructure& s) {
  Rational r = 0;
  for (const auto& [i, fi] : f.grad()) {
    Rational row = 0;
    for (auto [j, c] : s.row(i)) {
      Rational gj = g.d(j);
      if (sgn(gj) != 0) row += c * point[j] * gj;
    }
    r += fi * point[i] * row;
  }
  return r;
}

Rational bracket_at_point(const DualExpr& f, const DualExpr& g, std::span<const Rational> point,
                          const PoissonStructure& s) {
  if (static_cast<int>(point.size()) != s.dim()) throw Error(Errc::ArityMismatch, "point size");
  std::vector<DualScalar> z = dual_point(point);
  return bracket_of_duals(f(z), g(z), point, s);
}

std::vector<Rational> random_corner_point(int n, std::mt19937_64& rng) {
  std::vector<Rational> p(2 * n);
  for (int i = 0; i < n; ++i) {
    do {
      p[i] = random_rational(rng, 50, true);
      p[n + i] = random_rational(rng, 50, true);
    } while (p[i] * p[n + i] == 1);
  }
  return p;
}

InvarianceReport verify_T_invariance(int n, int trials, std::uint64_t seed) {
  return verify_T_invariance(n, trials, seed, PoissonStructure::corner(n));
}

InvarianceReport verify_T_invariance(int n, int trials, std::uint64_t seed, const PoissonStructure& s) {
  if (s.chart() != Chart::Corner || s.n() != n) throw Error(Errc::InvalidParameters, "corner structure expected");
  InvarianceReport rep;
  rep.n = n;
  std::mt19937_64 rng(seed);
  int d = 2 * n;
  for (int t = 0; t < trials; ++t) {
    std::vector<Rational> pt = random_corner_point(n, rng);
    std::vector<DualScalar> z = dual_point(pt);
    std::vector<DualScalar> x(z.begin(), z.begin() + n), y(z.begin() + n, z.end()), xo, yo;
    try {
      corner_map_formula(x, y, xo, yo);
    } catch (const Error&) {
      ++rep.points_skipped;
      continue;
    }
    std::vector<DualScalar> img(xo);
    img.insert(img.end(), yo.begin(), yo.end());
    bool bad_image = false;
    for (const auto& v : img) bad_image |= sgn(v.value()) == 0;
    if (bad_image) {
      ++rep.points_skipped;
      continue;
    }
    ++rep.points_checked;
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q) {
        Rational lhs = bracket_of_duals(img[p], img[q], pt, s);
        Rational rhs = s.c(p, q) * img[p].value() * img[q].value();
        Rational v = abs(lhs - rhs);
        ++rep.pairs_checked;
        if (v > rep.max_violation) {
          rep.max_violation = v;
          rep.counterexample = pt;
        }
      }
  }
  return rep;
}

namespace {

std::string inv_name(char family, int k, int n) {
  std::ostringstream s;
  s << family;
  if (k == n) s << 'n';
  else s << k;
  return s.str();
}

}  // namespace

BracketCheckReport verify_commutation(int n) { return verify_commutation(n, PoissonStructure::corner(n)); }

BracketCheckReport verify_commutation(int n, const PoissonStructure& s) {
  const CornerInvariants& ci = corner_monodromy_invariants(n);
  std::vector<std::pair<std::string, const LaurentPoly*>> fam;
  for (int j = 1; j <= ci.k; ++j) fam.emplace_back(inv_name('O', j, n), &ci.O[j - 1]);
  for (int j = 1; j <= ci.k; ++j) fam.emplace_back(inv_name('E', j, n), &ci.E[j - 1]);
  fam.emplace_back("On", &ci.On);
  fam.emplace_back("En", &ci.En);
  BracketCheckReport rep;
  rep.n = n;
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (std::size_t j = i + 1; j < fam.size(); ++j) {
      ++rep.checked;
      if (!bracket_poly(*fam[i].second, *fam[j].second, s).is_zero())
        rep.failures.push_back("{" + fam[i].first + "," + fam[j].first + "}");
    }
  return rep;
}

BracketCheckReport verify_casimirs(int n) { return verify_casimirs(n, PoissonStructure::corner(n)); }

BracketCheckReport verify_casimirs(int n, const PoissonStructure& s) {
  const CornerInvariants& ci = corner_monodromy_invariants(n);
  std::vector<std::pair<std::string, const LaurentPoly*>> fam = {{"On", &ci.On}, {"En", &ci.En}};
  if (ci.On2) fam.emplace_back("On2", &*ci.On2);
  if (ci.En2) fam.emplace_back("En2", &*ci.En2);
  BracketCheckReport rep;
  rep.n = n;
  for (const auto& [name, f] : fam)
    for (int v = 0; v < 2 * n; ++v) {
      ++rep.checked;
      LaurentPoly zv = LaurentPoly::variable(2 * n, v);
      if (!bracket_poly(*f, zv, s).is_zero())
        rep.failures.push_back("{" + name + "," + (v < n ? "x" : "y") + std::to_string(v % n) + "}");
    }
  return rep;
}

int structure_corank(int n, Chart chart) {
  PoissonStructure s = chart == Chart::Corner ? PoissonStructure::corner(n) : PoissonStructure::ab(n);
  std::vector<std::vector<Rational>> rows(s.dim(), std::vector<Rational>(s.dim()));
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < s.dim(); ++j) rows[i][j] = s.c(i, j);
  return s.dim() - exact_rank(rows);
}

}  // namespace pentagram
