#include <doctest.h>

#include <random>

#include "pentagram/invariants.hpp"
#include "pentagram/poisson.hpp"
#include "support.hpp"

using namespace pentagram;
using testing_support::small_rational;

namespace {

LaurentPoly var(int n, int v) { return LaurentPoly::variable(2 * n, v); }

LaurentPoly random_monomial(int nv, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> v(0, nv - 1), e(-2, 3);
  Monomial m;
  for (int i = 0; i < 3; ++i) m = m * Monomial::var(v(rng), e(rng));
  return LaurentPoly::monomial(nv, m, small_rational(rng));
}

LaurentPoly random_small_poly(int nv, std::mt19937_64& rng) {
  LaurentPoly f(nv);
  for (int i = 0; i < 3; ++i) f += random_monomial(nv, rng);
  return f;
}

// {f,g} from the definition with partial derivatives, used as an oracle for
// the monomial-pairing implementation.
LaurentPoly bracket_by_partials(const LaurentPoly& f, const LaurentPoly& g, const PoissonStructure& s) {
  LaurentPoly out(s.dim());
  for (int i = 0; i < s.dim(); ++i)
    for (auto [j, c] : s.row(i)) out += var(s.n(), i) * var(s.n(), j) * f.partial(i) * g.partial(j) * Rational(c);
  return out;
}

}  // namespace

TEST_CASE("structure tables") {
  for (int n : {4, 5, 7, 8}) {
    PoissonStructure s = PoissonStructure::corner(n);
    for (int i = 0; i < s.dim(); ++i)
      for (int j = 0; j < s.dim(); ++j) CHECK(s.c(i, j) == -s.c(j, i));
    for (int i = 0; i < n; ++i) {
      CHECK(s.c(var_x(i, n), var_x(i + 1, n)) == -1);
      CHECK(s.c(var_y(i, n), var_y(i + 1, n)) == 1);
      for (int j = 0; j < n; ++j) CHECK(s.c(var_x(i, n), var_y(j, n)) == 0);
    }
    CHECK(bracket_poly(var(n, var_x(0, n)), var(n, var_x(1, n)), s) ==
          -(var(n, var_x(0, n)) * var(n, var_x(1, n))));
  }
  // Tables in the ab chart from the general rule, written out by hand.
  auto ab_expected = [](int n, int i, int j) {
    auto is = [n](int d) { return [n, d](int p, int q) { return wrap(p - q - d, n) == 0 ? 1 : 0; }; };
    switch (n) {
      case 4: return is(-1)(i, j) - is(1)(i, j);
      case 5: return is(-2)(i, j) - is(2)(i, j);
      case 7: return is(3)(i, j) - is(-3)(i, j) + is(-1)(i, j) - is(1)(i, j);
      case 8: return is(3)(i, j) - is(-3)(i, j) + is(-2)(i, j) - is(2)(i, j);
      default: return 0;
    }
  };
  for (int n : {4, 5, 7, 8}) {
    PoissonStructure s = PoissonStructure::ab(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CHECK(s.c(var_a(i, n), var_a(j, n)) == ab_expected(n, i, j));
        CHECK(s.c(var_b(i, n), var_b(j, n)) == -ab_expected(n, i, j));
        CHECK(s.c(var_a(i, n), var_b(j, n)) == 0);
      }
  }
}

TEST_CASE("bracket axioms") {
  std::mt19937_64 rng(1);
  const int n = 5;
  PoissonStructure s = PoissonStructure::corner(n);
  for (int trial = 0; trial < 15; ++trial) {
    LaurentPoly f = random_small_poly(2 * n, rng), g = random_small_poly(2 * n, rng), h = random_small_poly(2 * n, rng);
    CHECK(bracket_poly(f, f, s).is_zero());
    CHECK(bracket_poly(f, g, s) == -bracket_poly(g, f, s));
    CHECK(bracket_poly(f, g * h, s) == bracket_poly(f, g, s) * h + g * bracket_poly(f, h, s));
    CHECK(bracket_poly(f, g, s) == bracket_by_partials(f, g, s));
    LaurentPoly jac = bracket_poly(f, bracket_poly(g, h, s), s) + bracket_poly(g, bracket_poly(h, f, s), s) +
                      bracket_poly(h, bracket_poly(f, g, s), s);
    CHECK(jac.is_zero());
    LaurentPoly mf = random_monomial(2 * n, rng), mg = random_monomial(2 * n, rng);
    CHECK(bracket_poly(tau(mf, n), tau(mg, n), s) == -tau(bracket_poly(mf, mg, s), n));
  }
  CHECK_THROWS_AS(bracket_poly(var(4, 0), var(n, 0), s), Error);
  PoissonStructure sab = PoissonStructure::ab(7);
  for (int trial = 0; trial < 5; ++trial) {
    LaurentPoly f = random_small_poly(14, rng), g = random_small_poly(14, rng), h = random_small_poly(14, rng);
    LaurentPoly jac = bracket_poly(f, bracket_poly(g, h, sab), sab) + bracket_poly(g, bracket_poly(h, f, sab), sab) +
                      bracket_poly(h, bracket_poly(f, g, sab), sab);
    CHECK(jac.is_zero());
  }
}

TEST_CASE("pointwise brackets") {
  std::mt19937_64 rng(2);
  const int n = 6;
  PoissonStructure s = PoissonStructure::corner(n);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Rational> pt = random_corner_point(n, rng);
    LaurentPoly f = random_small_poly(2 * n, rng), g = random_small_poly(2 * n, rng);
    auto as_expr = [](const LaurentPoly& p) {
      return [p](std::span<const DualScalar> z) {
        DualScalar acc(0);
        for (const auto& [m, c] : p.terms()) {
          DualScalar t(c);
          for (auto [v, e] : m.e)
            for (int r = 0; r < std::abs(e); ++r) t = e > 0 ? t * z[v] : t / z[v];
          acc += t;
        }
        return acc;
      };
    };
    CHECK(bracket_at_point(as_expr(f), as_expr(g), pt, s) == bracket_poly(f, g, s).eval(pt));

    auto phi = [n](int i) {
      return [n, i](std::span<const DualScalar> z) { return DualScalar(1) - z[var_x(i, n)] * z[var_y(i, n)]; };
    };
    auto x = [n](int i) { return [n, i](std::span<const DualScalar> z) { return z[var_x(i, n)]; }; };
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CHECK(bracket_at_point(phi(i), phi(j), pt, s) == 0);
        int d = (wrap(i - j + 1, n) == 0 ? 1 : 0) - (wrap(i - j - 1, n) == 0 ? 1 : 0);
        CHECK(bracket_at_point(x(i), phi(j), pt, s) == d * pt[var_x(i, n)] * pt[var_x(j, n)] * pt[var_y(j, n)]);
      }
  }
}

TEST_CASE("ab bracket is the corner bracket after the chart change") {
  std::mt19937_64 rng(3);
  for (int n : {4, 5, 7, 8}) {
    PoissonStructure sab = PoissonStructure::ab(n), sc = PoissonStructure::corner(n);
    for (int trial = 0; trial < 3; ++trial) {
      ABCoords<Rational> c = testing_support::random_ab(n, rng);
      std::vector<Rational> pt(c.a);
      pt.insert(pt.end(), c.b.begin(), c.b.end());
      std::vector<DualScalar> z = dual_point(pt);
      std::vector<DualScalar> xy(2 * n);
      for (int i = 0; i < n; ++i) {
        xy[var_x(i, n)] = z[var_a(i - 2, n)] / (z[var_b(i - 2, n)] * z[var_b(i - 1, n)]);
        xy[var_y(i, n)] = -z[var_b(i - 1, n)] / (z[var_a(i - 2, n)] * z[var_a(i - 1, n)]);
      }
      for (int p = 0; p < 2 * n; ++p)
        for (int q = 0; q < 2 * n; ++q)
          CHECK(bracket_of_duals(xy[p], xy[q], pt, sab) == sc.c(p, q) * xy[p].value() * xy[q].value());
    }
  }
}

TEST_CASE("invariance under the map") {
  for (int n : {4, 5, 7}) {
    InvarianceReport r = verify_T_invariance(n, 20, 10 + n);
    CHECK(r.exact());
    CHECK(r.points_checked + r.points_skipped == 20);
    CHECK(r.points_checked > 0);
  }
  InvarianceReport bad = verify_T_invariance(5, 3, 1, PoissonStructure::corner(5).with_flipped_entry(0, 1));
  CHECK_FALSE(bad.exact());
  CHECK(bad.counterexample.size() == 10);
}

TEST_CASE("commutation and Casimirs") {
  const int n5 = 5;
  const CornerInvariants& c5 = corner_monodromy_invariants(n5);
  PoissonStructure s5 = PoissonStructure::corner(n5);
  CHECK(bracket_poly(c5.O[0], c5.O[1], s5).is_zero());
  for (int j = 0; j < n5; ++j) CHECK(bracket_poly(c5.On, var(n5, var_x(j, n5)), s5).is_zero());
  CHECK_FALSE(bracket_poly(c5.O[0], var(n5, var_x(2, n5)), s5).is_zero());

  const CornerInvariants& c4 = corner_monodromy_invariants(4);
  PoissonStructure s4 = PoissonStructure::corner(4);
  for (int j = 0; j < 4; ++j) CHECK(bracket_poly(*c4.On2, var(4, var_y(j, 4)), s4).is_zero());

  for (int n : {4, 5, 7, 8}) {
    BracketCheckReport com = verify_commutation(n);
    CHECK(com.passed());
    CHECK(com.checked > 0);
    CHECK(verify_casimirs(n).passed());
  }
  CHECK_FALSE(verify_commutation(5, PoissonStructure::corner(5).with_flipped_entry(0, 1)).passed());
  CHECK_FALSE(verify_casimirs(5, PoissonStructure::corner(5).with_flipped_entry(0, 1)).passed());
}

TEST_CASE("corank") {
  CHECK(structure_corank(5, Chart::Corner) == 2);
  CHECK(structure_corank(7, Chart::Corner) == 2);
  CHECK(structure_corank(4, Chart::Corner) == 4);
  CHECK(structure_corank(8, Chart::Corner) == 4);
  for (int n : {4, 5, 7, 8}) {
    CHECK(structure_corank(n, Chart::AB) == structure_corank(n, Chart::Corner));
    CHECK(2 * n - structure_corank(n, Chart::Corner) == 4 * ((n - 1) / 2));
  }
}
