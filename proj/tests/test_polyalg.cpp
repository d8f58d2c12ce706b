#include <doctest.h>

#include <random>

#include "pentagram/invariants.hpp"
#include "pentagram/polyalg.hpp"
#include "support.hpp"

using namespace pentagram;
using testing_support::small_rational;

namespace {

LaurentPoly random_poly(int nv, std::mt19937_64& rng, int terms = 5, bool laurent = false) {
  LaurentPoly f(nv);
  std::uniform_int_distribution<int> var(0, nv - 1), ex(laurent ? -2 : 0, 3);
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    for (int f2 = 0; f2 < 3; ++f2) m = m * Monomial::var(var(rng), ex(rng));
    f.add_term(m, small_rational(rng));
  }
  return f;
}

std::vector<Rational> random_point(int nv, std::mt19937_64& rng) {
  std::vector<Rational> p(nv);
  for (auto& v : p) v = small_rational(rng);
  return p;
}

}  // namespace

TEST_CASE("ring identities") {
  const int nv = 4;
  LaurentPoly x = LaurentPoly::variable(nv, 0), y = LaurentPoly::variable(nv, 1);
  LaurentPoly zero(nv), one = LaurentPoly::constant(nv, 1);
  CHECK((x + zero) == x);
  CHECK((x * one) == x);
  CHECK(((x + y) * (x - y)) == (x * x - y * y));
  CHECK_THROWS_AS(x + LaurentPoly::variable(3, 0), Error);

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    LaurentPoly f = random_poly(nv, rng, 5, true), g = random_poly(nv, rng, 5, true), h = random_poly(nv, rng, 4, true);
    CHECK(((f * g) * h) == (f * (g * h)));
    CHECK((f * (g + h)) == (f * g + f * h));
    CHECK((f * g) == (g * f));
    CHECK((f - f).is_zero());
    std::vector<Rational> p = random_point(nv, rng);
    CHECK((f * g).eval(p) == f.eval(p) * g.eval(p));
  }
}

TEST_CASE("partial derivatives") {
  const int nv = 2;
  LaurentPoly x = LaurentPoly::variable(nv, 0);
  CHECK(poly_partial(x * x, 0) == x * Rational(2));
  LaurentPoly xinv = LaurentPoly::monomial(nv, Monomial::var(0, -1));
  CHECK(poly_partial(xinv, 0) == LaurentPoly::monomial(nv, Monomial::var(0, -2), Rational(-1)));
  CHECK(poly_partial(x, 1).is_zero());

  // ∂O_1/∂x_j for n = 5 from the closed form O_1 = Σ(x_i y_i x_{i+1} − x_i).
  const int n = 5;
  const LaurentPoly& O1 = corner_monodromy_invariants(n).O[0];
  for (int j = 0; j < n; ++j) {
    LaurentPoly expect(2 * n);
    expect.add_term(Monomial::var(var_y(j, n)) * Monomial::var(var_x(j + 1, n)), 1);
    expect.add_term(Monomial::var(var_x(j - 1, n)) * Monomial::var(var_y(j - 1, n)), 1);
    expect.add_term(Monomial::one(), -1);
    CHECK(O1.partial(var_x(j, n)) == expect);
    LaurentPoly ey(2 * n);
    ey.add_term(Monomial::var(var_x(j, n)) * Monomial::var(var_x(j + 1, n)), 1);
    CHECK(O1.partial(var_y(j, n)) == ey);
  }
}

TEST_CASE("evaluation") {
  CHECK(LaurentPoly::constant(3, Rational(7, 2)).eval(std::vector<Rational>{1, 2, 3}) == Rational(7, 2));
  LaurentPoly xinv = LaurentPoly::monomial(1, Monomial::var(0, -1));
  CHECK_THROWS_AS(xinv.eval(std::vector<Rational>{0}), Error);
  CHECK(xinv.eval(std::vector<Rational>{Rational(2, 3)}) == Rational(3, 2));

  // O_2 at the all-ones point, n = 5, against the subset enumeration.
  const int n = 5;
  std::vector<Rational> ones(2 * n, Rational(1));
  auto brute = testing_support::brute_force_O(n);
  CHECK(corner_monodromy_invariants(n).O[1].eval(ones) == brute[2].eval(ones));
  CHECK(corner_monodromy_invariants(n).O[1].eval(ones) == 0);

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    LaurentPoly f = random_poly(4, rng, 8, true);
    std::vector<Rational> p = random_point(4, rng);
    CompiledPoly<Rational> cf(f);
    CHECK(cf(p) == f.eval(p));
    std::vector<double> pd;
    for (const auto& v : p) pd.push_back(v.get_d());
    CHECK(CompiledPoly<double>(f)(pd) == doctest::Approx(f.eval(p).get_d()).epsilon(1e-10));
  }
}

TEST_CASE("weight grading") {
  const int n = 5;
  const CornerInvariants& ci = corner_monodromy_invariants(n);
  auto parts = ci.On.weight_components(corner_weights(n));
  REQUIRE(parts.size() == 1);
  CHECK(parts.begin()->first == n);
  auto eparts = ci.En.weight_components(corner_weights(n));
  CHECK(eparts.begin()->first == -n);
  auto cparts = LaurentPoly::constant(4, 3).weight_components({1, 1, 1, 1});
  REQUIRE(cparts.size() == 1);
  CHECK(cparts.begin()->first == 0);

  const TraceInvariants& ti = trace_invariants(4);
  auto fparts = ti.F.weight_components(ab_weights(4));
  std::vector<long> keys;
  LaurentPoly sum(8);
  for (const auto& [w, p] : fparts) {
    keys.push_back(w);
    sum += p;
  }
  CHECK(keys == std::vector<long>{-2, 1, 4});
  CHECK(sum == ti.F);
}

TEST_CASE("substitution and relabeling") {
  const int nv = 3;
  LaurentPoly x = LaurentPoly::variable(nv, 0), y = LaurentPoly::variable(nv, 1), z = LaurentPoly::variable(nv, 2);
  LaurentPoly f = x * y + z * Rational(3);
  CHECK(f.substitute({y, x, z * z}) == (y * x + z * z * Rational(3)));
  CHECK(f.relabel({1, 2, 0}) == (y * z + x * Rational(3)));
  LaurentPoly g = LaurentPoly::monomial(nv, Monomial::var(0, -2));
  CHECK(g.substitute({LaurentPoly::monomial(nv, Monomial::var(1), 2), y, z}) ==
        LaurentPoly::monomial(nv, Monomial::var(1, -2), Rational(1, 4)));
  CHECK_THROWS_AS(g.substitute({x + y, y, z}), Error);
}

TEST_CASE("dual numbers follow the Leibniz and quotient rules") {
  std::mt19937_64 rng(4);
  const int nv = 3;
  for (int trial = 0; trial < 20; ++trial) {
    LaurentPoly p = random_poly(nv, rng, 4), q = random_poly(nv, rng, 4);
    std::vector<Rational> pt = random_point(nv, rng);
    if (sgn(q.eval(pt)) == 0) continue;
    std::vector<DualScalar> z;
    for (int v = 0; v < nv; ++v) z.push_back(DualScalar::variable(pt[v], v));
    // Evaluate p and q through dual arithmetic term by term.
    auto dual_eval = [&](const LaurentPoly& f) {
      DualScalar acc(0);
      for (const auto& [m, c] : f.terms()) {
        DualScalar t(c);
        for (auto [v, e] : m.e)
          for (int r = 0; r < e; ++r) t = t * z[v];
        acc = acc + t;
      }
      return acc;
    };
    DualScalar dp = dual_eval(p), dq = dual_eval(q);
    DualScalar prod = dp * dq, quot = dp / dq;
    Rational qv = q.eval(pt);
    for (int v = 0; v < nv; ++v) {
      Rational pv = p.partial(v).eval(pt), qd = q.partial(v).eval(pt);
      CHECK(prod.d(v) == (p * q).partial(v).eval(pt));
      CHECK(quot.d(v) == (pv * qv - p.eval(pt) * qd) / (qv * qv));
    }
  }
  CHECK_THROWS_AS(DualScalar(1) / DualScalar(0), Error);
}

TEST_CASE("ranks") {
  std::vector<std::vector<Rational>> rows = {{1, 2, 3}, {2, 4, 6}, {0, 1, 1}};
  CHECK(exact_rank(rows) == 2);
  CHECK(exact_rank({{0, 0}, {0, 0}}) == 0);
  CHECK(numeric_rank({{1, 2, 3}, {2, 4, 6}, {0, 1, 1}}) == 2);
  CHECK(numeric_rank({{1, 0}, {0, 1e-3}}) == 2);
}
