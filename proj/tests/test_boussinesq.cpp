#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pentagram/boussinesq.hpp"
#include "pentagram/errors.hpp"

using namespace pentagram;

namespace {

constexpr double kPi = std::numbers::pi;

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const std::vector<double>& a) {
  double m = 0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

PeriodicField test_u() { return PeriodicField::mode(1, 0.3, 0.2) + PeriodicField::constant(0.1); }
PeriodicField test_w() { return PeriodicField::mode(1, -0.1, 0.25); }

}  // namespace

TEST_CASE("periodic field calculus") {
  PeriodicField f = PeriodicField::mode(2, 1.5, -0.5) + PeriodicField::constant(0.25);
  double x = 0.37;
  double om = 4 * kPi;
  CHECK(f(x) == doctest::Approx(0.25 + 1.5 * std::cos(om * x) - 0.5 * std::sin(om * x)).epsilon(1e-14));
  CHECK(static_cast<double>(f.eval(x, 1)) ==
        doctest::Approx(-1.5 * om * std::sin(om * x) - 0.5 * om * std::cos(om * x)).epsilon(1e-13));
  CHECK(static_cast<double>(f.eval(x, 3)) == doctest::Approx(f.derivative(3)(x)).epsilon(1e-12));
  CHECK(f.derivative(2).derivative(1)(x) == doctest::Approx(f.derivative(3)(x)).epsilon(1e-12));

  PeriodicField g = PeriodicField::random_band_limited(5, 1.0, 3);
  PeriodicField h = PeriodicField::from_samples(g.sample(32));
  for (double y : {0.0, 0.13, 0.5, 0.91}) CHECK(h(y) == doctest::Approx(g(y)).epsilon(1e-12));
  CHECK_THROWS_AS(PeriodicField::from_samples(std::vector<double>(7, 0.0)), Error);
}

TEST_CASE("state validation") {
  CHECK_THROWS_AS(make_state(test_u(), test_w(), 100), Error);
  BoussinesqState s = make_state(test_u(), test_w(), 64);
  s.u[5] = std::nan("");
  try {
    rhs(s);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonFinite);
    CHECK(e.index() == 5);
  }
}

TEST_CASE("rhs against analytic derivatives") {
  SUBCASE("constants") {
    BoussinesqState s = make_state(PeriodicField::constant(1.7), PeriodicField::constant(-0.4), 64);
    BoussinesqRhs r = rhs(s);
    CHECK(max_abs(r.du) < 1e-14);
    CHECK(max_abs(r.dw) < 1e-14);
  }
  SUBCASE("single sine mode") {
    int n = 256;
    BoussinesqState s = make_state(PeriodicField::mode(1, 0.0, 1.0), PeriodicField(), n);
    BoussinesqRhs r = rhs(s);
    CHECK(max_abs(r.du) < 1e-12);
    double om = 2 * kPi, worst = 0, scale = 0;
    for (int j = 0; j < n; ++j) {
      double x = static_cast<double>(j) / n;
      double exact = -om * std::sin(om * x) * std::cos(om * x) / 3 + om * om * om * std::cos(om * x) / 12;
      worst = std::max(worst, std::abs(r.dw[j] - exact));
      scale = std::max(scale, std::abs(exact));
    }
    CHECK(worst / scale < 1e-10);
  }
  SUBCASE("shifting w leaves the u equation alone") {
    BoussinesqState s = make_state(test_u(), test_w(), 128);
    BoussinesqState t = make_state(test_u(), test_w() + PeriodicField::constant(2.5), 128);
    CHECK(max_diff(rhs(s).du, rhs(t).du) < 1e-13);
    CHECK(max_diff(rhs(s).dw, rhs(t).dw) < 1e-13);
    CHECK(functionals(t).H2 - functionals(s).H2 == doctest::Approx(2.5).epsilon(1e-13));
  }
}

TEST_CASE("second-order form along a trajectory") {
  // ü = −(u²)''/6 − u''''/12, checked with a central difference in time.
  int n = 64;
  PeriodicField u0 = PeriodicField::random_band_limited(4, 0.4, 11);
  BoussinesqState s = make_state(u0, PeriodicField::random_band_limited(4, 0.4, 12), n);
  double h = 4e-4;
  int sub = 8;
  auto advance = [&](BoussinesqState st, double dt) {
    for (int i = 0; i < sub; ++i) st = step(st, dt / sub);
    return st;
  };
  BoussinesqState plus = advance(s, h), minus = advance(s, -h);
  BoussinesqState plus2 = advance(s, h / 2), minus2 = advance(s, -h / 2);
  PeriodicField uf = PeriodicField::from_samples(s.u);
  std::vector<double> u2(n);
  for (int j = 0; j < n; ++j) u2[j] = s.u[j] * s.u[j];
  PeriodicField u2f = PeriodicField::from_samples(u2);
  double worst = 0, scale = 0;
  for (int j = 0; j < n; ++j) {
    double x = static_cast<double>(j) / n;
    double d1 = (plus.u[j] - 2 * s.u[j] + minus.u[j]) / (h * h);
    double d2 = (plus2.u[j] - 2 * s.u[j] + minus2.u[j]) / (h * h / 4);
    double udd = (4 * d2 - d1) / 3;
    double expect = -static_cast<double>(u2f.eval(x, 2)) / 6 - static_cast<double>(uf.eval(x, 4)) / 12;
    worst = std::max(worst, std::abs(udd - expect));
    scale = std::max(scale, std::abs(expect));
  }
  CHECK(worst / scale < 1e-6);
}

TEST_CASE("time stepping") {
  SUBCASE("zero stays zero") {
    BoussinesqState s = make_state(PeriodicField(), PeriodicField(), 64);
    for (int i = 0; i < 50; ++i) s = step(s, default_dt(64));
    CHECK(max_abs(s.u) == 0.0);
    CHECK(max_abs(s.w) == 0.0);
  }
  SUBCASE("forward then backward") {
    BoussinesqState s = make_state(PeriodicField::mode(1, 0.0, 1.0), PeriodicField::mode(1, 0.5, 0.0), 16);
    double e1 = 0, e2 = 0;
    for (double dt : {4e-3, 2e-3}) {
      BoussinesqState r = step(step(s, dt), -dt);
      double e = std::max(max_diff(r.u, s.u), max_diff(r.w, s.w));
      (dt > 3e-3 ? e1 : e2) = e;
    }
    CHECK(e1 < 1e-5);
    // Local error is O(dt^5): halving dt cuts it by about 32.
    CHECK(e1 / e2 > 20);
  }
  SUBCASE("fourth order in dt") {
    int n = 32;
    double t_end = 0.05;
    auto run = [&](int steps) {
      BoussinesqState s = make_state(PeriodicField::mode(1, 0, 1.0), PeriodicField::mode(1, 0.5, 0), n);
      for (int i = 0; i < steps; ++i) s = step(s, t_end / steps);
      return s;
    };
    BoussinesqState ref = run(320);
    double e0 = max_diff(run(40).u, ref.u), e1 = max_diff(run(80).u, ref.u);
    CHECK(std::log2(e0 / e1) == doctest::Approx(4.0).epsilon(0.1));
  }
  SUBCASE("blowup is reported") {
    // Far beyond the explicit limit the top retained mode grows every step.
    int n = 64;
    BoussinesqState s = make_state(PeriodicField::random_band_limited(20, 0.5, 4), PeriodicField(), n);
    double dt = 4.0 / (n * n);
    bool threw = false;
    try {
      for (int i = 0; i < 2000; ++i) s = step(s, dt);
    } catch (const Error& e) {
      threw = e.code() == Errc::Instability;
    }
    CHECK(threw);
  }
}

TEST_CASE("first integrals") {
  BoussinesqState z = make_state(PeriodicField(), PeriodicField(), 32);
  FunctionalValue f = functionals(z);
  CHECK(f.H1 == 0.0);
  CHECK(f.H == 0.0);

  // u = cos 2πx, w = 1: H1 = 0, H2 = 1, H3 = 0, H = 1/2 − 0 + (2π)²/48.
  BoussinesqState s = make_state(PeriodicField::mode(1, 1.0, 0.0), PeriodicField::constant(1.0), 64);
  FunctionalValue g = functionals(s);
  CHECK(std::abs(g.H1) < 1e-15);
  CHECK(g.H2 == doctest::Approx(1.0));
  CHECK(std::abs(g.H3) < 1e-15);
  CHECK(g.H == doctest::Approx(0.5 + 4 * kPi * kPi / 48).epsilon(1e-13));
}

TEST_CASE("short run conserves the first integrals") {
  int n = 64;
  BoussinesqState s = make_state(PeriodicField::random_band_limited(4, 0.5, 21),
                                 PeriodicField::random_band_limited(4, 0.5, 22) + PeriodicField::constant(0.2), n);
  FunctionalValue f0 = functionals(s);
  for (int i = 0; i < 2000; ++i) s = step(s, default_dt(n));
  FunctionalValue f1 = functionals(s);
  CHECK(std::abs(f1.H1 - f0.H1) < 1e-13);
  CHECK(std::abs(f1.H2 - f0.H2) < 1e-13);
  CHECK(std::abs(f1.H3 - f0.H3) < 1e-9 * std::abs(f0.H3));
  CHECK(std::abs(f1.H - f0.H) < 1e-9 * std::abs(f0.H));
}

TEST_CASE("hamiltonian form") {
  BoussinesqState s = make_state(PeriodicField::random_band_limited(6, 0.5, 5),
                                 PeriodicField::random_band_limited(6, 0.5, 6), 256);
  CHECK(hamiltonian_consistency(s) < 1e-10);
  HamiltonianDensity wrong;
  wrong.u3 = -wrong.u3;
  CHECK(hamiltonian_consistency(s, wrong) > 1e-2);
  HamiltonianDensity wrong2;
  wrong2.uu2 = -wrong2.uu2;
  CHECK(hamiltonian_consistency(s, wrong2) > 1e-2);

  BoussinesqState t = make_state(PeriodicField(), PeriodicField::random_band_limited(6, 0.5, 7), 64);
  CHECK(hamiltonian_consistency(t) < 1e-12);
}

TEST_CASE("discretization coefficients") {
  PeriodicField u = test_u(), w = test_w();
  std::vector<double> eps = default_eps_list();
  for (double x : {0.1, 0.45, 0.8}) {
    ExpansionFit f = discretization_expansion(u, w, x, eps);
    double ux = u(x), up = u.derivative(1)(x), wx = w(x);
    CAPTURE(x);
    CHECK(f.max_unit_gap < 1e-10);
    CHECK(std::abs(f.a[0] - 3) < 1e-6);
    CHECK(std::abs(f.b[0] + 3) < 1e-6);
    CHECK(std::abs(f.a[1]) < 1e-5);
    CHECK(std::abs(f.b[1]) < 1e-5);
    CHECK(std::abs(f.a[2] + ux) < 1e-4);
    CHECK(std::abs(f.b[2] - ux) < 1e-4);
    CHECK(std::abs(f.a[3] - (-1.75 * up - wx / 2)) < 1e-3);
    CHECK(std::abs(f.b[3] - (1.25 * up - wx / 2)) < 1e-3);
  }
  std::vector<double> few{0.01, 0.02, 0.03};
  CHECK_THROWS_AS(discretization_expansion(u, w, 0.2, few), Error);
}

TEST_CASE("envelope of chords") {
  PeriodicField u = test_u(), w = test_w();
  SUBCASE("flat case is exact") {
    CHECK(curve_flow_check(PeriodicField(), PeriodicField(), 0.3, 0.05) < 1e-10);
    CHECK(curve_flow_check(PeriodicField(), PeriodicField(), 0.7, 0.01) < 1e-8);
  }
  SUBCASE("second-order term") {
    double prev = 1e9;
    for (double e : {0.08, 0.04, 0.02, 0.01}) {
      double r = curve_flow_check(u, w, 0.35, e);
      CHECK(r < 1.0);
      CHECK(r < prev * 1.01);
      prev = r;
    }
  }
  SUBCASE("flow velocity") {
    std::vector<double> eps{0.01, 0.014, 0.02, 0.028, 0.04};
    for (double x : {0.1, 0.5, 0.85}) {
      FlowVelocity v = envelope_flow_velocity(u, w, x, eps);
      CHECK(std::abs(v.estimate - v.expected) < 1e-4);
    }
  }
}
