#include <doctest.h>

#include <random>

#include "pentagram/projgeo.hpp"
#include "support.hpp"

using namespace pentagram;
using testing_support::small_rational;

namespace {

Vec3<Rational> rvec(std::mt19937_64& rng) {
  return {small_rational(rng), small_rational(rng), small_rational(rng)};
}

}  // namespace

TEST_CASE("scalar cross-ratio") {
  CHECK(cross_ratio<Rational>(0, 1, 2, 3) == Rational(1, 4));
  CHECK(cross_ratio<Rational>(0, 1, 3, 4) == Rational(1, 9));
  CHECK(cross_ratio<Rational>(2, 5, 5, 11) == 1);
  CHECK_THROWS_AS(cross_ratio<Rational>(1, 2, 1, 3), Error);
  try {
    cross_ratio<Rational>(1, 2, 1, 3);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateCrossRatio);
  }
}

TEST_CASE("cross-ratio of collinear points") {
  // Points (t, 1, 1) on the line y = z.
  auto pt = [](long t) { return make_point<Rational>({Rational(t), 1, 1}); };
  CHECK(cross_ratio_points(pt(0), pt(1), pt(2), pt(3)) == Rational(1, 4));
  // Scaling the homogeneous representatives changes nothing.
  auto p2 = make_point<Rational>({4, 2, 2});
  CHECK(cross_ratio_points(pt(0), pt(1), p2, pt(3)) == Rational(1, 4));
  CHECK_THROWS_AS(cross_ratio_points(pt(0), pt(1), pt(2), make_point<Rational>({0, 0, 1})), Error);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Vec3<Rational> a = rvec(rng), b = rvec(rng);
    Rational l1 = small_rational(rng), l2 = small_rational(rng), m1 = small_rational(rng), m2 = small_rational(rng);
    if (l2 * m1 == 0 || l1 * m2 == l2 * m1) continue;
    Vec3<Rational> c = add(scale(l1, a), scale(l2, b)), d = add(scale(m1, a), scale(m2, b));
    Rational expect = (l2 * m1 - l1 * m2) / (l2 * m1);
    CHECK(cross_ratio_vectors(a, b, c, d) == expect);
  }
}

TEST_CASE("projective invariance of the cross-ratio") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Vec3<Rational> a = rvec(rng), b = rvec(rng);
    if (is_zero_vec(cross(a, b))) continue;
    std::vector<ProjPoint<Rational>> pts;
    for (int k = 0; k < 4; ++k) pts.push_back(make_point(add(scale(Rational(k + 1), a), scale(Rational(k * k - 3), b))));
    ProjMap<Rational> g = make_map<Rational>({{{1, 2, 0}, {0, 1, 3}, {-1, 0, 2}}});
    Rational before = cross_ratio_points(pts[0], pts[1], pts[2], pts[3]);
    Rational after = cross_ratio_points(apply(g, pts[0]), apply(g, pts[1]), apply(g, pts[2]), apply(g, pts[3]));
    CHECK(before == after);
  }
}

TEST_CASE("join and meet") {
  auto e1 = make_point<Rational>({1, 0, 0});
  auto e2 = make_point<Rational>({0, 1, 0});
  ProjLine<Rational> l = join(e1, e2);
  CHECK(proportional(l.l, Vec3<Rational>{0, 0, 1}));
  CHECK_THROWS_AS(join(e1, make_point<Rational>({2, 0, 0})), Error);
  CHECK_THROWS_AS(meet(l, ProjLine<Rational>{{0, 0, 5}}), Error);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = make_point(rvec(rng)), q = make_point(rvec(rng)), r = make_point(rvec(rng)), s = make_point(rvec(rng));
    ProjPoint<Rational> m = meet(join(p, q), join(r, s));
    CHECK(proportional(m.h, cross(cross(p.h, q.h), cross(r.h, s.h))));
    CHECK(incident(m, join(p, q)));
    CHECK(incident(m, join(r, s)));
    CHECK(same_point(meet(join(p, q), join(p, r)), p));
  }
}

TEST_CASE("determinant identities") {
  CHECK(triple_det<Rational>({1, 0, 0}, {0, 1, 0}, {0, 0, 1}) == 1);
  Vec3<Rational> v{2, 3, 5};
  CHECK(triple_det(v, v, Vec3<Rational>{1, 1, 1}) == 0);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    Vec3<Rational> a = rvec(rng), b = rvec(rng), c = rvec(rng);
    CHECK(cross(cross(a, b), cross(b, c)) == scale(triple_det(a, b, c), b));
  }
}

TEST_CASE("maps act on points and compose") {
  auto p = make_point<Rational>({2, -1, 3});
  CHECK(same_point(apply(make_map(identity3<Rational>()), p), p));
  ProjMap<Rational> d = make_map<Rational>({{{2, 0, 0}, {0, 3, 0}, {0, 0, 5}}});
  CHECK(apply(d, p).h == Vec3<Rational>{4, -3, 15});

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    Mat3<Rational> a, b, c;
    for (auto* m : {&a, &b, &c})
      for (auto& row : *m)
        for (auto& e : row) e = small_rational(rng);
    CHECK(mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c)));
    Vec3<Rational> h = rvec(rng);
    CHECK(apply(compose(make_map(a), make_map(b)), make_point(h)).h == mat_vec(a, mat_vec(b, h)));
  }
}

TEST_CASE("float mode tolerances") {
  auto pt = [](double t) { return make_point<double>({t, 1.0, 1.0}); };
  CHECK(cross_ratio_points(pt(0), pt(1), pt(2), pt(3)) == doctest::Approx(0.25).epsilon(1e-12));
  auto off = make_point<double>({3.0, 1.0 + 1e-13, 1.0});
  CHECK(cross_ratio_points(pt(0), pt(1), pt(2), off) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK_THROWS_AS(cross_ratio_points(pt(0), pt(1), pt(2), make_point<double>({3.0, 1.1, 1.0})), Error);
}
