#include "pentagram/polygon.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace pentagram {

namespace {

template <class T>
bool triple_degenerate(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c, double tol) {
  T d = triple_det(a, b, c);
  if constexpr (is_exact_v<T>) {
    return sgn(d) == 0;
  } else {
    double scale = max_abs(a) * max_abs(b) * max_abs(c);
    return !(std::abs(d) > tol * scale);
  }
}

template <class T>
bool is_zero_scalar(const T& v) {
  if constexpr (is_exact_v<T>) return sgn(v) == 0;
  else return v == 0.0;
}

}  // namespace

template <class T>
TwistedPolygon<T>::TwistedPolygon(std::vector<ProjPoint<T>> vertices, ProjMap<T> monodromy, double tol)
    : vertices_(std::move(vertices)), monodromy_(monodromy), adj_(adjugate(monodromy.m)), tol_(tol) {
  if (vertices_.size() < 3) throw Error(Errc::InvalidParameters, "need at least three vertices");
  if (is_zero_scalar(det3(monodromy_.m))) throw Error(Errc::InvalidParameters, "singular monodromy");
  for (int i = 0; i < n(); ++i)
    if (triple_degenerate(vertex(i), vertex(i + 1), vertex(i + 2), tol_ * 1e-3))
      throw Error(Errc::DegenerateConfiguration, i, "three consecutive vertices are collinear");
}

template <class T>
Vec3<T> TwistedPolygon<T>::vertex(long k) const {
  int nn = n();
  long q = k >= 0 ? k / nn : -((-k + nn - 1) / nn);
  Vec3<T> v = vertices_[static_cast<std::size_t>(k - q * nn)].h;
  for (long s = 0; s < q; ++s) v = normalized(mat_vec(monodromy_.m, v));
  for (long s = 0; s > q; --s) v = normalized(mat_vec(adj_, v));
  return v;
}

template <class T>
bool CornerCoords<T>::generic(double tol) const {
  for (int i = 0; i < n(); ++i) {
    T z = x[i] * y[i];
    if (ScalarTraits<T>::is_zero(T(z - T(1)), is_exact_v<T> ? 0.0 : tol)) return false;
  }
  return true;
}

template <class T>
ABCoords<T>::ABCoords(std::vector<T> a_, std::vector<T> b_) : a(std::move(a_)), b(std::move(b_)) {
  if (a.size() != b.size() || a.empty()) throw Error(Errc::ArityMismatch, "a and b sizes differ");
  if (a.size() % 3 == 0) throw Error(Errc::DivisibleByThree);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!ScalarTraits<T>::finite(a[i]) || !ScalarTraits<T>::finite(b[i])) throw Error(Errc::NonFinite, int(i));
}

template <class T>
ABCoords<T> ABCoords<T>::any_n(std::vector<T> a_, std::vector<T> b_) {
  if (a_.size() != b_.size() || a_.empty()) throw Error(Errc::ArityMismatch, "a and b sizes differ");
  ABCoords c;
  c.a = std::move(a_);
  c.b = std::move(b_);
  return c;
}

template <class T>
std::vector<T> cyclic_triple_ratios(const std::vector<T>& r) {
  int n = static_cast<int>(r.size());
  if (n % 3 == 0) throw Error(Errc::DivisibleByThree);
  for (int i = 0; i < n; ++i)
    if (is_zero_scalar(r[i])) throw Error(Errc::DegenerateConfiguration, i, "zero right-hand side");
  // Dividing consecutive equations gives t_{i+3} / t_i = r_{i+1} / r_i, and
  // i -> i+3 visits every residue once.
  std::vector<T> rho(n, T(0));
  rho[0] = T(1);
  int i = 0;
  for (int step = 1; step < n; ++step) {
    int j = (i + 3) % n;
    rho[j] = T(rho[i] * r[(i + 1) % n] / r[i]);
    i = j;
  }
  return rho;
}

template <class T>
std::vector<T> solve_cyclic_triple(const std::vector<T>& r) {
  std::vector<T> rho = cyclic_triple_ratios(r);
  int n = static_cast<int>(r.size());
  T cube = T(r[0] / (rho[1 % n] * rho[2 % n]));
  auto t0 = cube_root(cube);
  if (!t0) throw Error(Errc::NonRationalLift, "cube root of " + (is_exact_v<T> ? std::string("a rational") : ""));
  for (auto& v : rho) v = T(v * *t0);
  return rho;
}

template <class T>
Mat3<T> unimodular(const Mat3<T>& m) {
  T d = det3(m);
  auto c = cube_root(d);
  if (!c) throw Error(Errc::NonRationalLift, "monodromy determinant is not a cube");
  T inv = T(T(1) / *c);
  return mat_scale(inv, m);
}

template <class T>
CornerCoords<T> corner_coords(const TwistedPolygon<T>& p) {
  int n = p.n();
  double tol = p.tolerance();
  CornerCoords<T> c;
  c.x.resize(n);
  c.y.resize(n);
  for (int i = 0; i < n; ++i) {
    try {
      Vec3<T> vm2 = p.vertex(i - 2), vm1 = p.vertex(i - 1), v0 = p.vertex(i), v1 = p.vertex(i + 1),
              v2 = p.vertex(i + 2);
      Vec3<T> l01 = cross(vm2, vm1);  // line through v_{i-2}, v_{i-1}
      Vec3<T> l12 = cross(vm1, v0);
      Vec3<T> l34 = cross(v0, v1);
      Vec3<T> l45 = cross(v1, v2);
      Vec3<T> p1 = cross(l01, l34);
      Vec3<T> p2 = cross(l01, l45);
      Vec3<T> q2 = cross(l12, l45);
      c.x[i] = cross_ratio_vectors(vm2, vm1, p1, p2, tol);
      c.y[i] = cross_ratio_vectors(p2, q2, v1, v2, tol);
    } catch (const Error&) {
      throw Error(Errc::DegenerateConfiguration, i, "corner cross-ratio undefined");
    }
  }
  return c;
}

namespace {

// Lift with V_{k+n} = M̂ V_k where M̂ is unimodular; returns V_0 .. V_{n+2}.
template <class T>
std::vector<Vec3<T>> raw_lift(const TwistedPolygon<T>& p, const Mat3<T>& mh) {
  int n = p.n();
  std::vector<Vec3<T>> v(n + 3);
  for (int k = 0; k < n; ++k) v[k] = p.vertices()[k].h;
  for (int k = n; k < n + 3; ++k) v[k] = mat_vec(mh, v[k - n]);
  return v;
}

template <class T>
std::vector<T> lift_rhs(const std::vector<Vec3<T>>& v, int n) {
  std::vector<T> r(n);
  for (int i = 0; i < n; ++i) {
    T d = triple_det(v[i], v[i + 1], v[i + 2]);
    if (is_zero_scalar(d)) throw Error(Errc::DegenerateConfiguration, i);
    r[i] = T(T(1) / d);
  }
  return r;
}

}  // namespace

template <class T>
LiftSolution<T> canonical_lift(const TwistedPolygon<T>& p) {
  int n = p.n();
  if (n % 3 == 0) throw Error(Errc::DivisibleByThree);
  Mat3<T> mh = unimodular(p.monodromy().m);
  std::vector<Vec3<T>> v = raw_lift(p, mh);
  LiftSolution<T> s;
  s.t = solve_cyclic_triple(lift_rhs(v, n));
  s.lifted.resize(n);
  for (int k = 0; k < n; ++k) s.lifted[k] = scale(s.t[k], v[k]);
  return s;
}

template <class T>
ABCoords<T> ab_coords(const TwistedPolygon<T>& p) {
  int n = p.n();
  if (n % 3 == 0) throw Error(Errc::DivisibleByThree);
  Mat3<T> mh = unimodular(p.monodromy().m);
  std::vector<Vec3<T>> v = raw_lift(p, mh);
  // The coefficients are homogeneous of degree zero in a common rescaling of
  // the lift, so t_i / t_0 suffices and no cube root is taken here.
  std::vector<T> rho = cyclic_triple_ratios(lift_rhs(v, n));
  for (int k = 0; k < n + 3; ++k) v[k] = scale(rho[k % n], v[k]);
  std::vector<T> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    T d = triple_det(v[i], v[i + 1], v[i + 2]);
    a[i] = T(triple_det(v[i], v[i + 1], v[i + 3]) / d);
    b[i] = T(triple_det(v[i], v[i + 3], v[i + 2]) / d);
  }
  return ABCoords<T>(std::move(a), std::move(b));
}

template <class T>
Obstruction<T> obstruction(const TwistedPolygon<T>& p, std::vector<T>* t_out) {
  int n = p.n();
  if (n % 3 != 0) throw Error(Errc::NotDivisibleByThree);
  Mat3<T> mh = unimodular(p.monodromy().m);
  // V_0, V_1 as given, later vectors rescaled to unit consecutive determinant.
  std::vector<Vec3<T>> v(n + 3);
  v[0] = p.vertex(0);
  v[1] = p.vertex(1);
  for (int k = 2; k < n + 3; ++k) {
    Vec3<T> w = p.vertex(k);
    T d = triple_det(v[k - 2], v[k - 1], w);
    if (is_zero_scalar(d)) throw Error(Errc::DegenerateConfiguration, k - 2);
    v[k] = scale(T(T(1) / d), w);
  }
  std::vector<T> t(3);
  for (int i = 0; i < 3; ++i) {
    Vec3<T> mv = mat_vec(mh, v[i]);
    const Vec3<T>& target = v[i + n];
    int j = 0;
    T best = ScalarTraits<T>::abs(target[0]);
    for (int c = 1; c < 3; ++c)
      if (ScalarTraits<T>::abs(target[c]) > best) {
        best = ScalarTraits<T>::abs(target[c]);
        j = c;
      }
    t[i] = T(mv[j] / target[j]);
  }
  if (t_out) *t_out = t;
  return {t[1], t[2]};
}

template <class T>
std::vector<Vec3<T>> iterate_recurrence(const ABCoords<T>& c, const Seed<T>& seed, int count) {
  int n = c.n();
  std::vector<Vec3<T>> v(std::max(count, 3));
  for (int k = 0; k < 3; ++k) v[k] = seed[k];
  for (int k = 0; k + 3 < count; ++k) {
    const T& a = c.a[k % n];
    const T& b = c.b[k % n];
    v[k + 3] = add(add(scale(a, v[k + 2]), scale(b, v[k + 1])), v[k]);
  }
  v.resize(count);
  return v;
}

template <class T>
TwistedPolygon<T> reconstruct_from_ab(const ABCoords<T>& c, const Seed<T>& seed) {
  int n = c.n();
  T d = triple_det(seed[0], seed[1], seed[2]);
  if (!ScalarTraits<T>::near(d, T(1), 1e-12)) throw Error(Errc::InvalidParameters, "seed determinant must be 1");
  std::vector<Vec3<T>> v = iterate_recurrence(c, seed, n + 3);
  for (int k = 0; k < n; ++k)
    if (triple_degenerate(v[k], v[k + 1], v[k + 2], 1e-13)) throw Error(Errc::DegenerateRecurrence, k);
  Mat3<T> src = from_columns(v[0], v[1], v[2]);
  Mat3<T> dst = from_columns(v[n], v[n + 1], v[n + 2]);
  Mat3<T> m = mat_mul(dst, inverse3(src));
  std::vector<ProjPoint<T>> pts;
  pts.reserve(n);
  for (int k = 0; k < n; ++k) pts.push_back({normalized(v[k])});
  return TwistedPolygon<T>(std::move(pts), ProjMap<T>{m});
}

template <class T>
CornerCoords<T> corner_from_ab(const ABCoords<T>& c) {
  int n = c.n();
  for (int i = 0; i < n; ++i) {
    if (is_zero_scalar(c.a[i])) throw Error(Errc::ZeroCoefficient, i, "a");
    if (is_zero_scalar(c.b[i])) throw Error(Errc::ZeroCoefficient, i, "b");
  }
  CornerCoords<T> r;
  r.x.resize(n);
  r.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const T& am2 = c.a[wrap(i - 2, n)];
    const T& am1 = c.a[wrap(i - 1, n)];
    const T& bm2 = c.b[wrap(i - 2, n)];
    const T& bm1 = c.b[wrap(i - 1, n)];
    r.x[i] = T(am2 / (bm2 * bm1));
    r.y[i] = T(-bm1 / (am2 * am1));
  }
  return r;
}

template <class T>
ABCoords<T> ab_from_corner(const CornerCoords<T>& c) {
  int n = c.n();
  if (n % 3 == 0) throw Error(Errc::DivisibleByThree);
  for (int i = 0; i < n; ++i)
    if (is_zero_scalar(c.x[i]) || is_zero_scalar(c.y[i])) throw Error(Errc::ZeroCoordinate, i);
  // b_j b_{j+1} b_{j+2} = −1 / (x_{j+2} x_{j+3} y_{j+2})
  std::vector<T> rhs(n);
  for (int j = 0; j < n; ++j) {
    int i = (j + 2) % n;
    rhs[j] = T(T(-1) / (c.x[i] * c.x[(i + 1) % n] * c.y[i]));
  }
  std::vector<T> b = solve_cyclic_triple(rhs);
  std::vector<T> a(n);
  for (int j = 0; j < n; ++j) a[j] = T(c.x[(j + 2) % n] * b[j] * b[(j + 1) % n]);
  return ABCoords<T>(std::move(a), std::move(b));
}

template <class T>
std::optional<int> corner_shift(const CornerCoords<T>& c, const CornerCoords<T>& d, double tol) {
  int n = c.n();
  if (d.n() != n) return std::nullopt;
  for (int s = 0; s < n; ++s) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      int j = (i + s) % n;
      ok = ScalarTraits<T>::near(c.x[j], d.x[i], tol) && ScalarTraits<T>::near(c.y[j], d.y[i], tol);
    }
    if (ok) return s;
  }
  return std::nullopt;
}

template <class T>
bool projectively_equivalent(const TwistedPolygon<T>& p, const TwistedPolygon<T>& q, double tol) {
  if (p.n() != q.n()) throw Error(Errc::ArityMismatch, "polygon sizes differ");
  return corner_shift(corner_coords(p), corner_coords(q), tol).has_value();
}

template <class T>
TwistedPolygon<T> transform(const ProjMap<T>& g, const TwistedPolygon<T>& p) {
  std::vector<ProjPoint<T>> pts;
  pts.reserve(p.n());
  for (const auto& v : p.vertices()) pts.push_back(apply(g, v));
  Mat3<T> m = mat_mul(mat_mul(g.m, p.monodromy().m), adjugate(g.m));
  return TwistedPolygon<T>(std::move(pts), ProjMap<T>{m}, p.tolerance());
}

#define PENTAGRAM_INSTANTIATE(T)                                                                   \
  template class TwistedPolygon<T>;                                                                \
  template struct CornerCoords<T>;                                                                 \
  template class ABCoords<T>;                                                                      \
  template std::vector<T> cyclic_triple_ratios(const std::vector<T>&);                             \
  template std::vector<T> solve_cyclic_triple(const std::vector<T>&);                              \
  template Mat3<T> unimodular(const Mat3<T>&);                                                     \
  template CornerCoords<T> corner_coords(const TwistedPolygon<T>&);                                \
  template LiftSolution<T> canonical_lift(const TwistedPolygon<T>&);                               \
  template ABCoords<T> ab_coords(const TwistedPolygon<T>&);                                        \
  template Obstruction<T> obstruction(const TwistedPolygon<T>&, std::vector<T>*);                  \
  template std::vector<Vec3<T>> iterate_recurrence(const ABCoords<T>&, const Seed<T>&, int);       \
  template TwistedPolygon<T> reconstruct_from_ab(const ABCoords<T>&, const Seed<T>&);              \
  template CornerCoords<T> corner_from_ab(const ABCoords<T>&);                                     \
  template ABCoords<T> ab_from_corner(const CornerCoords<T>&);                                     \
  template std::optional<int> corner_shift(const CornerCoords<T>&, const CornerCoords<T>&, double); \
  template bool projectively_equivalent(const TwistedPolygon<T>&, const TwistedPolygon<T>&, double); \
  template TwistedPolygon<T> transform(const ProjMap<T>&, const TwistedPolygon<T>&);

PENTAGRAM_INSTANTIATE(Rational)
PENTAGRAM_INSTANTIATE(double)
#undef PENTAGRAM_INSTANTIATE

namespace {

// Curve parameters (i + δ_i)/n with |δ_i| <= jitter, kept increasing.
std::vector<double> curve_parameters(int n, double jitter, std::uint64_t seed) {
  if (!(jitter >= 0.0 && jitter < 0.5)) throw Error(Errc::InvalidParameters, "jitter must lie in [0, 1/2)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-jitter, jitter);
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = (i + (jitter > 0.0 ? d(rng) : 0.0)) / n;
  return s;
}

}  // namespace

TwistedPolygon<double> generate_universally_convex(int n, double eigen_a, double eigen_b, double x0, double y0,
                                                   double jitter, std::uint64_t seed) {
  if (n < 3) throw Error(Errc::InvalidParameters, "n must be at least 3");
  if (!(eigen_a > 0.0 && eigen_a < 1.0 && eigen_b > 1.0)) throw Error(Errc::InvalidEigenvalues);
  if (!(x0 > 0.0 && y0 > 0.0)) throw Error(Errc::InvalidParameters, "base point must be in the positive quadrant");
  std::vector<ProjPoint<double>> pts;
  for (double s : curve_parameters(n, jitter, seed))
    pts.push_back(make_point<double>({std::pow(eigen_a, s) * x0, std::pow(eigen_b, s) * y0, 1.0}));
  Mat3<double> m{{{eigen_a, 0, 0}, {0, eigen_b, 0}, {0, 0, 1}}};
  return TwistedPolygon<double>(std::move(pts), ProjMap<double>{m});
}

TwistedPolygon<double> generate_spiral(int n, double theta, double d, double jitter, std::uint64_t seed) {
  if (n < 3 || !(theta > 0.0) || theta >= std::numbers::pi || !(d > 1.0))
    throw Error(Errc::InvalidParameters, "spiral needs n >= 3, 0 < theta < pi, d > 1");
  std::vector<ProjPoint<double>> pts;
  for (double s : curve_parameters(n, jitter, seed)) {
    double phi = s * theta;
    double r = std::pow(d, s);
    pts.push_back(make_point<double>({r * std::cos(phi), r * std::sin(phi), 1.0}));
  }
  double c = d * std::cos(theta), s = d * std::sin(theta);
  Mat3<double> m{{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
  return TwistedPolygon<double>(std::move(pts), ProjMap<double>{m});
}

namespace {

Rational approx(double v, int den) {
  Rational r(static_cast<long>(std::lround(v * den)), den);
  r.canonicalize();
  return r;
}

bool strictly_convex(const std::vector<Vec3<Rational>>& v) {
  int n = static_cast<int>(v.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i || j == (i + 1) % n) continue;
      if (sgn(triple_det(v[i], v[(i + 1) % n], v[j])) <= 0) return false;
    }
  return true;
}

}  // namespace

TwistedPolygon<Rational> random_convex_polygon(int n, std::uint64_t seed) {
  if (n < 3) throw Error(Errc::InvalidParameters, "n must be at least 3");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  std::uniform_int_distribution<int> radial(-5, 5);
  for (;;) {
    std::vector<Vec3<Rational>> v;
    for (int k = 0; k < n; ++k) {
      double phi = 2.0 * std::numbers::pi * (k + 0.5 + jitter(rng)) / n - std::numbers::pi;
      double t = std::tan(phi / 2.0);
      Rational tq = approx(t, 64);
      Rational f = Rational(1) + Rational(radial(rng), 100);
      Rational den = Rational(1) + tq * tq;
      v.push_back({Rational(f * (Rational(1) - tq * tq)), Rational(f * 2 * tq), den});
    }
    if (!strictly_convex(v)) continue;
    std::vector<ProjPoint<Rational>> pts;
    for (auto& h : v) pts.push_back({h});
    return TwistedPolygon<Rational>(std::move(pts), ProjMap<Rational>{identity3<Rational>()});
  }
}

ProjMap<Rational> random_projective_map(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> e(-5, 5);
  for (;;) {
    Mat3<Rational> m;
    for (auto& row : m)
      for (auto& x : row) x = e(rng);
    if (sgn(det3(m)) != 0) return {m};
  }
}

TwistedPolygon<Rational> random_polygon(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (;;) {
    std::vector<Rational> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = random_rational(rng, 9);
      b[i] = random_rational(rng, 9);
    }
    // 1 + a_{j+1} b_j = 0 is the pole of the map.
    bool generic = true;
    for (int j = 0; j < n; ++j) generic &= a[(j + 1) % n] * b[j] != -1;
    if (!generic) continue;
    try {
      TwistedPolygon<Rational> p = reconstruct_from_ab(ABCoords<Rational>::any_n(a, b));
      // det g must be a cube, or the canonical lift of the image is irrational.
      ProjMap<Rational> g = random_projective_map(rng());
      while (!exact_cbrt(det3(g.m))) g = random_projective_map(rng());
      TwistedPolygon<Rational> q = transform(g, p);
      std::vector<ProjPoint<Rational>> pts;
      for (const auto& v : q.vertices()) pts.push_back({scale(random_rational(rng, 7), v.h)});
      Mat3<Rational> m = mat_scale(random_rational(rng, 7), q.monodromy().m);
      return TwistedPolygon<Rational>(std::move(pts), ProjMap<Rational>{m});
    } catch (const Error&) {
      continue;
    }
  }
}

TwistedPolygon<double> perturb_vertices(const TwistedPolygon<double>& p, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<ProjPoint<double>> pts;
  for (const auto& v : p.vertices()) {
    double x = v.h[0] / v.h[2], y = v.h[1] / v.h[2];
    x *= 1.0 + amplitude * u(rng);
    y *= 1.0 + amplitude * u(rng);
    pts.push_back(make_point<double>({x, y, 1.0}));
  }
  return TwistedPolygon<double>(std::move(pts), p.monodromy(), p.tolerance());
}

TwistedPolygon<double> to_double(const TwistedPolygon<Rational>& p) {
  std::vector<ProjPoint<double>> pts;
  for (const auto& v : p.vertices())
    pts.push_back(make_point<double>({v.h[0].get_d(), v.h[1].get_d(), v.h[2].get_d()}));
  Mat3<double> m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = p.monodromy().m[i][j].get_d();
  return TwistedPolygon<double>(std::move(pts), ProjMap<double>{m});
}

CornerCoords<double> to_double(const CornerCoords<Rational>& c) {
  CornerCoords<double> r;
  for (const auto& v : c.x) r.x.push_back(v.get_d());
  for (const auto& v : c.y) r.y.push_back(v.get_d());
  return r;
}

ABCoords<double> to_double(const ABCoords<Rational>& c) {
  std::vector<double> a, b;
  for (const auto& v : c.a) a.push_back(v.get_d());
  for (const auto& v : c.b) b.push_back(v.get_d());
  return ABCoords<double>::any_n(std::move(a), std::move(b));
}

}  // namespace pentagram
