#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "pentagram/errors.hpp"
#include "pentagram/scalar.hpp"

namespace pentagram {

template <class T>
using Vec3 = std::array<T, 3>;

template <class T>
using Mat3 = std::array<std::array<T, 3>, 3>;

template <class T>
Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {T(a[1] * b[2] - a[2] * b[1]), T(a[2] * b[0] - a[0] * b[2]), T(a[0] * b[1] - a[1] * b[0])};
}

template <class T>
T dot(const Vec3<T>& a, const Vec3<T>& b) {
  return T(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
}

// det of the matrix with columns p, q, r.
template <class T>
T triple_det(const Vec3<T>& p, const Vec3<T>& q, const Vec3<T>& r) {
  return dot(p, cross(q, r));
}

template <class T>
Vec3<T> scale(const T& s, const Vec3<T>& v) {
  return {T(s * v[0]), T(s * v[1]), T(s * v[2])};
}

template <class T>
Vec3<T> add(const Vec3<T>& a, const Vec3<T>& b) {
  return {T(a[0] + b[0]), T(a[1] + b[1]), T(a[2] + b[2])};
}

template <class T>
Vec3<T> sub(const Vec3<T>& a, const Vec3<T>& b) {
  return {T(a[0] - b[0]), T(a[1] - b[1]), T(a[2] - b[2])};
}

template <class T>
T max_abs(const Vec3<T>& v) {
  using Tr = ScalarTraits<T>;
  T m = Tr::abs(v[0]);
  for (int i = 1; i < 3; ++i) {
    T a = Tr::abs(v[i]);
    if (a > m) m = a;
  }
  return m;
}

template <class T>
bool is_zero_vec(const Vec3<T>& v, double tol = default_tolerance()) {
  if constexpr (is_exact_v<T>) {
    return sgn(v[0]) == 0 && sgn(v[1]) == 0 && sgn(v[2]) == 0;
  } else {
    return max_abs(v) <= tol;
  }
}

// Rescale so the largest component has magnitude one. Identity for rationals.
template <class T>
Vec3<T> normalized(const Vec3<T>& v) {
  if constexpr (is_exact_v<T>) {
    return v;
  } else {
    double m = max_abs(v);
    if (m == 0.0) return v;
    return {v[0] / m, v[1] / m, v[2] / m};
  }
}

// True when u and v span the same line (all 2x2 minors vanish). Float mode
// compares the minors against tol times the product of magnitudes.
template <class T>
bool proportional(const Vec3<T>& u, const Vec3<T>& v, double tol = default_tolerance()) {
  Vec3<T> c = cross(u, v);
  if constexpr (is_exact_v<T>) {
    return is_zero_vec(c);
  } else {
    return max_abs(c) <= tol * max_abs(u) * max_abs(v);
  }
}

template <class T>
Mat3<T> identity3() {
  Mat3<T> m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = T(i == j ? 1 : 0);
  return m;
}

template <class T>
Mat3<T> mat_mul(const Mat3<T>& a, const Mat3<T>& b) {
  Mat3<T> c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      T s = a[i][0] * b[0][j];
      s += a[i][1] * b[1][j];
      s += a[i][2] * b[2][j];
      c[i][j] = s;
    }
  return c;
}

template <class T>
Vec3<T> mat_vec(const Mat3<T>& a, const Vec3<T>& v) {
  Vec3<T> r{};
  for (int i = 0; i < 3; ++i) r[i] = T(a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2]);
  return r;
}

template <class T>
T det3(const Mat3<T>& m) {
  Vec3<T> c0{m[0][0], m[1][0], m[2][0]};
  Vec3<T> c1{m[0][1], m[1][1], m[2][1]};
  Vec3<T> c2{m[0][2], m[1][2], m[2][2]};
  return triple_det(c0, c1, c2);
}

template <class T>
Mat3<T> adjugate(const Mat3<T>& m) {
  Mat3<T> a{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      a[i][j] = T(m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]);
    }
  return a;
}

template <class T>
Mat3<T> mat_scale(const T& s, const Mat3<T>& m) {
  Mat3<T> r = m;
  for (auto& row : r)
    for (auto& e : row) e = T(e * s);
  return r;
}

template <class T>
Mat3<T> from_columns(const Vec3<T>& c0, const Vec3<T>& c1, const Vec3<T>& c2) {
  Mat3<T> m{};
  for (int i = 0; i < 3; ++i) {
    m[i][0] = c0[i];
    m[i][1] = c1[i];
    m[i][2] = c2[i];
  }
  return m;
}

template <class T>
Mat3<T> inverse3(const Mat3<T>& m) {
  T d = det3(m);
  if (ScalarTraits<T>::is_zero(d, 0.0)) throw Error(Errc::DegenerateConfiguration, "singular matrix");
  T inv = T(1) / d;
  return mat_scale(inv, adjugate(m));
}

template <class T>
struct ProjPoint {
  Vec3<T> h;
};

template <class T>
struct ProjLine {
  Vec3<T> l;
};

template <class T>
struct ProjMap {
  Mat3<T> m;
};

template <class T>
ProjPoint<T> make_point(const Vec3<T>& h) {
  if (is_zero_vec(h, 0.0)) throw Error(Errc::CoincidentPoints, "zero homogeneous vector");
  return {normalized(h)};
}

template <class T>
ProjMap<T> make_map(const Mat3<T>& m) {
  if (ScalarTraits<T>::is_zero(det3(m), 0.0)) throw Error(Errc::InvalidParameters, "singular projective map");
  return {m};
}

template <class T>
bool same_point(const ProjPoint<T>& p, const ProjPoint<T>& q, double tol = default_tolerance()) {
  return proportional(p.h, q.h, tol);
}

// (t1−t2)(t3−t4) / ((t1−t3)(t2−t4))
template <class T>
T cross_ratio(const T& t1, const T& t2, const T& t3, const T& t4) {
  T d1 = t1 - t3;
  T d2 = t2 - t4;
  if (ScalarTraits<T>::is_zero(d1, 0.0) || ScalarTraits<T>::is_zero(d2, 0.0))
    throw Error(Errc::DegenerateCrossRatio);
  T num = (t1 - t2) * (t3 - t4);
  return T(num / (d1 * d2));
}

// Cross-ratio of four collinear points given by homogeneous vectors. With
// c = λ1 a + λ2 b and d = μ1 a + μ2 b the affine parameters are λ1/λ2 and
// μ1/μ2, giving (λ2μ1 − λ1μ2)/(λ2μ1). The coefficients come from cross
// products against n = a×b, so no division happens before the final step.
template <class T>
T cross_ratio_vectors(const Vec3<T>& a0, const Vec3<T>& b0, const Vec3<T>& c0, const Vec3<T>& d0,
                      double tol = default_tolerance()) {
  Vec3<T> a = normalized(a0), b = normalized(b0), c = normalized(c0), d = normalized(d0);
  Vec3<T> n = cross(a, b);
  if (is_zero_vec(n, 0.0)) throw Error(Errc::DegenerateCrossRatio, "first two points coincide");
  T n2 = dot(n, n);
  if constexpr (is_exact_v<T>) {
    if (sgn(dot(n, c)) != 0 || sgn(dot(n, d)) != 0) throw Error(Errc::NotCollinear);
  } else {
    double nn = std::sqrt(n2);
    if (std::abs(dot(n, c)) > tol * nn || std::abs(dot(n, d)) > tol * nn) throw Error(Errc::NotCollinear);
  }
  T l1 = dot(cross(c, b), n);
  T l2 = dot(cross(a, c), n);
  T m1 = dot(cross(d, b), n);
  T m2 = dot(cross(a, d), n);
  T den = l2 * m1;
  if constexpr (is_exact_v<T>) {
    if (sgn(den) == 0) throw Error(Errc::DegenerateCrossRatio);
  } else {
    if (std::abs(den) <= 1e-14 * n2 * n2) throw Error(Errc::DegenerateCrossRatio);
  }
  T num = l2 * m1 - l1 * m2;
  return T(num / den);
}

template <class T>
T cross_ratio_points(const ProjPoint<T>& p1, const ProjPoint<T>& p2, const ProjPoint<T>& p3,
                     const ProjPoint<T>& p4, double tol = default_tolerance()) {
  return cross_ratio_vectors(p1.h, p2.h, p3.h, p4.h, tol);
}

template <class T>
ProjLine<T> join(const ProjPoint<T>& p, const ProjPoint<T>& q, double tol = default_tolerance()) {
  if (proportional(p.h, q.h, is_exact_v<T> ? 0.0 : tol * 1e-3)) throw Error(Errc::CoincidentPoints);
  return {normalized(cross(p.h, q.h))};
}

template <class T>
ProjPoint<T> meet(const ProjLine<T>& l1, const ProjLine<T>& l2, double tol = default_tolerance()) {
  if (proportional(l1.l, l2.l, is_exact_v<T> ? 0.0 : tol * 1e-3)) throw Error(Errc::CoincidentPoints, "lines coincide");
  return {normalized(cross(l1.l, l2.l))};
}

template <class T>
ProjPoint<T> apply(const ProjMap<T>& m, const ProjPoint<T>& p) {
  return {normalized(mat_vec(m.m, p.h))};
}

// Lines transform by the inverse transpose; the adjugate transpose is
// proportional to it.
template <class T>
ProjLine<T> apply(const ProjMap<T>& m, const ProjLine<T>& l) {
  Mat3<T> a = adjugate(m.m);
  Vec3<T> r{};
  for (int i = 0; i < 3; ++i) r[i] = T(a[0][i] * l.l[0] + a[1][i] * l.l[1] + a[2][i] * l.l[2]);
  return {normalized(r)};
}

template <class T>
ProjMap<T> compose(const ProjMap<T>& f, const ProjMap<T>& g) {
  return {mat_mul(f.m, g.m)};
}

template <class T>
bool incident(const ProjPoint<T>& p, const ProjLine<T>& l, double tol = default_tolerance()) {
  T d = dot(p.h, l.l);
  if constexpr (is_exact_v<T>) {
    return sgn(d) == 0;
  } else {
    return std::abs(d) <= tol * max_abs(p.h) * max_abs(l.l);
  }
}

}  // namespace pentagram
