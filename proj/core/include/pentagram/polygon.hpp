#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pentagram/projgeo.hpp"

namespace pentagram {

inline int wrap(long i, int n) {
  long r = i % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

// One period of a twisted polygon plus its monodromy. Vertex k + n is M
// applied to vertex k; negative indices use the adjugate of M.
template <class T>
class TwistedPolygon {
 public:
  TwistedPolygon(std::vector<ProjPoint<T>> vertices, ProjMap<T> monodromy, double tol = default_tolerance());

  int n() const { return static_cast<int>(vertices_.size()); }
  const std::vector<ProjPoint<T>>& vertices() const { return vertices_; }
  const ProjMap<T>& monodromy() const { return monodromy_; }
  double tolerance() const { return tol_; }

  // Homogeneous representative of vertex k for any integer k.
  Vec3<T> vertex(long k) const;

 private:
  std::vector<ProjPoint<T>> vertices_;
  ProjMap<T> monodromy_;
  Mat3<T> adj_;
  double tol_;
};

template <class T>
struct CornerCoords {
  std::vector<T> x;
  std::vector<T> y;

  int n() const { return static_cast<int>(x.size()); }
  // False when some x_i y_i = 1, where the map formula has a pole.
  bool generic(double tol = default_tolerance()) const;
  bool operator==(const CornerCoords&) const = default;
};

template <class T>
class ABCoords {
 public:
  ABCoords() = default;
  // Rejects n divisible by three.
  ABCoords(std::vector<T> a, std::vector<T> b);
  // The difference-equation coefficients for any n, used where the formulas
  // stay meaningful even though the chart does not exist (n divisible by 3).
  static ABCoords any_n(std::vector<T> a, std::vector<T> b);

  int n() const { return static_cast<int>(a.size()); }
  bool operator==(const ABCoords& o) const { return a == o.a && b == o.b; }

  std::vector<T> a;
  std::vector<T> b;
};

template <class T>
struct LiftSolution {
  std::vector<Vec3<T>> lifted;
  std::vector<T> t;
};

template <class T>
struct Obstruction {
  T alpha;
  T beta;
};

// Solves t_i t_{i+1} t_{i+2} = r_i (indices mod n) for gcd(3, n) = 1.
// ratios returns t_i / t_0, which stays in the field of the inputs; the full
// solution needs one cube root and raises NonRationalLift when it is
// irrational in exact mode.
template <class T>
std::vector<T> cyclic_triple_ratios(const std::vector<T>& r);
template <class T>
std::vector<T> solve_cyclic_triple(const std::vector<T>& r);

// Unimodular representative M / cbrt(det M).
template <class T>
Mat3<T> unimodular(const Mat3<T>& m);

template <class T>
CornerCoords<T> corner_coords(const TwistedPolygon<T>& p);

template <class T>
LiftSolution<T> canonical_lift(const TwistedPolygon<T>& p);

template <class T>
ABCoords<T> ab_coords(const TwistedPolygon<T>& p);

template <class T>
Obstruction<T> obstruction(const TwistedPolygon<T>& p, std::vector<T>* t_out = nullptr);

template <class T>
using Seed = std::array<Vec3<T>, 3>;

template <class T>
Seed<T> standard_seed() {
  return {Vec3<T>{T(1), T(0), T(0)}, Vec3<T>{T(0), T(1), T(0)}, Vec3<T>{T(0), T(0), T(1)}};
}

template <class T>
TwistedPolygon<T> reconstruct_from_ab(const ABCoords<T>& c, const Seed<T>& seed = standard_seed<T>());

// The lifted sequence V_0 .. V_{count-1} generated by the recurrence.
template <class T>
std::vector<Vec3<T>> iterate_recurrence(const ABCoords<T>& c, const Seed<T>& seed, int count);

template <class T>
CornerCoords<T> corner_from_ab(const ABCoords<T>& c);

template <class T>
ABCoords<T> ab_from_corner(const CornerCoords<T>& c);

// Smallest cyclic shift s with x'_i = x_{i+s}, y'_i = y_{i+s}.
template <class T>
std::optional<int> corner_shift(const CornerCoords<T>& c, const CornerCoords<T>& d, double tol = default_tolerance());

template <class T>
bool projectively_equivalent(const TwistedPolygon<T>& p, const TwistedPolygon<T>& q, double tol = default_tolerance());

template <class T>
TwistedPolygon<T> transform(const ProjMap<T>& g, const TwistedPolygon<T>& p);

// Vertices on the invariant curve of the monodromy. With jitter = 0 they are
// equally spaced in the curve parameter and the polygon is a fixed point of
// the pentagram map up to projective equivalence; a positive jitter moves
// each parameter by up to jitter/n, staying on the curve.
TwistedPolygon<double> generate_universally_convex(int n, double eigen_a = 0.5, double eigen_b = 2.0, double x0 = 1.0,
                                                   double y0 = 1.0, double jitter = 0.0, std::uint64_t seed = 0);

TwistedPolygon<double> generate_spiral(int n, double theta, double d, double jitter = 0.0, std::uint64_t seed = 0);

// Closed convex n-gon with rational vertices near the unit circle.
TwistedPolygon<Rational> random_convex_polygon(int n, std::uint64_t seed);

// Random twisted polygon with rational data and a monodromy whose
// determinant is a perfect cube, so both charts stay exact.
TwistedPolygon<Rational> random_polygon(int n, std::uint64_t seed);

// Random invertible rational map with small entries.
ProjMap<Rational> random_projective_map(std::uint64_t seed);

// Moves every vertex by a relative amount up to amplitude in the affine
// chart z = 1, keeping the monodromy.
TwistedPolygon<double> perturb_vertices(const TwistedPolygon<double>& p, double amplitude, std::uint64_t seed);

TwistedPolygon<double> to_double(const TwistedPolygon<Rational>& p);
CornerCoords<double> to_double(const CornerCoords<Rational>& c);
ABCoords<double> to_double(const ABCoords<Rational>& c);

}  // namespace pentagram
