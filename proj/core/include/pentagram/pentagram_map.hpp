#pragma once

#include <vector>

#include "pentagram/polygon.hpp"

namespace pentagram {

template <class T>
struct BetaFactors {
  std::vector<T> lambda;
};

template <class T>
struct BetaResult {
  ABCoords<T> coords;
  BetaFactors<T> factors;
};

// Vertex i of the image is the meet of the diagonals (v_{i-1}, v_{i+1}) and
// (v_i, v_{i+2}). The monodromy is kept.
template <class T>
TwistedPolygon<T> pentagram_vertices(const TwistedPolygon<T>& p);

template <class T>
CornerCoords<T> pentagram_in_corner(const CornerCoords<T>& c);

// The corner-chart formula without singularity checks, for any field-like
// type (used with dual numbers). Writes T(x), T(y) into xo, yo.
template <class S>
void corner_map_formula(const std::vector<S>& x, const std::vector<S>& y, std::vector<S>& xo, std::vector<S>& yo) {
  int n = static_cast<int>(x.size());
  std::vector<S> phi(n);
  for (int i = 0; i < n; ++i) phi[i] = S(S(1) - x[i] * y[i]);
  xo.resize(n);
  yo.resize(n);
  for (int i = 0; i < n; ++i) {
    xo[i] = S(x[i] * phi[(i + n - 1) % n] / phi[(i + 1) % n]);
    yo[i] = S(y[(i + 1) % n] * phi[(i + 2) % n] / phi[i]);
  }
}

template <class T>
ABCoords<T> pentagram_in_ab(const ABCoords<T>& c);

template <class T>
ABCoords<T> alpha_map(const ABCoords<T>& c);

template <class T>
ABCoords<T> alpha_inverse(const ABCoords<T>& c);

// λ_i λ_{i+1} λ_{i+2} = −1 / (1 + b_{i−1} a_i). Needs a cube root.
template <class T>
BetaResult<T> beta_map(const ABCoords<T>& c);

// Coordinates of β(c) only. These depend on ratios of the λ_i, so no cube
// root is needed and exact mode never fails for lack of one.
template <class T>
ABCoords<T> beta_coords(const ABCoords<T>& c);

template <class T>
ABCoords<T> pentagram_inverse_in_ab(const ABCoords<T>& c);

template <class T>
CornerCoords<T> rescale(const CornerCoords<T>& c, const T& t);

// Index shift: entry i of the result is entry i + s of the input.
template <class T>
CornerCoords<T> shift(const CornerCoords<T>& c, int s);

template <class T>
ABCoords<T> shift(const ABCoords<T>& c, int s);

}  // namespace pentagram
