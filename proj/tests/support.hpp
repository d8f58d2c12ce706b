#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pentagram/polygon.hpp"

namespace testing_support {

using pentagram::ABCoords;
using pentagram::CornerCoords;
using pentagram::Rational;

inline Rational small_rational(std::mt19937_64& rng, int max_abs = 9) {
  return pentagram::random_rational(rng, max_abs, true);
}

// Avoids the poles 1 + a_{j+1} b_j = 0 of the map.
inline ABCoords<Rational> random_ab(int n, std::mt19937_64& rng, int max_abs = 9) {
  std::vector<Rational> a(n), b(n);
  for (;;) {
    for (int i = 0; i < n; ++i) {
      a[i] = small_rational(rng, max_abs);
      b[i] = small_rational(rng, max_abs);
    }
    bool ok = true;
    for (int j = 0; j < n; ++j) ok &= a[(j + 1) % n] * b[j] != -1;
    if (ok) return ABCoords<Rational>::any_n(a, b);
  }
}

// Every 1 + b_{i-1} a_i is a rational cube, so the λ system of β has a
// rational solution.
inline ABCoords<Rational> random_ab_cubic(int n, std::mt19937_64& rng) {
  std::vector<Rational> a(n), b(n);
  for (int i = 0; i < n; ++i) a[i] = small_rational(rng, 5);
  for (int i = 0; i < n; ++i) {
    Rational c, phi;
    do {
      c = small_rational(rng, 4);
      phi = c * c * c;
    } while (phi == 1);
    b[pentagram::wrap(i - 1, n)] = (phi - 1) / a[i];
  }
  return ABCoords<Rational>::any_n(a, b);
}

inline CornerCoords<Rational> random_corner(int n, std::mt19937_64& rng, int max_abs = 9) {
  CornerCoords<Rational> c;
  c.x.resize(n);
  c.y.resize(n);
  for (int i = 0; i < n; ++i) {
    do {
      c.x[i] = small_rational(rng, max_abs);
      c.y[i] = small_rational(rng, max_abs);
    } while (c.x[i] * c.y[i] == 1);
  }
  return c;
}

}  // namespace testing_support

#include "pentagram/invariants.hpp"
#include "pentagram/polyalg.hpp"

namespace testing_support {

// O_1..O_{n/2} straight from the subset definition: products of triples
// X_i = x_i y_i x_{i+1} and singletons x_j with no two factors consecutive,
// signed by (-1)^{#singletons} and bucketed by the number of factors.
inline std::vector<pentagram::LaurentPoly> brute_force_O(int n) {
  using pentagram::LaurentPoly;
  using pentagram::Monomial;
  using pentagram::var_x;
  using pentagram::var_y;
  using pentagram::wrap;
  int k = n / 2;
  std::vector<LaurentPoly> out(k + 1, LaurentPoly(2 * n));
  // Item i < n is X_i, item n + j is x_j.
  auto clash = [n](int p, int q) {
    bool px = p < n, qx = q < n;
    int i = p % n, j = q % n;
    if (px && qx) {
      int d = wrap(j - i, n);
      return d <= 2 || d >= n - 2;
    }
    if (!px && !qx) {
      int d = wrap(j - i, n);
      return d == 1 || d == n - 1 || d == 0;
    }
    if (!px) std::swap(i, j);
    int d = wrap(j - i, n);  // x_j against X_i
    return d == 0 || d == 1 || d == 2 || d == n - 1;
  };
  int items = 2 * n;
  for (unsigned long mask = 1; mask < (1UL << items); ++mask) {
    std::vector<int> chosen;
    for (int b = 0; b < items; ++b)
      if (mask >> b & 1) chosen.push_back(b);
    if (static_cast<int>(chosen.size()) > k) continue;
    bool ok = true;
    for (std::size_t s = 0; s < chosen.size() && ok; ++s)
      for (std::size_t t = s + 1; t < chosen.size() && ok; ++t) ok = !clash(chosen[s], chosen[t]);
    if (!ok) continue;
    Monomial m;
    int singles = 0;
    for (int c : chosen) {
      if (c < n) {
        m = m * Monomial::var(var_x(c, n)) * Monomial::var(var_y(c, n)) * Monomial::var(var_x(c + 1, n));
      } else {
        m = m * Monomial::var(var_x(c - n, n));
        ++singles;
      }
    }
    out[chosen.size()].add_term(m, Rational(singles % 2 ? -1 : 1));
  }
  return out;
}

// Parses sums of products like "a_1a_2+b_0a_3+1" into a polynomial in the
// (a,b) layout. Indices are single digits.
inline pentagram::LaurentPoly parse_ab(const std::string& s, int n) {
  using pentagram::Monomial;
  pentagram::LaurentPoly out(2 * n);
  std::size_t i = 0;
  while (i < s.size()) {
    Monomial m;
    bool any = false;
    while (i < s.size() && s[i] != '+') {
      if (s[i] == '1') {
        ++i;
        any = true;
        continue;
      }
      char v = s[i];
      if (i + 2 >= s.size() || s[i + 1] != '_' || (v != 'a' && v != 'b')) throw std::invalid_argument(s);
      int idx = s[i + 2] - '0';
      m = m * Monomial::var(v == 'a' ? pentagram::var_a(idx, n) : pentagram::var_b(idx, n));
      i += 3;
      any = true;
    }
    if (!any) throw std::invalid_argument(s);
    out.add_term(m, 1);
    ++i;
  }
  return out;
}

// Two-parameter family of closed pentagons.
inline ABCoords<Rational> closed5(const Rational& X, const Rational& Y) {
  Rational d = 1 - X * Y;
  std::vector<Rational> a = {X, Y, Rational(-(1 + X) / d), Rational(-d), Rational(-(1 + Y) / d)};
  std::vector<Rational> b(5);
  for (int i = 0; i < 5; ++i) b[i] = -a[(i + 2) % 5];
  return ABCoords<Rational>(a, b);
}

// Product of n consecutive variables starting at first_var, in 2n variables.
inline pentagram::LaurentPoly product_of(int n, int first_var) {
  pentagram::Monomial m;
  for (int i = 0; i < n; ++i) m = m * pentagram::Monomial::var(first_var + i);
  return pentagram::LaurentPoly::monomial(2 * n, m);
}

}  // namespace testing_support
