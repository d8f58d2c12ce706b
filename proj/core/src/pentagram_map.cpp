#include "pentagram/pentagram_map.hpp"

namespace pentagram {

namespace {

template <class T>
bool vanishes(const T& v) {
  if constexpr (is_exact_v<T>) return sgn(v) == 0;
  else return v == 0.0 || !std::isfinite(v);
}

}  // namespace

template <class T>
TwistedPolygon<T> pentagram_vertices(const TwistedPolygon<T>& p) {
  int n = p.n();
  std::vector<ProjPoint<T>> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    try {
      ProjLine<T> d1 = join(ProjPoint<T>{p.vertex(i - 1)}, ProjPoint<T>{p.vertex(i + 1)}, p.tolerance());
      ProjLine<T> d2 = join(ProjPoint<T>{p.vertex(i)}, ProjPoint<T>{p.vertex(i + 2)}, p.tolerance());
      out.push_back(meet(d1, d2, p.tolerance()));
    } catch (const Error&) {
      throw Error(Errc::DegenerateDiagonals, i);
    }
  }
  try {
    return TwistedPolygon<T>(std::move(out), p.monodromy(), p.tolerance());
  } catch (const Error& e) {
    throw Error(Errc::LostGenericity, e.index().value_or(-1));
  }
}

template <class T>
CornerCoords<T> pentagram_in_corner(const CornerCoords<T>& c) {
  int n = c.n();
  std::vector<T> phi(n);
  for (int i = 0; i < n; ++i) {
    phi[i] = T(T(1) - c.x[i] * c.y[i]);
    if (vanishes(phi[i])) throw Error(Errc::MapSingularity, i);
  }
  CornerCoords<T> r;
  corner_map_formula(c.x, c.y, r.x, r.y);
  return r;
}

template <class T>
ABCoords<T> pentagram_in_ab(const ABCoords<T>& c) {
  int n = c.n();
  int m = n / 3;
  // phi[j] = 1 + a_{j+1} b_j
  std::vector<T> phi(n);
  for (int j = 0; j < n; ++j) {
    phi[j] = T(T(1) + c.a[(j + 1) % n] * c.b[j]);
    if (vanishes(phi[j])) throw Error(Errc::MapSingularity, j);
  }
  std::vector<T> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    T num_a(1), den_a(1), num_b(1), den_b(1);
    for (int k = 1; k <= m; ++k) {
      num_a *= phi[wrap(i + 3 * k + 1, n)];
      den_a *= phi[wrap(i - 3 * k + 1, n)];
      num_b *= phi[wrap(i - 3 * k - 1, n)];
      den_b *= phi[wrap(i + 3 * k - 1, n)];
    }
    a[i] = T(c.a[(i + 2) % n] * num_a / den_a);
    b[i] = T(c.b[wrap(i - 1, n)] * num_b / den_b);
  }
  return ABCoords<T>(std::move(a), std::move(b));
}

template <class T>
ABCoords<T> alpha_map(const ABCoords<T>& c) {
  int n = c.n();
  std::vector<T> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = T(-c.b[(i + 1) % n]);
    b[i] = T(-c.a[i]);
  }
  return ABCoords<T>::any_n(std::move(a), std::move(b));
}

template <class T>
ABCoords<T> alpha_inverse(const ABCoords<T>& c) {
  int n = c.n();
  std::vector<T> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = T(-c.b[i]);
    b[i] = T(-c.a[wrap(i - 1, n)]);
  }
  return ABCoords<T>::any_n(std::move(a), std::move(b));
}

namespace {

template <class T>
std::vector<T> beta_rhs(const ABCoords<T>& c) {
  int n = c.n();
  if (n % 3 == 0) throw Error(Errc::DivisibleByThree);
  std::vector<T> g(n);
  for (int i = 0; i < n; ++i) {
    T f = T(T(1) + c.b[wrap(i - 1, n)] * c.a[i]);
    if (vanishes(f)) throw Error(Errc::MapSingularity, i);
    g[i] = T(T(-1) / f);
  }
  return g;
}

template <class T>
ABCoords<T> beta_apply(const ABCoords<T>& c, const std::vector<T>& lam) {
  int n = c.n();
  std::vector<T> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = T(-lam[i] * c.b[wrap(i - 1, n)] / lam[(i + 2) % n]);
    b[i] = T(-lam[(i + 3) % n] * c.a[(i + 1) % n] / lam[(i + 1) % n]);
  }
  return ABCoords<T>(std::move(a), std::move(b));
}

}  // namespace

template <class T>
BetaResult<T> beta_map(const ABCoords<T>& c) {
  std::vector<T> lam = solve_cyclic_triple(beta_rhs(c));
  ABCoords<T> out = beta_apply(c, lam);
  return {std::move(out), BetaFactors<T>{std::move(lam)}};
}

template <class T>
ABCoords<T> beta_coords(const ABCoords<T>& c) {
  return beta_apply(c, cyclic_triple_ratios(beta_rhs(c)));
}

template <class T>
ABCoords<T> pentagram_inverse_in_ab(const ABCoords<T>& c) {
  return beta_coords(alpha_inverse(c));
}

template <class T>
CornerCoords<T> rescale(const CornerCoords<T>& c, const T& t) {
  if (vanishes(t)) throw Error(Errc::ZeroScale);
  CornerCoords<T> r = c;
  T inv = T(T(1) / t);
  for (auto& v : r.x) v *= t;
  for (auto& v : r.y) v *= inv;
  return r;
}

template <class T>
CornerCoords<T> shift(const CornerCoords<T>& c, int s) {
  int n = c.n();
  CornerCoords<T> r;
  r.x.resize(n);
  r.y.resize(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = c.x[wrap(i + s, n)];
    r.y[i] = c.y[wrap(i + s, n)];
  }
  return r;
}

template <class T>
ABCoords<T> shift(const ABCoords<T>& c, int s) {
  int n = c.n();
  std::vector<T> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = c.a[wrap(i + s, n)];
    b[i] = c.b[wrap(i + s, n)];
  }
  return ABCoords<T>::any_n(std::move(a), std::move(b));
}

#define PENTAGRAM_INSTANTIATE(T)                                         \
  template TwistedPolygon<T> pentagram_vertices(const TwistedPolygon<T>&); \
  template CornerCoords<T> pentagram_in_corner(const CornerCoords<T>&);  \
  template ABCoords<T> pentagram_in_ab(const ABCoords<T>&);              \
  template ABCoords<T> alpha_map(const ABCoords<T>&);                    \
  template ABCoords<T> alpha_inverse(const ABCoords<T>&);                \
  template BetaResult<T> beta_map(const ABCoords<T>&);                   \
  template ABCoords<T> beta_coords(const ABCoords<T>&);                  \
  template ABCoords<T> pentagram_inverse_in_ab(const ABCoords<T>&);      \
  template CornerCoords<T> rescale(const CornerCoords<T>&, const T&);    \
  template CornerCoords<T> shift(const CornerCoords<T>&, int);           \
  template ABCoords<T> shift(const ABCoords<T>&, int);

PENTAGRAM_INSTANTIATE(Rational)
PENTAGRAM_INSTANTIATE(double)
#undef PENTAGRAM_INSTANTIATE

}  // namespace pentagram
