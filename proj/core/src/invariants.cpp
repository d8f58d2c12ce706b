#include "pentagram/invariants.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>

namespace pentagram {

namespace {

LaurentPoly lp_const(int nv, long c) { return LaurentPoly::constant(nv, Rational(c)); }

// Memoizes a value per n behind a mutex; the builder runs once per key.
template <class V>
class PerN {
 public:
  explicit PerN(std::function<V(int)> build) : build_(std::move(build)) {}
  const V& get(int n) {
    std::shared_ptr<Slot> slot;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto& s = slots_[n];
      if (!s) s = std::make_shared<Slot>();
      slot = s;
    }
    std::call_once(slot->once, [&] { slot->value = std::make_unique<V>(build_(n)); });
    return *slot->value;
  }

 private:
  struct Slot {
    std::once_flag once;
    std::unique_ptr<V> value;
  };
  std::function<V(int)> build_;
  std::mutex mu_;
  std::map<int, std::shared_ptr<Slot>> slots_;
};

void check_n(int n) {
  if (n < 3 || n > 12) throw Error(Errc::InvalidParameters, "symbolic range is 3 <= n <= 12");
}

// Non-overlapping placements of blocks of length 2 and 3 on the n-cycle.
// Each packing lists (start, length) pairs.
using Packing = std::vector<std::pair<int, int>>;

void packings_rec(int n, int pos, std::vector<bool>& used, Packing& cur, std::vector<Packing>& out) {
  if (pos == n) {
    out.push_back(cur);
    return;
  }
  packings_rec(n, pos + 1, used, cur, out);
  for (int len : {2, 3}) {
    bool ok = true;
    for (int c = 0; c < len && ok; ++c) ok = !used[(pos + c) % n];
    if (!ok) continue;
    for (int c = 0; c < len; ++c) used[(pos + c) % n] = true;
    cur.push_back({pos, len});
    packings_rec(n, pos + 1, used, cur, out);
    cur.pop_back();
    for (int c = 0; c < len; ++c) used[(pos + c) % n] = false;
  }
}

std::vector<Packing> cycle_packings(int n) {
  std::vector<Packing> out;
  std::vector<bool> used(n, false);
  Packing cur;
  packings_rec(n, 0, used, cur, out);
  return out;
}

// A singleton at index j occupies cells j−2, j−1; a triple at index i
// occupies i−2, i−1, i. Disjointness is exactly non-consecutiveness.
CornerInvariants build_corner(int n) {
  check_n(n);
  int nv = 2 * n;
  int k = n / 2;
  CornerInvariants ci;
  ci.n = n;
  ci.k = k;
  ci.O.assign(k, LaurentPoly(nv));
  ci.E.assign(k, LaurentPoly(nv));
  for (const Packing& pk : cycle_packings(n)) {
    int weight = static_cast<int>(pk.size());
    if (weight < 1 || weight > k) continue;
    Monomial mo, me;
    int singles = 0;
    for (auto [start, len] : pk) {
      int idx = start + 2;
      if (len == 2) {
        ++singles;
        mo = mo * Monomial::var(var_x(idx, n));
        me = me * Monomial::var(var_y(idx, n));
      } else {
        mo = mo * Monomial::var(var_x(idx, n)) * Monomial::var(var_y(idx, n)) * Monomial::var(var_x(idx + 1, n));
        me = me * Monomial::var(var_y(idx, n)) * Monomial::var(var_x(idx + 1, n)) * Monomial::var(var_y(idx + 1, n));
      }
    }
    Rational sign(singles % 2 ? -1 : 1);
    ci.O[weight - 1].add_term(mo, sign);
    ci.E[weight - 1].add_term(me, sign);
  }
  Monomial px, py, ex, ox, ey, oy;
  for (int i = 0; i < n; ++i) {
    px = px * Monomial::var(var_x(i, n));
    py = py * Monomial::var(var_y(i, n));
    if (i % 2 == 0) {
      ex = ex * Monomial::var(var_x(i, n));
      ey = ey * Monomial::var(var_y(i, n));
    } else {
      ox = ox * Monomial::var(var_x(i, n));
      oy = oy * Monomial::var(var_y(i, n));
    }
  }
  ci.On = LaurentPoly::monomial(nv, px);
  ci.En = LaurentPoly::monomial(nv, py);
  if (n % 2 == 0) {
    ci.On2 = LaurentPoly::monomial(nv, ex) + LaurentPoly::monomial(nv, ox);
    ci.En2 = LaurentPoly::monomial(nv, ey) + LaurentPoly::monomial(nv, oy);
  }
  return ci;
}

TraceInvariants build_trace(int n) {
  check_n(n);
  TraceInvariants t;
  t.n = n;
  t.k = n / 2;
  SymbolicMatrix m = monodromy_matrix_symbolic(n);
  t.F = m[0][0] + m[1][1] + m[2][2];
  auto parts = t.F.weight_components(ab_weights(n));
  for (int j = 0; j <= t.k; ++j) {
    int w = invariant_weight(n, j);
    t.w.push_back(w);
    auto it = parts.find(w);
    t.I.push_back(it == parts.end() ? LaurentPoly(2 * n) : it->second);
  }
  for (const auto& p : t.I) t.J.push_back(sigma(p, n));
  return t;
}

std::vector<LaurentPoly> build_markings(int n) {
  check_n(n);
  int nv = 2 * n;
  int k = n / 2;
  std::vector<LaurentPoly> T(k + 1, LaurentPoly(nv));
  for (const auto& [mk, mult] : admissible_markings(n)) {
    Monomial m;
    int p = 0, q = 0;
    for (int i = 0; i < n; ++i) {
      if (mk[i] == 'a') {
        ++p;
        m = m * Monomial::var(var_a(i, n));
      } else if (mk[i] == 'b') {
        ++q;
        m = m * Monomial::var(var_b(i, n));
      }
    }
    int w = p - q;
    for (int j = 0; j <= k; ++j)
      if (invariant_weight(n, j) == w) T[j].add_term(m, Rational(mult));
  }
  return T;
}

PerN<CornerInvariants>& corner_cache() {
  static PerN<CornerInvariants> c(build_corner);
  return c;
}
PerN<TraceInvariants>& trace_cache() {
  static PerN<TraceInvariants> c(build_trace);
  return c;
}
PerN<std::vector<LaurentPoly>>& marking_cache() {
  static PerN<std::vector<LaurentPoly>> c(build_markings);
  return c;
}

}  // namespace

SymbolicMatrix monodromy_matrix_symbolic(int n) {
  int nv = 2 * n;
  SymbolicMatrix m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = lp_const(nv, i == j ? 1 : 0);
  for (int j = 0; j < n; ++j) {
    LaurentPoly a = LaurentPoly::variable(nv, var_a(j, n));
    LaurentPoly b = LaurentPoly::variable(nv, var_b(j, n));
    SymbolicMatrix r;
    for (int i = 0; i < 3; ++i) {
      r[i][0] = m[i][1];
      r[i][1] = m[i][2];
      r[i][2] = m[i][0] + b * m[i][1] + a * m[i][2];
    }
    m = std::move(r);
  }
  return m;
}

template <class T>
Mat3<T> monodromy_matrix(const ABCoords<T>& c) {
  Mat3<T> m = identity3<T>();
  for (int j = 0; j < c.n(); ++j) {
    Mat3<T> r;
    for (int i = 0; i < 3; ++i) {
      r[i][0] = m[i][1];
      r[i][1] = m[i][2];
      r[i][2] = T(m[i][0] + c.b[j] * m[i][1] + c.a[j] * m[i][2]);
    }
    m = r;
  }
  return m;
}

int invariant_weight(int n, int j) {
  int k = n / 2;
  return n % 2 == 0 ? 3 * j - k : 3 * j - k + 1;
}

std::vector<int> ab_weights(int n) {
  std::vector<int> w(2 * n, 1);
  for (int i = 0; i < n; ++i) w[n + i] = -1;
  return w;
}

std::vector<int> corner_weights(int n) { return ab_weights(n); }

const TraceInvariants& trace_invariants(int n) { return trace_cache().get(n); }

LaurentPoly sigma(const LaurentPoly& f, int n) {
  int nv = 2 * n;
  std::vector<LaurentPoly> img(nv);
  for (int i = 0; i < n; ++i) {
    img[var_a(i, n)] = LaurentPoly::monomial(nv, Monomial::var(var_b(-i, n)), Rational(-1));
    img[var_b(i, n)] = LaurentPoly::monomial(nv, Monomial::var(var_a(-i, n)), Rational(-1));
  }
  return f.substitute(img);
}

std::vector<Marking> admissible_markings(int n) {
  // Linear words in block lengths {1,2,3} summing to n.
  std::vector<std::vector<std::vector<int>>> words(n + 1);
  words[0].push_back({});
  for (int s = 1; s <= n; ++s)
    for (int len = 1; len <= 3 && len <= s; ++len)
      for (const auto& w : words[s - len]) {
        auto v = w;
        v.push_back(len);
        words[s].push_back(std::move(v));
      }
  // (word, start) pairs; each tiling of the cycle arises once per block.
  std::map<std::string, std::pair<long, long>> seen;
  for (const auto& w : words[n]) {
    std::string lin;
    for (int len : w) lin += len == 1 ? "a" : len == 2 ? "*b" : "***";
    for (int r = 0; r < n; ++r) {
      std::string mk(n, '?');
      for (int i = 0; i < n; ++i) mk[(r + i) % n] = lin[i];
      auto& e = seen[mk];
      ++e.first;
      e.second = static_cast<long>(w.size());
    }
  }
  std::vector<Marking> out;
  for (const auto& [mk, c] : seen) out.push_back({mk, static_cast<int>(c.first / c.second)});
  return out;
}

const std::vector<LaurentPoly>& combinatorial_invariants(int n) { return marking_cache().get(n); }

const CornerInvariants& corner_monodromy_invariants(int n) { return corner_cache().get(n); }

LaurentPoly tau(const LaurentPoly& f, int n) {
  std::vector<int> perm(2 * n);
  for (int i = 0; i < n; ++i) {
    perm[var_x(i, n)] = var_x(1 - i, n);
    perm[var_y(i, n)] = var_y(-i, n);
  }
  return f.relabel(perm);
}

std::vector<LaurentPoly> corner_in_ab(int n) {
  int nv = 2 * n;
  std::vector<LaurentPoly> img(nv);
  for (int i = 0; i < n; ++i) {
    Monomial mx = Monomial::var(var_a(i - 2, n)) * Monomial::var(var_b(i - 2, n), -1) *
                  Monomial::var(var_b(i - 1, n), -1);
    Monomial my = Monomial::var(var_b(i - 1, n)) * Monomial::var(var_a(i - 2, n), -1) *
                  Monomial::var(var_a(i - 1, n), -1);
    img[var_x(i, n)] = LaurentPoly::monomial(nv, mx);
    img[var_y(i, n)] = LaurentPoly::monomial(nv, my, Rational(-1));
  }
  return img;
}

std::vector<LaurentPoly> independence_family(int n) {
  const CornerInvariants& ci = corner_monodromy_invariants(n);
  int top = n % 2 == 0 ? ci.k - 1 : ci.k;
  std::vector<LaurentPoly> fam;
  for (int j = 0; j < top; ++j) fam.push_back(ci.O[j]);
  for (int j = 0; j < top; ++j) fam.push_back(ci.E[j]);
  fam.push_back(ci.On);
  fam.push_back(ci.En);
  return fam;
}

int algebraic_independence_rank(int n, std::span<const Rational> point) {
  if (static_cast<int>(point.size()) != 2 * n) throw Error(Errc::ArityMismatch, "point must have 2n entries");
  std::vector<std::vector<Rational>> rows;
  for (const LaurentPoly& f : independence_family(n)) {
    std::vector<Rational> g(2 * n);
    for (int v = 0; v < 2 * n; ++v) g[v] = f.partial(v).eval(point);
    rows.push_back(std::move(g));
  }
  return exact_rank(std::move(rows));
}

namespace {

template <class T>
struct CompiledCorner {
  std::vector<CompiledPoly<T>> O, E;
  CompiledPoly<T> On, En;
  std::optional<CompiledPoly<T>> On2, En2;
};

template <class T>
struct CompiledAB {
  std::vector<CompiledPoly<T>> I, J;
};

template <class T>
const CompiledCorner<T>& compiled_corner(int n) {
  static PerN<CompiledCorner<T>> cache([](int m) {
    const CornerInvariants& ci = corner_monodromy_invariants(m);
    CompiledCorner<T> cc;
    for (const auto& p : ci.O) cc.O.emplace_back(p);
    for (const auto& p : ci.E) cc.E.emplace_back(p);
    cc.On = CompiledPoly<T>(ci.On);
    cc.En = CompiledPoly<T>(ci.En);
    if (ci.On2) {
      cc.On2 = CompiledPoly<T>(*ci.On2);
      cc.En2 = CompiledPoly<T>(*ci.En2);
    }
    return cc;
  });
  return cache.get(n);
}

template <class T>
const CompiledAB<T>& compiled_ab(int n) {
  static PerN<CompiledAB<T>> cache([](int m) {
    const TraceInvariants& ti = trace_invariants(m);
    CompiledAB<T> c;
    for (const auto& p : ti.I) c.I.emplace_back(p);
    for (const auto& p : ti.J) c.J.emplace_back(p);
    return c;
  });
  return cache.get(n);
}

}  // namespace

template <class T>
CornerInvariantValues<T> evaluate_invariants(const CornerCoords<T>& c) {
  int n = c.n();
  std::vector<T> pt(c.x);
  pt.insert(pt.end(), c.y.begin(), c.y.end());
  const CompiledCorner<T>& cc = compiled_corner<T>(n);
  CornerInvariantValues<T> v;
  for (const auto& p : cc.O) v.O.push_back(p(pt));
  for (const auto& p : cc.E) v.E.push_back(p(pt));
  v.On = cc.On(pt);
  v.En = cc.En(pt);
  if (cc.On2) {
    v.On2 = (*cc.On2)(pt);
    v.En2 = (*cc.En2)(pt);
  }
  return v;
}

template <class T>
ABInvariantValues<T> evaluate_invariants(const ABCoords<T>& c) {
  int n = c.n();
  std::vector<T> pt(c.a);
  pt.insert(pt.end(), c.b.begin(), c.b.end());
  const CompiledAB<T>& ca = compiled_ab<T>(n);
  ABInvariantValues<T> v;
  for (const auto& p : ca.I) v.I.push_back(p(pt));
  for (const auto& p : ca.J) v.J.push_back(p(pt));
  v.w = trace_invariants(n).w;
  return v;
}

template <class T>
HilbertData<T> hilbert_data(const TwistedPolygon<T>& p) {
  int n = p.n();
  HilbertData<T> h;
  h.z.resize(n);
  T prod(1);
  for (int i = 0; i < n; ++i) {
    Vec3<T> v = p.vertex(i);
    try {
      Vec3<T> lm2 = cross(v, p.vertex(i - 2));
      Vec3<T> lm1 = cross(v, p.vertex(i - 1));
      Vec3<T> l1 = cross(v, p.vertex(i + 1));
      Vec3<T> l2 = cross(v, p.vertex(i + 2));
      h.z[i] = cross_ratio_vectors(lm2, lm1, l1, l2, p.tolerance());
    } catch (const Error&) {
      throw Error(Errc::DegenerateConfiguration, i, "slope cross-ratio undefined");
    }
    prod *= h.z[i];
  }
  if (ScalarTraits<T>::is_zero(prod, 0.0)) throw Error(Errc::DegenerateConfiguration, "zero slope cross-ratio");
  h.H = T(T(1) / prod);
  return h;
}

template <class T>
std::array<T, 5> closed_relations_residual(const ABCoords<T>& c, double tol) {
  Mat3<T> m = monodromy_matrix(c);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!ScalarTraits<T>::near(m[i][j], T(i == j ? 1 : 0), tol)) throw Error(Errc::NotClosed);
  ABInvariantValues<T> v = evaluate_invariants(c);
  std::array<T, 5> r;
  for (auto& e : r) e = T(0);
  r[0] = T(-3);
  r[1] = T(-3);
  for (std::size_t j = 0; j < v.I.size(); ++j) {
    T w(v.w[j]);
    r[0] += v.I[j];
    r[1] += v.J[j];
    r[2] += w * v.I[j];
    r[3] += w * v.J[j];
    r[4] += w * w * (v.I[j] - v.J[j]);
  }
  return r;
}

#define PENTAGRAM_INSTANTIATE(T)                                                      \
  template Mat3<T> monodromy_matrix(const ABCoords<T>&);                              \
  template CornerInvariantValues<T> evaluate_invariants(const CornerCoords<T>&);      \
  template ABInvariantValues<T> evaluate_invariants(const ABCoords<T>&);              \
  template HilbertData<T> hilbert_data(const TwistedPolygon<T>&);                     \
  template std::array<T, 5> closed_relations_residual(const ABCoords<T>&, double);

PENTAGRAM_INSTANTIATE(Rational)
PENTAGRAM_INSTANTIATE(double)
#undef PENTAGRAM_INSTANTIATE

}  // namespace pentagram
