#include "pentagram/polyalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace pentagram {

Monomial Monomial::var(int v, int power) {
  Monomial m;
  if (power != 0) m.e.push_back({v, power});
  return m;
}

int Monomial::degree_in(int v) const {
  for (const auto& [var, p] : e)
    if (var == v) return p;
  return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.e.reserve(e.size() + o.e.size());
  std::size_t i = 0, j = 0;
  while (i < e.size() || j < o.e.size()) {
    if (j == o.e.size() || (i < e.size() && e[i].first < o.e[j].first)) {
      r.e.push_back(e[i++]);
    } else if (i == e.size() || o.e[j].first < e[i].first) {
      r.e.push_back(o.e[j++]);
    } else {
      int p = e[i].second + o.e[j].second;
      if (p != 0) r.e.push_back({e[i].first, p});
      ++i;
      ++j;
    }
  }
  return r;
}

Monomial Monomial::pow(int k) const {
  Monomial r;
  if (k == 0) return r;
  r.e = e;
  for (auto& f : r.e) f.second *= k;
  return r;
}

LaurentPoly LaurentPoly::constant(int n_vars, const Rational& c) {
  LaurentPoly p(n_vars);
  p.add_term(Monomial::one(), c);
  return p;
}

LaurentPoly LaurentPoly::variable(int n_vars, int v) {
  if (v < 0 || v >= n_vars) throw Error(Errc::ArityMismatch, "variable index out of range");
  return monomial(n_vars, Monomial::var(v));
}

LaurentPoly LaurentPoly::monomial(int n_vars, const Monomial& m, const Rational& c) {
  LaurentPoly p(n_vars);
  p.add_term(m, c);
  return p;
}

Rational LaurentPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void LaurentPoly::add_term(const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

void LaurentPoly::check_arity(const LaurentPoly& o) const {
  if (n_vars_ != o.n_vars_) throw Error(Errc::ArityMismatch);
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  check_arity(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  check_arity(o);
  for (const auto& [m, c] : o.terms_) add_term(m, Rational(-c));
  return *this;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  r += o;
  return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  r -= o;
  return r;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  check_arity(o);
  LaurentPoly r(n_vars_);
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, Rational(c1 * c2));
  return r;
}

LaurentPoly LaurentPoly::operator*(const Rational& c) const {
  LaurentPoly r(n_vars_);
  if (sgn(c) == 0) return r;
  r.terms_ = terms_;
  for (auto& [m, v] : r.terms_) v *= c;
  return r;
}

LaurentPoly LaurentPoly::pow(unsigned k) const {
  LaurentPoly result = constant(n_vars_, Rational(1));
  LaurentPoly base = *this;
  while (k) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return result;
}

LaurentPoly LaurentPoly::partial(int var) const {
  if (var < 0 || var >= n_vars_) throw Error(Errc::ArityMismatch, "variable index out of range");
  LaurentPoly r(n_vars_);
  for (const auto& [m, c] : terms_) {
    int p = m.degree_in(var);
    if (p == 0) continue;
    r.add_term(m * Monomial::var(var, -1), Rational(c * p));
  }
  return r;
}

template <class T>
static T eval_impl(const LaurentPoly::TermMap& terms, int n_vars, std::span<const T> point) {
  if (static_cast<int>(point.size()) != n_vars) throw Error(Errc::ArityMismatch, "point size");
  T total(0);
  for (const auto& [m, c] : terms) {
    T t;
    if constexpr (is_exact_v<T>) {
      t = c;
    } else {
      t = c.get_d();
    }
    for (const auto& [v, p] : m.e) {
      const T& z = point[v];
      if (p < 0 && z == T(0)) throw Error(Errc::PoleAtPoint, v);
      T zp(1);
      int k = p < 0 ? -p : p;
      for (int i = 0; i < k; ++i) zp *= z;
      if (p < 0) t /= zp;
      else t *= zp;
    }
    total += t;
  }
  return total;
}

Rational LaurentPoly::eval(std::span<const Rational> point) const { return eval_impl(terms_, n_vars_, point); }
double LaurentPoly::eval(std::span<const double> point) const { return eval_impl(terms_, n_vars_, point); }

std::map<long, LaurentPoly> LaurentPoly::weight_components(const std::vector<int>& weight_of_var) const {
  if (static_cast<int>(weight_of_var.size()) != n_vars_) throw Error(Errc::ArityMismatch, "weight vector");
  std::map<long, LaurentPoly> parts;
  for (const auto& [m, c] : terms_) {
    long w = 0;
    for (const auto& [v, p] : m.e) w += static_cast<long>(p) * weight_of_var[v];
    auto it = parts.try_emplace(w, LaurentPoly(n_vars_)).first;
    it->second.add_term(m, c);
  }
  return parts;
}

LaurentPoly LaurentPoly::substitute(const std::vector<LaurentPoly>& images) const {
  if (static_cast<int>(images.size()) != n_vars_) throw Error(Errc::ArityMismatch, "substitution size");
  int out_arity = images.empty() ? 0 : images[0].n_vars();
  for (const auto& im : images)
    if (im.n_vars() != out_arity) throw Error(Errc::ArityMismatch, "substitution images differ in arity");
  LaurentPoly r(out_arity);
  for (const auto& [m, c] : terms_) {
    LaurentPoly t = constant(out_arity, c);
    for (const auto& [v, p] : m.e) {
      const LaurentPoly& im = images[v];
      if (p > 0) {
        t = t * im.pow(static_cast<unsigned>(p));
      } else {
        if (im.size() != 1) throw Error(Errc::PoleAtPoint, v, "negative power of a non-monomial image");
        const auto& [mm, cc] = *im.terms().begin();
        Rational inv = Rational(1) / cc;
        Rational cp(1);
        for (int i = 0; i < -p; ++i) cp *= inv;
        t = t * monomial(out_arity, mm.pow(p), cp);
      }
    }
    r += t;
  }
  return r;
}

LaurentPoly LaurentPoly::relabel(const std::vector<int>& perm, int new_arity) const {
  if (static_cast<int>(perm.size()) != n_vars_) throw Error(Errc::ArityMismatch, "relabel size");
  int arity = new_arity < 0 ? n_vars_ : new_arity;
  LaurentPoly r(arity);
  for (const auto& [m, c] : terms_) {
    Monomial out;
    for (const auto& [v, p] : m.e) out = out * Monomial::var(perm[v], p);
    r.add_term(out, c);
  }
  return r;
}

std::string LaurentPoly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = c;
    if (!first) os << (sgn(a) < 0 ? " - " : " + ");
    else if (sgn(a) < 0) os << "-";
    first = false;
    a = abs(a);
    bool unit = a == 1;
    if (!unit || m.e.empty()) os << a.get_str();
    bool star = !unit || m.e.empty();
    for (const auto& [v, p] : m.e) {
      if (star) os << "*";
      star = true;
      if (v < static_cast<int>(names.size())) os << names[v];
      else os << "z" << v;
      if (p != 1) os << "^" << p;
    }
  }
  return os.str();
}

template <class T>
CompiledPoly<T>::CompiledPoly(const LaurentPoly& f) {
  offset_.push_back(0);
  for (const auto& [m, c] : f.terms()) {
    if constexpr (is_exact_v<T>) coef_.push_back(c);
    else coef_.push_back(c.get_d());
    for (const auto& fe : m.e) factors_.push_back(fe);
    offset_.push_back(static_cast<std::uint32_t>(factors_.size()));
  }
}

template <class T>
T CompiledPoly<T>::operator()(std::span<const T> point) const {
  T total(0);
  for (std::size_t t = 0; t < coef_.size(); ++t) {
    T term = coef_[t];
    for (std::uint32_t k = offset_[t]; k < offset_[t + 1]; ++k) {
      auto [v, p] = factors_[k];
      const T& z = point[v];
      if (p < 0 && z == T(0)) throw Error(Errc::PoleAtPoint, v);
      if (p == 1) {
        term *= z;
      } else if (p == -1) {
        term /= z;
      } else {
        T zp(1);
        int a = p < 0 ? -p : p;
        for (int i = 0; i < a; ++i) zp *= z;
        if (p < 0) term /= zp;
        else term *= zp;
      }
    }
    total += term;
  }
  return total;
}

template class CompiledPoly<Rational>;
template class CompiledPoly<double>;

DualScalar DualScalar::variable(const Rational& v, int index) {
  DualScalar d(v);
  d.grad_.push_back({index, Rational(1)});
  return d;
}

Rational DualScalar::d(int index) const {
  for (const auto& [i, g] : grad_)
    if (i == index) return g;
  return Rational(0);
}

DualScalar::Grad DualScalar::combine(const Grad& a, const Rational& ca, const Grad& b, const Rational& cb) {
  Grad r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    Rational v;
    int idx;
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      idx = a[i].first;
      v = ca * a[i].second;
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      idx = b[j].first;
      v = cb * b[j].second;
      ++j;
    } else {
      idx = a[i].first;
      v = ca * a[i].second + cb * b[j].second;
      ++i;
      ++j;
    }
    if (sgn(v) != 0) r.push_back({idx, v});
  }
  return r;
}

DualScalar DualScalar::operator+(const DualScalar& o) const {
  DualScalar r(Rational(value_ + o.value_));
  r.grad_ = combine(grad_, Rational(1), o.grad_, Rational(1));
  return r;
}

DualScalar DualScalar::operator-(const DualScalar& o) const {
  DualScalar r(Rational(value_ - o.value_));
  r.grad_ = combine(grad_, Rational(1), o.grad_, Rational(-1));
  return r;
}

DualScalar DualScalar::operator-() const {
  DualScalar r(Rational(-value_));
  r.grad_ = grad_;
  for (auto& g : r.grad_) g.second = -g.second;
  return r;
}

DualScalar DualScalar::operator*(const DualScalar& o) const {
  DualScalar r(Rational(value_ * o.value_));
  r.grad_ = combine(grad_, o.value_, o.grad_, value_);
  return r;
}

DualScalar DualScalar::operator/(const DualScalar& o) const {
  if (sgn(o.value_) == 0) throw Error(Errc::PoleAtPoint, "division by zero in dual arithmetic");
  Rational inv = Rational(1) / o.value_;
  Rational q = value_ * inv;
  DualScalar r(q);
  // (f/g)' = f'/g − f g'/g²
  r.grad_ = combine(grad_, inv, o.grad_, Rational(-q * inv));
  return r;
}

int exact_rank(std::vector<std::vector<Rational>> rows) {
  if (rows.empty()) return 0;
  std::size_t cols = rows[0].size();
  int rank = 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && sgn(rows[piv][c]) == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (sgn(rows[i][c]) == 0) continue;
      Rational f = rows[i][c] / rows[r][c];
      for (std::size_t k = c; k < cols; ++k) rows[i][k] -= f * rows[r][k];
    }
    ++r;
    ++rank;
  }
  return rank;
}

int numeric_rank(const std::vector<std::vector<double>>& rows, double rel_tol) {
  if (rows.empty()) return 0;
  Eigen::MatrixXd m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(rel_tol);
  return static_cast<int>(qr.rank());
}

}  // namespace pentagram
