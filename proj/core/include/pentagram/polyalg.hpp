#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pentagram/errors.hpp"
#include "pentagram/scalar.hpp"

namespace pentagram {

// Sparse exponent vector: (variable, exponent) pairs sorted by variable,
// exponents nonzero.
struct Monomial {
  std::vector<std::pair<int, int>> e;

  static Monomial one() { return {}; }
  static Monomial var(int v, int power = 1);

  int degree_in(int v) const;
  Monomial operator*(const Monomial& o) const;
  Monomial pow(int k) const;
  Monomial inverse() const { return pow(-1); }
  bool operator==(const Monomial&) const = default;
  auto operator<=>(const Monomial&) const = default;
};

class LaurentPoly {
 public:
  using TermMap = std::map<Monomial, Rational>;

  explicit LaurentPoly(int n_vars = 0) : n_vars_(n_vars) {}

  static LaurentPoly constant(int n_vars, const Rational& c);
  static LaurentPoly variable(int n_vars, int v);
  static LaurentPoly monomial(int n_vars, const Monomial& m, const Rational& c = Rational(1));

  int n_vars() const { return n_vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(const Monomial& m) const;

  // Adds c·m in place, dropping the term if it cancels.
  void add_term(const Monomial& m, const Rational& c);

  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator-() const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly operator*(const Rational& c) const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  bool operator==(const LaurentPoly& o) const { return n_vars_ == o.n_vars_ && terms_ == o.terms_; }
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  LaurentPoly pow(unsigned k) const;
  LaurentPoly partial(int var) const;
  Rational eval(std::span<const Rational> point) const;
  double eval(std::span<const double> point) const;

  // Homogeneous parts under the grading weight(term) = Σ exponent·weight_of_var.
  std::map<long, LaurentPoly> weight_components(const std::vector<int>& weight_of_var) const;

  // Replace variable v by images[v]. Variables appearing with negative
  // exponent must map to single-term polynomials.
  LaurentPoly substitute(const std::vector<LaurentPoly>& images) const;

  // Relabel variables: v -> perm[v], keeping coefficients.
  LaurentPoly relabel(const std::vector<int>& perm, int new_arity = -1) const;

  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  void check_arity(const LaurentPoly& o) const;
  int n_vars_;
  TermMap terms_;
};

inline LaurentPoly poly_add(const LaurentPoly& f, const LaurentPoly& g) { return f + g; }
inline LaurentPoly poly_mul(const LaurentPoly& f, const LaurentPoly& g) { return f * g; }
inline LaurentPoly poly_neg(const LaurentPoly& f) { return -f; }
inline LaurentPoly poly_partial(const LaurentPoly& f, int var) { return f.partial(var); }
inline Rational poly_eval(const LaurentPoly& f, std::span<const Rational> point) { return f.eval(point); }

// Flattened term list for repeated numeric evaluation.
template <class T>
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const LaurentPoly& f);
  T operator()(std::span<const T> point) const;
  std::size_t size() const { return coef_.size(); }

 private:
  std::vector<T> coef_;
  std::vector<std::uint32_t> offset_;
  std::vector<std::pair<int, int>> factors_;
};

// Value plus sparse gradient, exact. Arithmetic follows the Leibniz rule.
class DualScalar {
 public:
  using Grad = std::vector<std::pair<int, Rational>>;

  DualScalar() = default;
  DualScalar(const Rational& v) : value_(v) {}  // NOLINT: constants convert implicitly
  DualScalar(long v) : value_(v) {}             // NOLINT
  DualScalar(int v) : value_(v) {}              // NOLINT
  static DualScalar variable(const Rational& v, int index);

  const Rational& value() const { return value_; }
  const Grad& grad() const { return grad_; }
  Rational d(int index) const;

  DualScalar operator+(const DualScalar& o) const;
  DualScalar operator-(const DualScalar& o) const;
  DualScalar operator*(const DualScalar& o) const;
  DualScalar operator/(const DualScalar& o) const;
  DualScalar operator-() const;
  DualScalar& operator+=(const DualScalar& o) { return *this = *this + o; }
  DualScalar& operator-=(const DualScalar& o) { return *this = *this - o; }
  DualScalar& operator*=(const DualScalar& o) { return *this = *this * o; }
  DualScalar& operator/=(const DualScalar& o) { return *this = *this / o; }

 private:
  static Grad combine(const Grad& a, const Rational& ca, const Grad& b, const Rational& cb);
  Rational value_;
  Grad grad_;
};

// Rank over the rationals by Gaussian elimination.
int exact_rank(std::vector<std::vector<Rational>> rows);

// Floating-point rank via column-pivoted QR with relative threshold.
int numeric_rank(const std::vector<std::vector<double>>& rows, double rel_tol = 1e-10);

}  // namespace pentagram
