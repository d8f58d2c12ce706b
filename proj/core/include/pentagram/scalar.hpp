#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <type_traits>

#include <gmpxx.h>

namespace pentagram {

using Rational = mpq_class;

inline double default_tolerance() { return 1e-9; }

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* mode = "rational";
  static bool is_zero(const Rational& v, double = 0.0) { return sgn(v) == 0; }
  static bool near(const Rational& a, const Rational& b, double = 0.0) { return a == b; }
  static double to_double(const Rational& v) { return v.get_d(); }
  static Rational from_int(long v) { return Rational(v); }
  static Rational abs(const Rational& v) { return ::abs(v); }
  static bool finite(const Rational&) { return true; }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* mode = "float";
  static bool is_zero(double v, double tol = default_tolerance()) { return std::abs(v) <= tol; }
  // Relative comparison with an absolute floor at unit scale.
  static bool near(double a, double b, double tol = default_tolerance()) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
  }
  static double to_double(double v) { return v; }
  static double from_int(long v) { return static_cast<double>(v); }
  static double abs(double v) { return std::abs(v); }
  static bool finite(double v) { return std::isfinite(v); }
};

template <class T>
inline constexpr bool is_exact_v = ScalarTraits<T>::exact;

// Real cube root. For rationals returns nothing unless numerator and
// denominator are both perfect cubes.
std::optional<Rational> exact_cbrt(const Rational& v);

template <class T>
std::optional<T> cube_root(const T& v) {
  if constexpr (is_exact_v<T>) {
    return exact_cbrt(v);
  } else {
    return std::cbrt(v);
  }
}

std::string to_string(const Rational& v);
Rational parse_rational(const std::string& s);

// Uniform rational p/q with |p| <= max_abs, 1 <= q <= max_abs.
Rational random_rational(std::mt19937_64& rng, int max_abs = 50, bool nonzero = true);

// Uniform rational in the open interval (lo, hi) with denominator <= den.
Rational random_rational_in(std::mt19937_64& rng, const Rational& lo, const Rational& hi, int den = 50);

template <class T>
T random_scalar(std::mt19937_64& rng, int max_abs = 50, bool nonzero = true) {
  if constexpr (is_exact_v<T>) {
    return random_rational(rng, max_abs, nonzero);
  } else {
    return random_rational(rng, max_abs, nonzero).get_d();
  }
}

}  // namespace pentagram
