#include "pentagram/scalar.hpp"

#include "pentagram/errors.hpp"

namespace pentagram {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DegenerateCrossRatio: return "DegenerateCrossRatio";
    case Errc::NotCollinear: return "NotCollinear";
    case Errc::CoincidentPoints: return "CoincidentPoints";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::PoleAtPoint: return "PoleAtPoint";
    case Errc::DegenerateConfiguration: return "DegenerateConfiguration";
    case Errc::DivisibleByThree: return "DivisibleByThree";
    case Errc::NotDivisibleByThree: return "NotDivisibleByThree";
    case Errc::DegenerateRecurrence: return "DegenerateRecurrence";
    case Errc::ZeroCoefficient: return "ZeroCoefficient";
    case Errc::ZeroCoordinate: return "ZeroCoordinate";
    case Errc::InvalidEigenvalues: return "InvalidEigenvalues";
    case Errc::InvalidParameters: return "InvalidParameters";
    case Errc::NonRationalLift: return "NonRationalLift";
    case Errc::DegenerateDiagonals: return "DegenerateDiagonals";
    case Errc::LostGenericity: return "LostGenericity";
    case Errc::MapSingularity: return "MapSingularity";
    case Errc::ZeroScale: return "ZeroScale";
    case Errc::NotClosed: return "NotClosed";
    case Errc::NonFinite: return "NonFinite";
    case Errc::Instability: return "Instability";
    case Errc::IllConditionedFit: return "IllConditionedFit";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

static std::string compose(Errc code, std::optional<int> index, const std::string& detail) {
  std::string s = errc_name(code);
  if (index) s += "(" + std::to_string(*index) + ")";
  if (!detail.empty()) s += ": " + detail;
  return s;
}

Error::Error(Errc code, std::string detail)
    : std::runtime_error(compose(code, std::nullopt, detail)), code_(code) {}

Error::Error(Errc code, int index, std::string detail)
    : std::runtime_error(compose(code, index, detail)), code_(code), index_(index) {}

static std::optional<mpz_class> exact_cbrt_z(const mpz_class& z) {
  mpz_class r;
  bool neg = sgn(z) < 0;
  mpz_class m = neg ? mpz_class(-z) : z;
  if (mpz_root(r.get_mpz_t(), m.get_mpz_t(), 3) == 0) return std::nullopt;
  return neg ? mpz_class(-r) : r;
}

std::optional<Rational> exact_cbrt(const Rational& v) {
  auto p = exact_cbrt_z(v.get_num());
  if (!p) return std::nullopt;
  auto q = exact_cbrt_z(v.get_den());
  if (!q) return std::nullopt;
  Rational r(*p, *q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& v) {
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw Error(Errc::ParseError, "empty rational");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  bool slash = false, digit = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (c == '/') {
      if (slash || !digit) throw Error(Errc::ParseError, "malformed rational '" + s + "'");
      slash = true;
      digit = false;
    } else if (c >= '0' && c <= '9') {
      digit = true;
    } else {
      throw Error(Errc::ParseError, "malformed rational '" + s + "'");
    }
  }
  if (!digit) throw Error(Errc::ParseError, "malformed rational '" + s + "'");
  Rational q;
  if (q.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) throw Error(Errc::ParseError, "malformed rational '" + s + "'");
  if (sgn(q.get_den()) == 0) throw Error(Errc::ParseError, "zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

Rational random_rational(std::mt19937_64& rng, int max_abs, bool nonzero) {
  std::uniform_int_distribution<int> num(-max_abs, max_abs);
  std::uniform_int_distribution<int> den(1, max_abs);
  for (;;) {
    int p = num(rng);
    if (nonzero && p == 0) continue;
    Rational r(p, den(rng));
    r.canonicalize();
    return r;
  }
}

Rational random_rational_in(std::mt19937_64& rng, const Rational& lo, const Rational& hi, int den) {
  std::uniform_int_distribution<int> t(1, den - 1);
  Rational frac(t(rng), den);
  frac.canonicalize();
  Rational r = lo + (hi - lo) * frac;
  return r;
}

}  // namespace pentagram
