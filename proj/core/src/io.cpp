#include "pentagram/io.hpp"

#include <fstream>

namespace pentagram::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::ParseError, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
json vec_to_json(const std::vector<T>& v) {
  json a = json::array();
  for (const T& x : v) a.push_back(scalar_to_json(x));
  return a;
}

template <class T>
std::vector<T> vec_from_json(const json& j) {
  if (!j.is_array()) bad("expected an array");
  std::vector<T> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(scalar_from_json<T>(e));
  return v;
}

template <class T>
Vec3<T> vec3_from_json(const json& j) {
  std::vector<T> v = vec_from_json<T>(j);
  if (v.size() != 3) bad("expected three homogeneous coordinates");
  return {v[0], v[1], v[2]};
}

}  // namespace

std::string rational_to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

template <>
json scalar_to_json(const Rational& v) {
  return rational_to_string(v);
}

template <>
json scalar_to_json(const double& v) {
  return v;
}

template <>
Rational scalar_from_json<Rational>(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  bad("exact value must be a \"p/q\" string or an integer");
}

template <>
double scalar_from_json<double>(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_rational(j.get<std::string>()).get_d();
  bad("expected a number");
}

template <class T>
json polygon_to_json(const TwistedPolygon<T>& p) {
  json verts = json::array();
  for (const auto& v : p.vertices()) verts.push_back({scalar_to_json(v.h[0]), scalar_to_json(v.h[1]), scalar_to_json(v.h[2])});
  json mono = json::array();
  for (const auto& row : p.monodromy().m)
    mono.push_back({scalar_to_json(row[0]), scalar_to_json(row[1]), scalar_to_json(row[2])});
  return {{"n", p.n()}, {"mode", ScalarTraits<T>::mode}, {"vertices", verts}, {"monodromy", mono}};
}

template <class T>
TwistedPolygon<T> polygon_from_json_as(const json& j, double tol) {
  const json& verts = field(j, "vertices");
  const json& mono = field(j, "monodromy");
  if (!verts.is_array() || !mono.is_array() || mono.size() != 3) bad("malformed polygon");
  std::vector<ProjPoint<T>> pts;
  for (const auto& v : verts) pts.push_back(make_point(vec3_from_json<T>(v)));
  if (j.contains("n") && j.at("n") != static_cast<int>(pts.size())) bad("vertex count does not match n");
  Mat3<T> m{};
  for (int i = 0; i < 3; ++i) {
    Vec3<T> row = vec3_from_json<T>(mono[i]);
    for (int c = 0; c < 3; ++c) m[i][c] = row[c];
  }
  return TwistedPolygon<T>(std::move(pts), make_map(m), tol);
}

AnyPolygon polygon_from_json(const json& j, double tol) {
  std::string mode = j.is_object() && j.contains("mode") ? j.at("mode").get<std::string>() : "rational";
  if (mode == "rational") return polygon_from_json_as<Rational>(j, tol);
  if (mode == "float") return polygon_from_json_as<double>(j, tol);
  bad("unknown mode '" + mode + "'");
}

template <class T>
json corner_to_json(const CornerCoords<T>& c) {
  return {{"x", vec_to_json(c.x)}, {"y", vec_to_json(c.y)}};
}

template <class T>
CornerCoords<T> corner_from_json(const json& j) {
  CornerCoords<T> c{vec_from_json<T>(field(j, "x")), vec_from_json<T>(field(j, "y"))};
  if (c.x.size() != c.y.size()) bad("x and y differ in length");
  return c;
}

template <class T>
json ab_to_json(const ABCoords<T>& c) {
  return {{"a", vec_to_json(c.a)}, {"b", vec_to_json(c.b)}};
}

template <class T>
ABCoords<T> ab_from_json(const json& j) {
  auto a = vec_from_json<T>(field(j, "a"));
  auto b = vec_from_json<T>(field(j, "b"));
  if (a.size() != b.size()) bad("a and b differ in length");
  return ABCoords<T>(std::move(a), std::move(b));
}

json poly_to_json(const LaurentPoly& f) {
  json terms = json::array();
  for (const auto& [m, c] : f.terms()) {
    json e = json::array();
    for (auto [v, k] : m.e) e.push_back({v, k});
    terms.push_back({{"exp", e}, {"coeff", rational_to_string(c)}});
  }
  return {{"n_vars", f.n_vars()}, {"terms", terms}};
}

LaurentPoly poly_from_json(const json& j) {
  int nv = field(j, "n_vars").get<int>();
  LaurentPoly f(nv);
  for (const auto& t : field(j, "terms")) {
    Monomial m;
    for (const auto& p : field(t, "exp")) {
      if (!p.is_array() || p.size() != 2) bad("exponent entries are [var, power] pairs");
      int v = p[0].get<int>(), k = p[1].get<int>();
      if (v < 0 || v >= nv) bad("variable index out of range");
      m = m * Monomial::var(v, k);
    }
    f.add_term(m, scalar_from_json<Rational>(field(t, "coeff")));
  }
  return f;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) bad("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

#define IO_INSTANTIATE(T)                                                             \
  template json polygon_to_json(const TwistedPolygon<T>&);                            \
  template TwistedPolygon<T> polygon_from_json_as<T>(const json&, double);            \
  template json corner_to_json(const CornerCoords<T>&);                               \
  template CornerCoords<T> corner_from_json<T>(const json&);                          \
  template json ab_to_json(const ABCoords<T>&);                                       \
  template ABCoords<T> ab_from_json<T>(const json&);

IO_INSTANTIATE(Rational)
IO_INSTANTIATE(double)
#undef IO_INSTANTIATE

}  // namespace pentagram::io
