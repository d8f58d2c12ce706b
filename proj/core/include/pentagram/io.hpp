#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "pentagram/polyalg.hpp"
#include "pentagram/polygon.hpp"

namespace pentagram::io {

using nlohmann::json;

// Exact values travel as strings "p/q" (or "p" for integers), parsed by
// parse_rational; floats as numbers.
std::string rational_to_string(const Rational& q);

template <class T>
json scalar_to_json(const T& v);
template <class T>
T scalar_from_json(const json& j);
template <>
json scalar_to_json(const Rational& v);
template <>
json scalar_to_json(const double& v);
template <>
Rational scalar_from_json<Rational>(const json& j);
template <>
double scalar_from_json<double>(const json& j);

// { "n", "mode", "vertices": [[h0,h1,h2],...], "monodromy": [[...],[...],[...]] }
template <class T>
json polygon_to_json(const TwistedPolygon<T>& p);

using AnyPolygon = std::variant<TwistedPolygon<Rational>, TwistedPolygon<double>>;

// Dispatches on "mode". Float polygons take tol as their tolerance.
AnyPolygon polygon_from_json(const json& j, double tol = default_tolerance());

template <class T>
TwistedPolygon<T> polygon_from_json_as(const json& j, double tol = default_tolerance());

template <class T>
json corner_to_json(const CornerCoords<T>& c);
template <class T>
CornerCoords<T> corner_from_json(const json& j);

template <class T>
json ab_to_json(const ABCoords<T>& c);
template <class T>
ABCoords<T> ab_from_json(const json& j);

// { "n_vars", "terms": [{ "exp": [[var, e], ...], "coeff": "p/q" }, ...] } in monomial order.
json poly_to_json(const LaurentPoly& f);
LaurentPoly poly_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace pentagram::io
