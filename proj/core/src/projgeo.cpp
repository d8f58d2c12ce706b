#include "pentagram/projgeo.hpp"

namespace pentagram {

template Vec3<Rational> cross(const Vec3<Rational>&, const Vec3<Rational>&);
template Vec3<double> cross(const Vec3<double>&, const Vec3<double>&);

}  // namespace pentagram
