#include "capvor/geometry.hpp"

#include <cmath>

#include "capvor/errors.hpp"
#include "kernels/atan2_core.hpp"

namespace capvor {

UnitVec normalized(const UnitVec& v) {
    double n2 = dot(v, v);
    if (!(n2 > 1e-300))
        throw DegenerateTriangle("cannot normalize a near-zero vector");
    double inv = 1.0 / std::sqrt(n2);
    return {v.x * inv, v.y * inv, v.z * inv};
}

UnitVec geo_to_unit(const GeoPoint& p) {
    double cl = std::cos(p.lat);
    return {cl * std::cos(p.lon), cl * std::sin(p.lon), std::sin(p.lat)};
}

GeoPoint unit_to_geo(const UnitVec& v) {
    double hy = std::hypot(v.x, v.y);
    double lat = std::atan2(v.z, hy);
    // At a pole the longitude is arbitrary; canonicalize to 0.
    double lon = (hy == 0.0) ? 0.0 : std::atan2(v.y, v.x);
    if (lon <= -kern::kPiHi) lon = kern::kPiHi;
    return {lat, lon};
}

double angle_between(const UnitVec& a, const UnitVec& b) {
    return kern::unit_angle_core(a.x, a.y, a.z, b.x, b.y, b.z);
}

double orient3d_value(const UnitVec& a, const UnitVec& b, const UnitVec& c,
                      const UnitVec& d) {
    UnitVec u = sub(b, a);
    UnitVec v = sub(c, a);
    UnitVec w = sub(d, a);
    return dot(cross(u, v), w);
}

Orientation orient3d(const UnitVec& a, const UnitVec& b, const UnitVec& c,
                     const UnitVec& d, double eps) {
    double det = orient3d_value(a, b, c, d);
    if (det > eps) return Orientation::Positive;
    if (det < -eps) return Orientation::Negative;
    return Orientation::Zero;
}

UnitVec circumcenter(const UnitVec& a, const UnitVec& b, const UnitVec& c,
                     double eps) {
    UnitVec n = cross(sub(b, a), sub(c, a));
    double len = norm(n);
    if (len <= eps)
        throw DegenerateTriangle("triangle is collinear within epsilon");
    return {n.x / len, n.y / len, n.z / len};
}

}  // namespace capvor
