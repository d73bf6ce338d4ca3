#pragma once

#include <cmath>

namespace capvor {

// Degeneracy threshold shared by the orientation predicate, duplicate-site
// detection and triangle validity checks. Callers may pass their own.
inline constexpr double kDefaultEps = 1e-12;

struct Sphere {
    double radius = 1.0;  // > 0
};

// Radians. lat in [-pi/2, pi/2], lon in (-pi, pi]; poles carry lon = 0.
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
};

struct UnitVec {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double dot(const UnitVec& a, const UnitVec& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline UnitVec cross(const UnitVec& a, const UnitVec& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
            a.x * b.y - a.y * b.x};
}

inline UnitVec sub(const UnitVec& a, const UnitVec& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}

inline UnitVec add(const UnitVec& a, const UnitVec& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}

inline UnitVec scale(const UnitVec& a, double s) {
    return {a.x * s, a.y * s, a.z * s};
}

inline double norm(const UnitVec& a) { return std::sqrt(dot(a, a)); }

inline UnitVec neg(const UnitVec& a) { return {-a.x, -a.y, -a.z}; }

// Normalizes; the squared norm must be bounded away from zero.
UnitVec normalized(const UnitVec& v);

UnitVec geo_to_unit(const GeoPoint& p);
GeoPoint unit_to_geo(const UnitVec& v);

// Angle in radians between unit vectors, in [0, pi]. Uses the
// atan2(cross-norm, dot) form, accurate near both 0 and pi, and evaluates
// through the same code path as the batch kernels.
double angle_between(const UnitVec& a, const UnitVec& b);

inline double geodesic_distance(const UnitVec& a, const UnitVec& b,
                                const Sphere& s) {
    return s.radius * angle_between(a, b);
}

enum class Orientation { Negative = -1, Zero = 0, Positive = 1 };

// Sign of det[b-a, c-a, d-a]; |det| <= eps reports Zero.
Orientation orient3d(const UnitVec& a, const UnitVec& b, const UnitVec& c,
                     const UnitVec& d, double eps = kDefaultEps);

double orient3d_value(const UnitVec& a, const UnitVec& b, const UnitVec& c,
                      const UnitVec& d);

// Spherical circumcenter normalize((b-a) x (c-a)), on the side matching the
// triangle's orientation. Throws DegenerateTriangle when the three points
// are too close to collinear in 3-space.
UnitVec circumcenter(const UnitVec& a, const UnitVec& b, const UnitVec& c,
                     double eps = kDefaultEps);

}  // namespace capvor
