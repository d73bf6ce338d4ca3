#pragma once

#include <vector>

#include "capvor/geometry.hpp"

namespace capvor {

// Outward-oriented triangle on the hull, vertices indexing the input list.
struct HullFace {
    int a, b, c;
};

// Convex hull of >= 4 distinct points on the unit sphere, by randomized
// incremental insertion with conflict lists (deterministic seed). Points on
// a sphere are all extreme, so every input index appears among the faces.
// Throws TooFewSites, DuplicateSites, or HemisphericSites when all points
// lie on one plane (a single circle on the sphere, so no 3D hull exists).
std::vector<HullFace> convex_hull_3d(const std::vector<UnitVec>& points,
                                     double eps = kDefaultEps);

}  // namespace capvor
