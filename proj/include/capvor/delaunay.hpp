#pragma once

#include <vector>

#include "capvor/hull.hpp"
#include "capvor/sites.hpp"

namespace capvor {

struct DelaunayTriangulation {
    std::vector<Site> sites;
    std::vector<HullFace> triangles;             // outward-oriented
    std::vector<std::vector<int>> adjacency;     // per site, neighbors in
                                                 // counterclockwise order
                                                 // seen from outside
};

// The hull faces of unit-vector sites are exactly the spherical Delaunay
// triangles: each face's supporting plane has every other site on its inner
// side, which is the empty-circumcap property.
DelaunayTriangulation delaunay_from_hull(const std::vector<HullFace>& faces,
                                         std::vector<Site> sites);

}  // namespace capvor
