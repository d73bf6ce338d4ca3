#pragma once

#include <vector>

#include "capvor/delaunay.hpp"
#include "capvor/geometry.hpp"
#include "capvor/sites.hpp"

namespace capvor {

// Polyline edge between two cells. v_start/v_end index the vertex list,
// or are -1 for a closed ring (two-cell diagrams); points then begin and
// end at the same sample.
struct DiagramEdge {
    int site_a = -1;
    int site_b = -1;
    int v_start = -1;
    int v_end = -1;
    std::vector<UnitVec> points;
};

struct DiagramGraph {
    std::vector<UnitVec> vertices;
    std::vector<DiagramEdge> edges;
    std::vector<std::vector<int>> cells;  // per site, edge ids looping the cell
};

// Classical diagram: vertices are triangle circumcenters (coincident ones
// merged), edges great-circle bisector arcs between them.
DiagramGraph voronoi_from_delaunay(const DelaunayTriangulation& t,
                                   const Sphere& s);

// Any site count >= 1: dispatches the 1-, 2- and 3-site closed forms, the
// hull construction otherwise.
DiagramGraph build_voronoi(const std::vector<Site>& sites, const Sphere& s);

// argmin_m d(x, S_m), ties to the lowest index.
int nearest_site(const UnitVec& x, const std::vector<Site>& sites,
                 const Sphere&);

}  // namespace capvor
