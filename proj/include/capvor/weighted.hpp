#pragma once

#include <vector>

#include "capvor/demand.hpp"
#include "capvor/geometry.hpp"
#include "capvor/sites.hpp"
#include "capvor/voronoi.hpp"

// Additively weighted diagram: site m claims x when d(x,S_m) + d_m is
// minimal. Weights are lengths, same units as sphere distances. With d = 0
// everything here reduces to the classical diagram.

namespace capvor {

// 0.5 degrees of arc
inline constexpr double kDefaultTraceStep = 0.008726646259971648;

// argmin_m [d(x, S_m) + d_m], ties to the lowest index. Throws EmptySiteSet.
// Any finite d is accepted; a uniform shift never changes the winner.
int weighted_argmin(const UnitVec& x, const std::vector<Site>& sites,
                    const std::vector<double>& d, const Sphere& s);

// Demand mass claimed by site m under weights d.
double cell_measure(int m, const std::vector<Site>& sites,
                    const std::vector<double>& d, const DemandMeasure& demand,
                    const Sphere& s, int threads = 1);

// One maximal run of the pair (m, l) level curve on which both sites are
// jointly minimal. closed means the whole level loop qualified; its points
// then start and end on the same sample.
struct BoundaryArc {
    std::vector<UnitVec> points;
    bool closed = false;
};

// Polylines of the shared cell boundary between sites m and l: the level set
// d(x,S_m) + d_m = d(x,S_l) + d_l clipped to where no third site scores
// lower. Every point satisfies the level equation within 1e-9 * R and
// consecutive points are at most step apart. Throws EmptyBisector when
// |d_m - d_l| >= d(S_m,S_l) and NoSharedEdge when the clip leaves nothing.
std::vector<BoundaryArc> trace_boundary(int m, int l,
                                        const std::vector<Site>& sites,
                                        const std::vector<double>& d,
                                        const Sphere& s,
                                        double step = kDefaultTraceStep);

// Traces every pair with a nonempty shared boundary and stitches the arcs
// into a graph. Arc endpoints meeting within 1e-9 become shared vertices.
// cells[m] lists the ids of the edges bounding site m's cell.
DiagramGraph build_weighted_diagram(const std::vector<Site>& sites,
                                    const std::vector<double>& d,
                                    const Sphere& s,
                                    double step = kDefaultTraceStep);

// Shifts d so its minimum is exactly 0 (the assignment is shift-invariant,
// so this is the canonical representative).
std::vector<double> min_normalized(std::vector<double> d);

}  // namespace capvor
