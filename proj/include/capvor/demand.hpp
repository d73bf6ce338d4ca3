#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "capvor/geometry.hpp"
#include "capvor/sites.hpp"

namespace capvor {

// Weighted point atoms. Positions are kept as structure-of-arrays so the
// assignment kernels can run over them directly.
struct DiscreteDemand {
    std::vector<GeoPoint> geo;
    std::vector<double> px, py, pz;
    std::vector<double> mass;

    std::size_t size() const { return mass.size(); }
};

// Throws NegativeMass unless m > 0.
void add_point(DiscreteDemand& d, const GeoPoint& p, double m);

// Density grid, row-major with row 0 at the southern edge. Each pixel is
// one atom at its center carrying density times the exact band area
// R^2 * dlon * (sin(lat_top) - sin(lat_bottom)), so a full-sphere grid of
// ones integrates to exactly 4 pi R^2 up to summation rounding.
struct RasterDemand {
    int rows = 0, cols = 0;
    double lat_min = 0, lat_max = 0, lon_min = 0, lon_max = 0;  // radians
    double radius = 1.0;
    std::vector<double> density;
    std::vector<double> px, py, pz;
    std::vector<double> pixel_mass;

    std::size_t size() const { return pixel_mass.size(); }
};

// Throws NegativeMass on a negative density entry.
RasterDemand make_raster(int rows, int cols, double lat_min, double lat_max,
                         double lon_min, double lon_max,
                         std::vector<double> density, const Sphere& s);

using DemandMeasure = std::variant<DiscreteDemand, RasterDemand>;

double total_mass(const DemandMeasure& m);

struct AssignedIntegral {
    std::vector<double> load;   // demand mass per site
    double total_distance = 0;  // sum of mass * distance-to-assigned-site
};

struct FullAssignment {
    std::vector<std::int32_t> atom_site;
    std::vector<double> load;
    double total_distance = 0;
};

// Assigns every atom by weighted argmin (d in length units, one entry per
// site, ties to the lowest site index) and accumulates per-site mass and
// total distance. Atoms are processed in fixed-size chunks reduced in chunk
// order, so the result is identical for any thread count.
FullAssignment assign_demand(const DemandMeasure& m,
                             const std::vector<Site>& sites,
                             const std::vector<double>& d, const Sphere& s,
                             int threads = 1);

AssignedIntegral integrate_assigned(const DemandMeasure& m,
                                    const std::vector<Site>& sites,
                                    const std::vector<double>& d,
                                    const Sphere& s, int threads = 1);

// Same accumulation as assign_demand but with the site of every atom given
// by the caller, so rechecking a stored assignment reproduces the original
// loads and total bit for bit. Throws MismatchedAssignment on a label list
// of the wrong length or with an out-of-range site.
AssignedIntegral integrate_labels(const DemandMeasure& m,
                                  const std::vector<Site>& sites,
                                  const std::vector<std::int32_t>& labels,
                                  const Sphere& s);

}  // namespace capvor
