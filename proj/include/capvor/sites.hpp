#pragma once

#include <limits>
#include <string>
#include <vector>

#include "capvor/geometry.hpp"

namespace capvor {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct Site {
    std::string id;
    GeoPoint geo;
    UnitVec pos;                  // cached geo_to_unit(geo)
    double capacity = kUnbounded;  // mass; kUnbounded when uncapped
};

inline Site make_site(std::string id, GeoPoint g, double capacity) {
    Site s;
    s.id = std::move(id);
    s.geo = g;
    s.pos = geo_to_unit(g);
    s.capacity = capacity;
    return s;
}

// Rejects empty sets and coincident positions (angular separation <= eps).
// Duplicate ids are a parse-level concern and are checked there.
void validate_sites(const std::vector<Site>& sites, double eps = kDefaultEps);

}  // namespace capvor
