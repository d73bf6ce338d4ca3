#pragma once

#include <random>
#include <string>
#include <vector>

#include "capvor/geometry.hpp"
#include "capvor/sites.hpp"

namespace testsup {

inline capvor::UnitVec random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    for (;;) {
        capvor::UnitVec v{g(rng), g(rng), g(rng)};
        double n = capvor::norm(v);
        if (n > 1e-6) return capvor::scale(v, 1.0 / n);
    }
}

inline capvor::GeoPoint random_geo(std::mt19937_64& rng) {
    return capvor::unit_to_geo(random_unit(rng));
}

// n sites at uniform random positions, unbounded capacity, ids s0..s{n-1}.
inline std::vector<capvor::Site> random_sites(std::mt19937_64& rng, int n) {
    std::vector<capvor::Site> sites;
    sites.reserve(n);
    for (int i = 0; i < n; ++i)
        sites.push_back(capvor::make_site("s" + std::to_string(i),
                                          random_geo(rng),
                                          capvor::kUnbounded));
    return sites;
}

// Reference distance kept deliberately independent of the library's
// atan2-based path.
inline double acos_distance(const capvor::UnitVec& a,
                            const capvor::UnitVec& b) {
    double d = capvor::dot(a, b);
    if (d > 1.0) d = 1.0;
    if (d < -1.0) d = -1.0;
    return std::acos(d);
}

}  // namespace testsup
