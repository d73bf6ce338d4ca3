#include "capvor/sites.hpp"

#include "capvor/errors.hpp"

namespace capvor {

void validate_sites(const std::vector<Site>& sites, double eps) {
    if (sites.empty()) throw EmptySiteSet("site set is empty");
    for (std::size_t i = 0; i < sites.size(); ++i)
        for (std::size_t j = i + 1; j < sites.size(); ++j) {
            UnitVec d = sub(sites[i].pos, sites[j].pos);
            if (dot(d, d) <= eps * eps)
                throw DuplicateSites("sites '" + sites[i].id + "' and '" +
                                     sites[j].id + "' coincide");
        }
}

}  // namespace capvor
