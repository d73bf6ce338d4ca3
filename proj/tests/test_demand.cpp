#include <cmath>
#include <cstring>
#include <numeric>
#include <random>

#include "capvor/demand.hpp"
#include "capvor/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace capvor;

namespace {

constexpr double kPi = 3.14159265358979323846;

RasterDemand global_ones(int rows, int cols, const Sphere& s) {
    std::vector<double> dens(static_cast<std::size_t>(rows) * cols, 1.0);
    return make_raster(rows, cols, -kPi / 2, kPi / 2, -kPi, kPi, dens, s);
}

// Reference assignment: plain acos distances plus weights, lowest index wins.
void brute_assign(const std::vector<double>& px, const std::vector<double>& py,
                  const std::vector<double>& pz,
                  const std::vector<double>& mass,
                  const std::vector<Site>& sites, const std::vector<double>& d,
                  const Sphere& s, std::vector<int>& who,
                  std::vector<double>& load, double& dist) {
    load.assign(sites.size(), 0.0);
    who.assign(mass.size(), -1);
    dist = 0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
        UnitVec x{px[i], py[i], pz[i]};
        int best = 0;
        double bs = s.radius * testsup::acos_distance(x, sites[0].pos) +
                    (d.empty() ? 0.0 : d[0]);
        for (std::size_t m = 1; m < sites.size(); ++m) {
            double sc = s.radius * testsup::acos_distance(x, sites[m].pos) +
                        (d.empty() ? 0.0 : d[m]);
            if (sc < bs) {
                bs = sc;
                best = static_cast<int>(m);
            }
        }
        who[i] = best;
        load[best] += mass[i];
        dist += mass[i] * s.radius * testsup::acos_distance(x, sites[best].pos);
    }
}

}  // namespace

TEST_CASE("a global raster of ones integrates to the sphere area") {
    Sphere s{6371.0};
    auto r = global_ones(180, 360, s);
    double area = 4 * kPi * s.radius * s.radius;
    CHECK(total_mass(DemandMeasure{r}) == doctest::Approx(area).epsilon(1e-12));

    auto coarse = global_ones(18, 36, s);
    CHECK(total_mass(DemandMeasure{coarse}) ==
          doctest::Approx(area).epsilon(1e-12));
}

TEST_CASE("raster atoms sit at pixel centers") {
    Sphere s{1.0};
    std::vector<double> dens(4, 1.0);
    auto r = make_raster(2, 2, 0.0, 0.2, 0.0, 0.4, dens, s);
    REQUIRE(r.size() == 4);
    // row 0 is the southern band, columns run west to east
    GeoPoint g00 = unit_to_geo({r.px[0], r.py[0], r.pz[0]});
    CHECK(g00.lat == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(g00.lon == doctest::Approx(0.1).epsilon(1e-12));
    GeoPoint g11 = unit_to_geo({r.px[3], r.py[3], r.pz[3]});
    CHECK(g11.lat == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(g11.lon == doctest::Approx(0.3).epsilon(1e-12));
    // band weights are exact sine differences
    double dlon = 0.2;
    CHECK(r.pixel_mass[0] ==
          doctest::Approx(dlon * (std::sin(0.1) - std::sin(0.0))).epsilon(1e-15));
    CHECK(r.pixel_mass[3] ==
          doctest::Approx(dlon * (std::sin(0.2) - std::sin(0.1))).epsilon(1e-15));
}

TEST_CASE("make_raster rejects negative density") {
    Sphere s{1.0};
    std::vector<double> dens = {1.0, -0.5, 1.0, 1.0};
    CHECK_THROWS_AS(make_raster(2, 2, 0.0, 0.2, 0.0, 0.4, dens, s),
                    NegativeMass);
    CHECK_THROWS_AS([&] {
        DiscreteDemand d;
        add_point(d, {0.0, 0.0}, -1.0);
    }(), NegativeMass);
}

TEST_CASE("assignment partitions the total mass exactly") {
    Sphere s{6371.0};
    std::mt19937_64 rng(51);
    auto sites = testsup::random_sites(rng, 7);
    auto r = global_ones(90, 180, s);
    auto res = assign_demand(DemandMeasure{r}, sites, {}, s);
    double loads = std::accumulate(res.load.begin(), res.load.end(), 0.0);
    double total = total_mass(DemandMeasure{r});
    CHECK(loads == doctest::Approx(total).epsilon(1e-12));
    for (std::int32_t w : res.atom_site) {
        CHECK(w >= 0);
        CHECK(w < 7);
    }
}

TEST_CASE("assignment matches a brute-force per-atom scan") {
    Sphere s{2.0};
    std::mt19937_64 rng(52);
    auto sites = testsup::random_sites(rng, 9);
    std::vector<double> d = {0.0, 0.3, 0.0, 1.1, 0.0, 0.0, 0.45, 0.0, 0.2};

    DiscreteDemand dd;
    std::uniform_real_distribution<double> mdist(0.1, 5.0);
    for (int i = 0; i < 4000; ++i)
        add_point(dd, testsup::random_geo(rng), mdist(rng));

    auto res = assign_demand(DemandMeasure{dd}, sites, d, s);
    std::vector<int> who;
    std::vector<double> load;
    double dist;
    brute_assign(dd.px, dd.py, dd.pz, dd.mass, sites, d, s, who, load, dist);

    for (std::size_t i = 0; i < dd.size(); ++i)
        CHECK(res.atom_site[i] == who[i]);
    for (std::size_t m = 0; m < sites.size(); ++m)
        CHECK(res.load[m] == doctest::Approx(load[m]).epsilon(1e-12));
    CHECK(res.total_distance == doctest::Approx(dist).epsilon(1e-9));
}

TEST_CASE("raising one site's weight never raises its load") {
    Sphere s{1.0};
    std::mt19937_64 rng(53);
    auto sites = testsup::random_sites(rng, 5);
    auto r = global_ones(60, 120, s);
    std::vector<double> d(5, 0.0);
    double prev = assign_demand(DemandMeasure{r}, sites, d, s).load[2];
    for (double w : {0.1, 0.3, 0.7, 1.2, 2.0, 4.0}) {
        d[2] = w;
        double cur = assign_demand(DemandMeasure{r}, sites, d, s).load[2];
        CHECK(cur <= prev + 1e-15);
        prev = cur;
    }
    CHECK(prev == 0.0);  // weight 4.0 exceeds any geodesic gap on the unit sphere
}

TEST_CASE("results are identical for any thread count") {
    Sphere s{6371.0};
    std::mt19937_64 rng(54);
    auto sites = testsup::random_sites(rng, 11);
    std::vector<double> d = {0, 100, 0, 0, 55, 0, 0, 7, 0, 0, 300};
    auto r = global_ones(120, 240, s);

    auto one = assign_demand(DemandMeasure{r}, sites, d, s, 1);
    for (int threads : {2, 3, 7}) {
        auto many = assign_demand(DemandMeasure{r}, sites, d, s, threads);
        CHECK(std::memcmp(one.load.data(), many.load.data(),
                          one.load.size() * sizeof(double)) == 0);
        CHECK(std::memcmp(one.atom_site.data(), many.atom_site.data(),
                          one.atom_site.size() * sizeof(std::int32_t)) == 0);
        CHECK(std::memcmp(&one.total_distance, &many.total_distance,
                          sizeof(double)) == 0);
    }
}

TEST_CASE("integrate_assigned agrees with the full assignment") {
    Sphere s{1.0};
    std::mt19937_64 rng(55);
    auto sites = testsup::random_sites(rng, 6);
    std::vector<double> d = {0, 0.2, 0, 0.4, 0, 0};
    auto r = global_ones(45, 90, s);
    auto full = assign_demand(DemandMeasure{r}, sites, d, s);
    auto light = integrate_assigned(DemandMeasure{r}, sites, d, s);
    for (std::size_t m = 0; m < sites.size(); ++m)
        CHECK(full.load[m] == light.load[m]);
    CHECK(full.total_distance == light.total_distance);
}
