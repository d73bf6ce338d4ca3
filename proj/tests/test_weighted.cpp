#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "capvor/delaunay.hpp"
#include "capvor/errors.hpp"
#include "capvor/hull.hpp"
#include "capvor/weighted.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace capvor;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<Site> antipodal_pair() {
    return {make_site("a", {0.0, 0.0}, kUnbounded),
            make_site("b", {0.0, kPi}, kUnbounded)};
}

double pair_residual(const UnitVec& x, const Site& sa, const Site& sb,
                     double da, double db, const Sphere& s) {
    return std::fabs((geodesic_distance(x, sa.pos, s) + da) -
                     (geodesic_distance(x, sb.pos, s) + db));
}

}  // namespace

TEST_CASE("weighted_argmin with zero weights is nearest_site") {
    std::mt19937_64 rng(61);
    Sphere s{2.0};
    auto sites = testsup::random_sites(rng, 14);
    std::vector<double> zero(14, 0.0);
    for (int i = 0; i < 3000; ++i) {
        UnitVec x = testsup::random_unit(rng);
        CHECK(weighted_argmin(x, sites, zero, s) == nearest_site(x, sites, s));
    }
}

TEST_CASE("weighted_argmin shifts the antipodal boundary by half the gap") {
    Sphere s{1.0};
    auto sites = antipodal_pair();
    std::vector<double> d = {0.0, 0.2};
    // boundary sits at angular distance (pi + 0.2) / 2 ~ 1.6708 from site a
    UnitVec closer = geo_to_unit({0.0, 1.62});
    UnitVec beyond = geo_to_unit({0.0, 1.68});
    CHECK(weighted_argmin(closer, sites, d, s) == 0);
    CHECK(weighted_argmin(beyond, sites, d, s) == 1);
    CHECK(weighted_argmin(sites[0].pos, sites, d, s) == 0);
    CHECK(weighted_argmin(sites[1].pos, sites, d, s) == 1);
}

TEST_CASE("weighted_argmin is invariant under uniform weight shifts") {
    std::mt19937_64 rng(62);
    Sphere s{6371.0};
    auto sites = testsup::random_sites(rng, 9);
    std::uniform_real_distribution<double> wdist(0.0, 3000.0);
    std::vector<double> d(9);
    for (double& w : d) w = wdist(rng);
    for (int i = 0; i < 1000; ++i) {
        UnitVec x = testsup::random_unit(rng);
        int base = weighted_argmin(x, sites, d, s);
        for (double c : {-1500.0, 700.0, 12000.0}) {
            std::vector<double> shifted = d;
            for (double& w : shifted) w += c;
            CHECK(weighted_argmin(x, sites, shifted, s) == base);
        }
    }
}

TEST_CASE("raising one weight can only push points away from that site") {
    std::mt19937_64 rng(63);
    Sphere s{1.0};
    auto sites = testsup::random_sites(rng, 8);
    std::vector<double> d(8, 0.0);
    d[4] = 0.15;
    std::vector<double> d_up = d;
    d_up[4] = 0.6;
    for (int i = 0; i < 2000; ++i) {
        UnitVec x = testsup::random_unit(rng);
        if (weighted_argmin(x, sites, d, s) != 4)
            CHECK(weighted_argmin(x, sites, d_up, s) != 4);
    }
}

TEST_CASE("cell_measure covers the whole sphere for a single site") {
    Sphere s{6371.0};
    std::vector<Site> one = {make_site("只", {0.5, 0.5}, kUnbounded)};
    std::vector<double> dens(180 * 360, 1.0);
    DemandMeasure m = make_raster(180, 360, -kPi / 2, kPi / 2, -kPi, kPi,
                                  dens, s);
    CHECK(cell_measure(0, one, {0.0}, m, s) ==
          doctest::Approx(total_mass(m)).epsilon(1e-12));
}

TEST_CASE("a weight of two sphere circumferences starves a site") {
    Sphere s{1.0};
    std::mt19937_64 rng(64);
    auto sites = testsup::random_sites(rng, 6);
    std::vector<double> dens(90 * 180, 1.0);
    DemandMeasure m = make_raster(90, 180, -kPi / 2, kPi / 2, -kPi, kPi,
                                  dens, s);
    std::vector<double> d(6, 0.0);
    d[2] = 2 * kPi;
    CHECK(cell_measure(2, sites, d, m, s) == 0.0);
}

TEST_CASE("two mirrored sites split a uniform raster evenly") {
    Sphere s{1.0};
    std::vector<Site> sites = {make_site("w", {0.0, -kPi / 2}, kUnbounded),
                               make_site("e", {0.0, kPi / 2}, kUnbounded)};
    std::vector<double> dens(180 * 360, 1.0);
    DemandMeasure m = make_raster(180, 360, -kPi / 2, kPi / 2, -kPi, kPi,
                                  dens, s);
    double half = total_mass(m) / 2;
    CHECK(cell_measure(0, sites, {0.0, 0.0}, m, s) ==
          doctest::Approx(half).epsilon(1e-3));
    CHECK(cell_measure(1, sites, {0.0, 0.0}, m, s) ==
          doctest::Approx(half).epsilon(1e-3));
}

TEST_CASE("antipodal weighted boundary is the predicted small circle") {
    Sphere s{1.0};
    auto sites = antipodal_pair();
    std::vector<double> d = {0.0, 0.2};
    auto arcs = trace_boundary(0, 1, sites, d, s);
    REQUIRE(arcs.size() == 1);
    CHECK(arcs[0].closed);
    double expect_a = (kPi + 0.2) / 2;  // distance from site a
    double expect_b = (kPi - 0.2) / 2;  // distance from site b
    REQUIRE(arcs[0].points.size() >= 16);
    for (const UnitVec& x : arcs[0].points) {
        CHECK(geodesic_distance(x, sites[0].pos, s) ==
              doctest::Approx(expect_a).epsilon(1e-9));
        CHECK(geodesic_distance(x, sites[1].pos, s) ==
              doctest::Approx(expect_b).epsilon(1e-9));
        CHECK(pair_residual(x, sites[0], sites[1], d[0], d[1], s) <= 1e-9);
    }
}

TEST_CASE("equal weights trace the classical great-circle bisector") {
    Sphere s{1.0};
    std::vector<Site> sites = {make_site("a", {0.3, -0.4}, kUnbounded),
                               make_site("b", {-0.2, 0.9}, kUnbounded)};
    auto arcs = trace_boundary(0, 1, sites, {0.7, 0.7}, s);
    REQUIRE(arcs.size() == 1);
    CHECK(arcs[0].closed);
    UnitVec w = normalized(sub(sites[0].pos, sites[1].pos));
    for (const UnitVec& x : arcs[0].points) {
        CHECK(std::fabs(dot(x, w)) <= 1e-9);  // on the perpendicular plane
        CHECK(pair_residual(x, sites[0], sites[1], 0.7, 0.7, s) <= 1e-9);
    }
}

TEST_CASE("boundary samples respect the step bound and residual bound") {
    Sphere s{6371.0};
    std::mt19937_64 rng(65);
    auto sites = testsup::random_sites(rng, 7);
    std::vector<double> d = {0.0, 300.0, 80.0, 0.0, 1200.0, 40.0, 0.0};
    double step = 0.02;
    for (int m = 0; m < 7; ++m) {
        for (int l = m + 1; l < 7; ++l) {
            double dist = geodesic_distance(sites[m].pos, sites[l].pos, s);
            if (std::fabs(d[m] - d[l]) >= dist) continue;
            std::vector<BoundaryArc> arcs;
            try {
                arcs = trace_boundary(m, l, sites, d, s, step);
            } catch (const NoSharedEdge&) {
                continue;
            }
            for (const auto& arc : arcs) {
                REQUIRE(arc.points.size() >= 2);
                for (std::size_t i = 0; i + 1 < arc.points.size(); ++i) {
                    double gap = geodesic_distance(arc.points[i],
                                                   arc.points[i + 1], s);
                    CHECK(gap <= step * s.radius * (1 + 1e-9));
                }
                for (const UnitVec& x : arc.points)
                    CHECK(pair_residual(x, sites[m], sites[l], d[m], d[l],
                                        s) <= 1e-9 * s.radius);
            }
        }
    }
}

TEST_CASE("interior samples of a traced edge belong to the two cells") {
    Sphere s{1.0};
    std::mt19937_64 rng(66);
    auto sites = testsup::random_sites(rng, 6);
    std::vector<double> d = {0.0, 0.1, 0.0, 0.25, 0.05, 0.0};
    for (int l = 1; l < 6; ++l) {
        std::vector<BoundaryArc> arcs;
        try {
            arcs = trace_boundary(0, l, sites, d, s);
        } catch (const NoSharedEdge&) {
            continue;
        } catch (const EmptyBisector&) {
            continue;
        }
        for (const auto& arc : arcs) {
            for (std::size_t i = 1; i + 1 < arc.points.size(); ++i) {
                int who = weighted_argmin(arc.points[i], sites, d, s);
                CHECK((who == 0 || who == l));
            }
        }
    }
}

TEST_CASE("weight gap at the site distance raises EmptyBisector") {
    Sphere s{1.0};
    auto sites = antipodal_pair();
    CHECK_THROWS_AS(trace_boundary(0, 1, sites, {0.0, kPi}, s), EmptyBisector);
    CHECK_THROWS_AS(trace_boundary(0, 1, sites, {4.0, 0.0}, s), EmptyBisector);
    std::vector<Site> close = {make_site("a", {0.0, 0.0}, kUnbounded),
                               make_site("b", {0.0, 0.3}, kUnbounded)};
    CHECK_THROWS_AS(trace_boundary(0, 1, close, {0.0, 0.3}, s), EmptyBisector);
}

TEST_CASE("opposite cells separated by flanking sites share no edge") {
    Sphere s{1.0};
    std::vector<Site> sites = {make_site("a", {0.0, 0.0}, kUnbounded),
                               make_site("b", {0.0, kPi / 2}, kUnbounded),
                               make_site("c", {0.0, kPi}, kUnbounded),
                               make_site("d", {0.0, -kPi / 2}, kUnbounded)};
    // both halves of the a|c bisector run through foreign territory
    CHECK_THROWS_AS(trace_boundary(0, 2, sites, {0.0, 0.0, 0.0, 0.0}, s),
                    NoSharedEdge);
}

TEST_CASE("three equatorial sites meet at the poles") {
    Sphere s{1.0};
    std::vector<Site> sites;
    for (int k = 0; k < 3; ++k)
        sites.push_back(make_site("e" + std::to_string(k),
                                  {0.0, -kPi / 2 + k * (2 * kPi / 3)},
                                  kUnbounded));
    std::vector<double> zero(3, 0.0);
    auto arcs = trace_boundary(0, 1, sites, zero, s);
    REQUIRE(arcs.size() == 1);
    CHECK_FALSE(arcs[0].closed);
    double z_first = arcs[0].points.front().z;
    double z_last = arcs[0].points.back().z;
    CHECK(std::fabs(std::fabs(z_first) - 1.0) <= 1e-9);
    CHECK(std::fabs(std::fabs(z_last) - 1.0) <= 1e-9);
    CHECK(z_first * z_last < 0);  // one endpoint per pole

    auto g = build_weighted_diagram(sites, zero, s);
    CHECK(g.vertices.size() == 2);
    CHECK(g.edges.size() == 3);
    for (const auto& cell : g.cells) CHECK(cell.size() == 2);
}

TEST_CASE("zero-weight diagram reproduces the classical construction") {
    Sphere s{1.0};
    std::mt19937_64 rng(67);
    auto sites = testsup::random_sites(rng, 12);
    std::vector<double> zero(12, 0.0);

    std::vector<UnitVec> pts;
    for (const Site& st : sites) pts.push_back(st.pos);
    auto classical =
        voronoi_from_delaunay(delaunay_from_hull(convex_hull_3d(pts), sites), s);
    auto weighted = build_weighted_diagram(sites, zero, s);

    std::set<std::pair<int, int>> cpairs, wpairs;
    for (const auto& e : classical.edges)
        cpairs.insert(std::minmax(e.site_a, e.site_b));
    for (const auto& e : weighted.edges)
        wpairs.insert(std::minmax(e.site_a, e.site_b));
    CHECK(cpairs == wpairs);

    // vertex sets coincide within the merge tolerance
    REQUIRE(weighted.vertices.size() == classical.vertices.size());
    for (const UnitVec& v : classical.vertices) {
        double best = 10;
        for (const UnitVec& w : weighted.vertices)
            best = std::min(best, norm(sub(v, w)));
        CHECK(best <= 1e-8);
    }

    // every weighted sample keeps the defining equality of the classical edge
    for (const auto& e : weighted.edges)
        for (const UnitVec& x : e.points) {
            double da = geodesic_distance(x, sites[e.site_a].pos, s);
            double db = geodesic_distance(x, sites[e.site_b].pos, s);
            CHECK(std::fabs(da - db) <= 1e-9);
        }
}

TEST_CASE("weighted diagram vertices satisfy the cyclic label identity") {
    Sphere s{1.0};
    std::mt19937_64 rng(68);
    auto sites = testsup::random_sites(rng, 7);
    std::vector<double> d = {0.0, 0.12, 0.31, 0.0, 0.22, 0.08, 0.0};
    auto g = build_weighted_diagram(sites, d, s);
    REQUIRE(g.vertices.size() >= 2);
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        std::set<int> incident;
        for (const auto& e : g.edges)
            if (e.v_start == static_cast<int>(v) ||
                e.v_end == static_cast<int>(v)) {
                incident.insert(e.site_a);
                incident.insert(e.site_b);
            }
        REQUIRE(incident.size() >= 3);
        std::vector<int> ring(incident.begin(), incident.end());
        double cyc = 0;
        for (std::size_t k = 0; k < ring.size(); ++k)
            cyc += d[ring[k]] - d[ring[(k + 1) % ring.size()]];
        CHECK(std::fabs(cyc) <= 1e-15);
        // the vertex scores of all incident sites agree
        double ref = geodesic_distance(g.vertices[v], sites[ring[0]].pos, s) +
                     d[ring[0]];
        for (int m : ring)
            CHECK(geodesic_distance(g.vertices[v], sites[m].pos, s) + d[m] ==
                  doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("min_normalized pins the smallest weight at zero") {
    auto out = min_normalized({3.0, 1.0, 5.0});
    CHECK(out == std::vector<double>{2.0, 0.0, 4.0});
    auto kept = min_normalized({0.0, 0.4});
    CHECK(kept == std::vector<double>{0.0, 0.4});
    CHECK(min_normalized({}).empty());
}
