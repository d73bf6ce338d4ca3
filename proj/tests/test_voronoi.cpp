#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "capvor/delaunay.hpp"
#include "capvor/errors.hpp"
#include "capvor/voronoi.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace capvor;

namespace {

constexpr double kPi = 3.14159265358979323846;

DelaunayTriangulation triangulate(const std::vector<Site>& sites) {
    std::vector<UnitVec> pts;
    for (const Site& s : sites) pts.push_back(s.pos);
    return delaunay_from_hull(convex_hull_3d(pts), sites);
}

std::vector<Site> octahedron_sites() {
    std::vector<Site> sites;
    const double axes[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                               {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
    for (int i = 0; i < 6; ++i) {
        Site s;
        s.id = "a" + std::to_string(i);
        s.pos = {axes[i][0], axes[i][1], axes[i][2]};
        s.geo = unit_to_geo(s.pos);
        s.capacity = kUnbounded;
        sites.push_back(s);
    }
    return sites;
}

// Independent of the library path: plain acos distances.
int brute_nearest(const UnitVec& x, const std::vector<Site>& sites) {
    int best = 0;
    double bd = testsup::acos_distance(x, sites[0].pos);
    for (std::size_t m = 1; m < sites.size(); ++m) {
        double d = testsup::acos_distance(x, sites[m].pos);
        if (d < bd) {
            bd = d;
            best = static_cast<int>(m);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("delaunay of a tetrahedron has degree-3 adjacency") {
    std::mt19937_64 rng(41);
    auto sites = testsup::random_sites(rng, 4);
    auto t = triangulate(sites);
    CHECK(t.triangles.size() == 4);
    for (const auto& adj : t.adjacency) CHECK(adj.size() == 3);
}

TEST_CASE("delaunay satisfies the empty-circumcap property") {
    std::mt19937_64 rng(42);
    Sphere s{1.0};
    auto sites = testsup::random_sites(rng, 20);
    auto t = triangulate(sites);
    CHECK(t.triangles.size() == 2 * 20 - 4);
    for (const HullFace& f : t.triangles) {
        UnitVec c = circumcenter(sites[f.a].pos, sites[f.b].pos,
                                 sites[f.c].pos);
        double rho = geodesic_distance(c, sites[f.a].pos, s);
        CHECK(geodesic_distance(c, sites[f.b].pos, s) ==
              doctest::Approx(rho).epsilon(1e-9));
        CHECK(geodesic_distance(c, sites[f.c].pos, s) ==
              doctest::Approx(rho).epsilon(1e-9));
        for (std::size_t m = 0; m < sites.size(); ++m) {
            CHECK(geodesic_distance(c, sites[m].pos, s) >= rho - 1e-9);
        }
    }
}

TEST_CASE("delaunay empty-circumcap holds for hemispheric site sets") {
    std::mt19937_64 rng(43);
    Sphere s{1.0};
    std::uniform_real_distribution<double> lat(0.2, 1.4), lon(-2.0, 2.0);
    std::vector<Site> sites;
    for (int i = 0; i < 15; ++i)
        sites.push_back(make_site("h" + std::to_string(i),
                                  {lat(rng), lon(rng)}, kUnbounded));
    auto t = triangulate(sites);
    for (const HullFace& f : t.triangles) {
        UnitVec c = circumcenter(sites[f.a].pos, sites[f.b].pos,
                                 sites[f.c].pos);
        double rho = geodesic_distance(c, sites[f.a].pos, s);
        for (std::size_t m = 0; m < sites.size(); ++m)
            CHECK(geodesic_distance(c, sites[m].pos, s) >= rho - 1e-9);
    }
}

TEST_CASE("delaunay adjacency is consistent with the triangle list") {
    std::mt19937_64 rng(44);
    auto sites = testsup::random_sites(rng, 30);
    auto t = triangulate(sites);
    std::set<std::pair<int, int>> tri_edges;
    for (const HullFace& f : t.triangles) {
        tri_edges.insert(std::minmax(f.a, f.b));
        tri_edges.insert(std::minmax(f.b, f.c));
        tri_edges.insert(std::minmax(f.c, f.a));
    }
    std::size_t adj_total = 0;
    for (int u = 0; u < 30; ++u) {
        for (int v : t.adjacency[u]) {
            CHECK(tri_edges.count(std::minmax(u, v)) == 1);
        }
        adj_total += t.adjacency[u].size();
    }
    CHECK(adj_total == 2 * tri_edges.size());
    CHECK(tri_edges.size() == 3 * 30 - 6);
}

TEST_CASE("octahedral voronoi has 8 corner vertices and 12 edges") {
    Sphere s{1.0};
    auto sites = octahedron_sites();
    auto g = voronoi_from_delaunay(triangulate(sites), s);
    CHECK(g.vertices.size() == 8);
    CHECK(g.edges.size() == 12);
    double r = 1.0 / std::sqrt(3.0);
    for (const UnitVec& v : g.vertices) {
        CHECK(std::fabs(v.x) == doctest::Approx(r).epsilon(1e-12));
        CHECK(std::fabs(v.y) == doctest::Approx(r).epsilon(1e-12));
        CHECK(std::fabs(v.z) == doctest::Approx(r).epsilon(1e-12));
    }
    for (const auto& cell : g.cells) CHECK(cell.size() == 4);
}

TEST_CASE("voronoi vertices are equidistant from 3+ sites and not beaten") {
    std::mt19937_64 rng(45);
    Sphere s{1.0};
    auto sites = testsup::random_sites(rng, 25);
    auto g = voronoi_from_delaunay(triangulate(sites), s);
    CHECK(g.vertices.size() == 2 * 25 - 4);
    CHECK(g.edges.size() == 3 * 25 - 6);
    for (const UnitVec& v : g.vertices) {
        std::vector<double> d;
        for (const Site& st : sites)
            d.push_back(geodesic_distance(v, st.pos, s));
        double dmin = *std::min_element(d.begin(), d.end());
        int at_min = 0;
        for (double x : d)
            if (x <= dmin + 1e-9) ++at_min;
        CHECK(at_min >= 3);
    }
}

TEST_CASE("voronoi edge samples satisfy the nearest-site definition") {
    std::mt19937_64 rng(46);
    Sphere s{1.0};
    auto sites = testsup::random_sites(rng, 18);
    auto g = voronoi_from_delaunay(triangulate(sites), s);
    for (const DiagramEdge& e : g.edges) {
        for (const UnitVec& x : e.points) {
            double da = geodesic_distance(x, sites[e.site_a].pos, s);
            double db = geodesic_distance(x, sites[e.site_b].pos, s);
            CHECK(std::fabs(da - db) <= 1e-9);
            for (std::size_t m = 0; m < sites.size(); ++m)
                CHECK(geodesic_distance(x, sites[m].pos, s) >= da - 1e-9);
        }
    }
}

TEST_CASE("voronoi duality: cells share an edge iff sites are adjacent") {
    std::mt19937_64 rng(47);
    Sphere s{1.0};
    auto sites = testsup::random_sites(rng, 22);
    auto t = triangulate(sites);
    auto g = voronoi_from_delaunay(t, s);
    std::set<std::pair<int, int>> edge_pairs;
    for (const DiagramEdge& e : g.edges)
        edge_pairs.insert(std::minmax(e.site_a, e.site_b));
    std::set<std::pair<int, int>> adj_pairs;
    for (int u = 0; u < 22; ++u)
        for (int v : t.adjacency[u]) adj_pairs.insert(std::minmax(u, v));
    CHECK(edge_pairs == adj_pairs);
}

TEST_CASE("two antipodal sites split the sphere at their equator") {
    Sphere s{1.0};
    std::vector<Site> sites = {make_site("n", {kPi / 2, 0.0}, kUnbounded),
                               make_site("s", {-kPi / 2, 0.0}, kUnbounded)};
    auto g = build_voronoi(sites, s);
    CHECK(g.edges.size() == 1);
    CHECK(g.cells[0] == std::vector<int>{0});
    CHECK(g.cells[1] == std::vector<int>{0});
    const DiagramEdge& e = g.edges[0];
    CHECK(e.v_start == -1);
    CHECK(e.points.size() >= 3);
    for (const UnitVec& x : e.points) CHECK(std::fabs(x.z) <= 1e-12);
    CHECK(std::fabs(e.points.front().x - e.points.back().x) <= 1e-15);
    CHECK(std::fabs(e.points.front().y - e.points.back().y) <= 1e-15);
}

TEST_CASE("three equatorial sites give two polar vertices") {
    Sphere s{1.0};
    std::vector<Site> sites;
    for (int k = 0; k < 3; ++k)
        sites.push_back(make_site("e" + std::to_string(k),
                                  {0.0, -kPi / 2 + k * (2 * kPi / 3)},
                                  kUnbounded));
    auto g = build_voronoi(sites, s);
    CHECK(g.vertices.size() == 2);
    CHECK(std::fabs(g.vertices[0].z) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(g.vertices[1].z) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.edges.size() == 3);
    for (const auto& cell : g.cells) CHECK(cell.size() == 2);
    for (const DiagramEdge& e : g.edges)
        for (const UnitVec& x : e.points) {
            double da = geodesic_distance(x, sites[e.site_a].pos, s);
            double db = geodesic_distance(x, sites[e.site_b].pos, s);
            CHECK(std::fabs(da - db) <= 1e-9);
        }
}

TEST_CASE("nearest_site matches a brute-force scan and breaks ties low") {
    std::mt19937_64 rng(48);
    Sphere s{1.0};
    auto sites = testsup::random_sites(rng, 12);
    CHECK(nearest_site(sites[3].pos, sites, s) == 3);
    for (int i = 0; i < 5000; ++i) {
        UnitVec x = testsup::random_unit(rng);
        CHECK(nearest_site(x, sites, s) == brute_nearest(x, sites));
    }
    std::vector<Site> two = {make_site("a", {0.0, 0.0}, kUnbounded),
                             make_site("b", {0.0, kPi / 2}, kUnbounded)};
    UnitVec mid = normalized(add(two[0].pos, two[1].pos));
    CHECK(nearest_site(mid, two, s) == 0);
    CHECK_THROWS_AS(nearest_site(mid, {}, s), EmptySiteSet);
}
