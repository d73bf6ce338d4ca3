#include "capvor/voronoi.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "capvor/errors.hpp"
#include "capvor/hull.hpp"
#include "capvor/kernels.hpp"

namespace capvor {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kArcStep = 0.5 * kPi / 180.0;
constexpr double kVertexMergeEps = 1e-9;
constexpr double kCoMinSlack = 1e-9;

inline std::uint64_t pkey(int u, int v) {
    if (u > v) std::swap(u, v);
    return (std::uint64_t(std::uint32_t(u)) << 32) | std::uint32_t(v);
}

UnitVec any_perp(const UnitVec& w) {
    UnitVec axis{1.0, 0.0, 0.0};
    if (std::fabs(w.x) > 0.9) axis = {0.0, 1.0, 0.0};
    return normalized(cross(w, axis));
}

double site_angle(const UnitVec& x, const Site& s) {
    return kern::unit_angle(x.x, x.y, x.z, s.pos.x, s.pos.y, s.pos.z);
}

// x is on the bisector of sites u and v; true when no third site beats them.
bool jointly_minimal(const UnitVec& x, const std::vector<Site>& sites, int u,
                     int v) {
    double du = site_angle(x, sites[u]);
    double dv = site_angle(x, sites[v]);
    double ref = std::fmin(du, dv);
    for (std::size_t l = 0; l < sites.size(); ++l) {
        if (static_cast<int>(l) == u || static_cast<int>(l) == v) continue;
        if (site_angle(x, sites[l]) < ref - kCoMinSlack) return false;
    }
    return true;
}

struct BisectorFrame {
    UnitVec e1, e2;  // x(theta) = cos(theta) e1 + sin(theta) e2
};

BisectorFrame bisector_frame(const UnitVec& su, const UnitVec& sv,
                             const UnitVec* seed) {
    UnitVec w = normalized(sub(su, sv));
    UnitVec e1;
    if (seed) {
        UnitVec p = sub(*seed, scale(w, dot(*seed, w)));
        e1 = normalized(p);
    } else {
        e1 = any_perp(w);
    }
    return {e1, normalized(cross(w, e1))};
}

UnitVec frame_point(const BisectorFrame& f, double theta) {
    double c = std::cos(theta);
    double s = std::sin(theta);
    return {c * f.e1.x + s * f.e2.x, c * f.e1.y + s * f.e2.y,
            c * f.e1.z + s * f.e2.z};
}

// Samples theta in [t0, t1] at <= kArcStep; endpoints may be overridden so
// edges stitch exactly onto merged diagram vertices.
std::vector<UnitVec> sample_arc(const BisectorFrame& f, double t0, double t1,
                                const UnitVec* p0, const UnitVec* p1) {
    int steps = std::max(1, static_cast<int>(std::ceil((t1 - t0) / kArcStep)));
    std::vector<UnitVec> pts;
    pts.reserve(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        double t = t0 + (t1 - t0) * (double(k) / steps);
        pts.push_back(frame_point(f, t));
    }
    if (p0) pts.front() = *p0;
    if (p1) pts.back() = *p1;
    return pts;
}

int merge_vertex(std::vector<UnitVec>& vertices, const UnitVec& c) {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        UnitVec d = sub(vertices[i], c);
        if (norm(d) <= kVertexMergeEps) return static_cast<int>(i);
    }
    vertices.push_back(c);
    return static_cast<int>(vertices.size()) - 1;
}

DiagramGraph two_site_diagram(const std::vector<Site>& sites) {
    DiagramGraph g;
    BisectorFrame f = bisector_frame(sites[0].pos, sites[1].pos, nullptr);
    DiagramEdge e;
    e.site_a = 0;
    e.site_b = 1;
    e.points = sample_arc(f, 0.0, 2.0 * kPi, nullptr, nullptr);
    e.points.back() = e.points.front();
    g.edges.push_back(std::move(e));
    g.cells = {{0}, {0}};
    return g;
}

DiagramGraph three_site_diagram(const std::vector<Site>& sites) {
    DiagramGraph g;
    UnitVec v = circumcenter(sites[0].pos, sites[1].pos, sites[2].pos);
    g.vertices = {v, neg(v)};
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    std::vector<std::vector<int>> cell_edges(3);
    for (int k = 0; k < 3; ++k) {
        int u = pairs[k][0];
        int l = pairs[k][1];
        BisectorFrame f =
            bisector_frame(sites[u].pos, sites[l].pos, &g.vertices[0]);
        // Both vertices are on this bisector circle, at theta 0 and pi; the
        // diagram edge is whichever half-circle keeps u and l minimal.
        double lo = 0.0, hi = kPi;
        if (!jointly_minimal(frame_point(f, 0.5 * kPi), sites, u, l)) {
            lo = kPi;
            hi = 2.0 * kPi;
        }
        DiagramEdge e;
        e.site_a = u;
        e.site_b = l;
        e.v_start = (lo == 0.0) ? 0 : 1;
        e.v_end = (lo == 0.0) ? 1 : 0;
        e.points = sample_arc(f, lo, hi, &g.vertices[e.v_start],
                              &g.vertices[e.v_end]);
        cell_edges[u].push_back(k);
        cell_edges[l].push_back(k);
        g.edges.push_back(std::move(e));
    }
    g.cells = std::move(cell_edges);
    return g;
}

}  // namespace

DiagramGraph voronoi_from_delaunay(const DelaunayTriangulation& t,
                                   const Sphere&) {
    DiagramGraph g;
    const auto& sites = t.sites;
    const int nf = static_cast<int>(t.triangles.size());

    std::vector<int> face_vertex(nf);
    for (int f = 0; f < nf; ++f) {
        const HullFace& tri = t.triangles[f];
        UnitVec c = circumcenter(sites[tri.a].pos, sites[tri.b].pos,
                                 sites[tri.c].pos);
        face_vertex[f] = merge_vertex(g.vertices, c);
    }

    // Which face owns each directed edge, to find the two faces per
    // Delaunay edge.
    std::unordered_map<std::uint64_t, int> dir_owner;
    for (int f = 0; f < nf; ++f) {
        const HullFace& tri = t.triangles[f];
        dir_owner[(std::uint64_t(std::uint32_t(tri.a)) << 32) |
                  std::uint32_t(tri.b)] = f;
        dir_owner[(std::uint64_t(std::uint32_t(tri.b)) << 32) |
                  std::uint32_t(tri.c)] = f;
        dir_owner[(std::uint64_t(std::uint32_t(tri.c)) << 32) |
                  std::uint32_t(tri.a)] = f;
    }
    auto face_of = [&](int u, int v) {
        auto it = dir_owner.find((std::uint64_t(std::uint32_t(u)) << 32) |
                                 std::uint32_t(v));
        if (it == dir_owner.end())
            throw DegenerateTriangle("triangulation is not edge-manifold");
        return it->second;
    };

    const int n = static_cast<int>(sites.size());
    std::unordered_map<std::uint64_t, int> edge_id;
    for (int u = 0; u < n; ++u) {
        for (int v : t.adjacency[u]) {
            if (v < u) continue;
            int w1 = face_vertex[face_of(u, v)];
            int w2 = face_vertex[face_of(v, u)];
            if (w1 == w2) continue;  // cocircular: zero-length dual edge
            const UnitVec& c1 = g.vertices[w1];
            const UnitVec& c2 = g.vertices[w2];
            BisectorFrame f = bisector_frame(sites[u].pos, sites[v].pos, &c1);
            double t2 = kern::atan2_pos(std::fabs(dot(c2, f.e2)),
                                        dot(c2, f.e1));
            if (dot(c2, f.e2) < 0.0) t2 = 2.0 * kPi - t2;
            bool inner = jointly_minimal(frame_point(f, 0.5 * t2), sites, u, v);
            double lo = inner ? 0.0 : t2;
            double hi = inner ? t2 : 2.0 * kPi;
            DiagramEdge e;
            e.site_a = u;
            e.site_b = v;
            e.v_start = inner ? w1 : w2;
            e.v_end = inner ? w2 : w1;
            e.points = sample_arc(f, lo, hi, &g.vertices[e.v_start],
                                  &g.vertices[e.v_end]);
            edge_id[pkey(u, v)] = static_cast<int>(g.edges.size());
            g.edges.push_back(std::move(e));
        }
    }

    g.cells.resize(n);
    for (int u = 0; u < n; ++u) {
        for (int v : t.adjacency[u]) {
            auto it = edge_id.find(pkey(u, v));
            if (it != edge_id.end()) g.cells[u].push_back(it->second);
        }
    }
    return g;
}

DiagramGraph build_voronoi(const std::vector<Site>& sites, const Sphere& s) {
    validate_sites(sites);
    const int n = static_cast<int>(sites.size());
    if (n == 1) {
        DiagramGraph g;
        g.cells = {{}};
        return g;
    }
    if (n == 2) return two_site_diagram(sites);
    if (n == 3) return three_site_diagram(sites);
    std::vector<UnitVec> pts;
    pts.reserve(sites.size());
    for (const Site& st : sites) pts.push_back(st.pos);
    return voronoi_from_delaunay(delaunay_from_hull(convex_hull_3d(pts),
                                                    sites),
                                 s);
}

int nearest_site(const UnitVec& x, const std::vector<Site>& sites,
                 const Sphere&) {
    if (sites.empty()) throw EmptySiteSet("nearest_site with no sites");
    int best = 0;
    double best_ang = site_angle(x, sites[0]);
    for (std::size_t m = 1; m < sites.size(); ++m) {
        double a = site_angle(x, sites[m]);
        if (a < best_ang) {
            best_ang = a;
            best = static_cast<int>(m);
        }
    }
    return best;
}

}  // namespace capvor
