#include "capvor/hull.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

#include "capvor/errors.hpp"

namespace capvor {

namespace {

struct Face {
    int v[3];
    std::vector<int> conflicts;  // uninserted points strictly outside
    bool alive = true;
};

inline std::uint64_t ekey(int u, int v) {
    return (std::uint64_t(std::uint32_t(u)) << 32) | std::uint32_t(v);
}

struct Builder {
    const std::vector<UnitVec>& pts;
    double eps;
    std::vector<Face> faces;
    std::unordered_map<std::uint64_t, int> owner;  // directed edge -> face
    std::vector<std::vector<int>> pconf;           // point -> candidate faces

    Builder(const std::vector<UnitVec>& p, double e) : pts(p), eps(e) {
        pconf.resize(pts.size());
    }

    double orient(int f, int p) const {
        const Face& fc = faces[f];
        return orient3d_value(pts[fc.v[0]], pts[fc.v[1]], pts[fc.v[2]],
                              pts[p]);
    }

    int add_face(int a, int b, int c) {
        int id = static_cast<int>(faces.size());
        faces.push_back(Face{{a, b, c}, {}, true});
        owner[ekey(a, b)] = id;
        owner[ekey(b, c)] = id;
        owner[ekey(c, a)] = id;
        return id;
    }

    void kill_face(int f) {
        Face& fc = faces[f];
        fc.alive = false;
        owner.erase(ekey(fc.v[0], fc.v[1]));
        owner.erase(ekey(fc.v[1], fc.v[2]));
        owner.erase(ekey(fc.v[2], fc.v[0]));
    }

    void record_conflict(int f, int p) {
        faces[f].conflicts.push_back(p);
        pconf[p].push_back(f);
    }

    std::vector<int> visible_faces(int p) {
        std::vector<int> vis;
        for (int f : pconf[p])
            if (faces[f].alive) vis.push_back(f);
        std::sort(vis.begin(), vis.end());
        vis.erase(std::unique(vis.begin(), vis.end()), vis.end());
        return vis;
    }

    // When p sits on the plane of some faces (cocircular with their
    // vertices) nothing is strictly visible; widen to the coplanar patch.
    std::vector<int> coplanar_visible(int p) {
        std::vector<int> vis;
        for (int f = 0; f < static_cast<int>(faces.size()); ++f)
            if (faces[f].alive && orient(f, p) > -eps) vis.push_back(f);
        return vis;
    }

    // Directed boundary edges of the visible region, chained into one cycle.
    std::vector<std::pair<int, int>> horizon(const std::vector<int>& vis) {
        std::vector<char> isvis(faces.size(), 0);
        for (int f : vis) isvis[f] = 1;
        std::unordered_map<int, int> next;  // u -> v along the cycle
        int start = -1;
        std::size_t count = 0;
        for (int f : vis) {
            const Face& fc = faces[f];
            for (int e = 0; e < 3; ++e) {
                int u = fc.v[e];
                int v = fc.v[(e + 1) % 3];
                auto it = owner.find(ekey(v, u));
                if (it == owner.end() || !isvis[it->second]) {
                    next[u] = v;
                    ++count;
                    if (start < 0 || u < start) start = u;
                }
            }
        }
        std::vector<std::pair<int, int>> cycle;
        if (start < 0) return cycle;
        int u = start;
        for (std::size_t k = 0; k < count; ++k) {
            auto it = next.find(u);
            if (it == next.end()) return {};
            cycle.emplace_back(u, it->second);
            u = it->second;
        }
        if (u != start || cycle.size() != count) return {};
        return cycle;
    }

    void insert(int p) {
        std::vector<int> vis = visible_faces(p);
        if (vis.empty()) vis = coplanar_visible(p);
        if (vis.empty())
            throw DegenerateTriangle(
                "hull insertion found no visible face for a sphere point");
        auto cycle = horizon(vis);
        if (cycle.empty()) {
            // Borderline orientations can split the strict visible set;
            // retake it with exact signs and try once more.
            vis.clear();
            for (int f = 0; f < static_cast<int>(faces.size()); ++f)
                if (faces[f].alive && orient(f, p) > 0.0) vis.push_back(f);
            cycle = horizon(vis);
            if (cycle.empty())
                throw DegenerateTriangle(
                    "hull horizon is not a single cycle");
        }
        std::vector<int> candidates;
        for (int f : vis) {
            for (int q : faces[f].conflicts)
                if (q != p) candidates.push_back(q);
        }
        for (auto [u, v] : cycle) {
            auto it = owner.find(ekey(v, u));
            if (it != owner.end())
                for (int q : faces[it->second].conflicts)
                    if (q != p) candidates.push_back(q);
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()),
                         candidates.end());
        for (int f : vis) kill_face(f);
        for (auto [u, v] : cycle) {
            int g = add_face(u, v, p);
            for (int q : candidates)
                if (orient(g, q) > eps) record_conflict(g, q);
        }
    }
};

}  // namespace

std::vector<HullFace> convex_hull_3d(const std::vector<UnitVec>& points,
                                     double eps) {
    const int n = static_cast<int>(points.size());
    if (n < 4) throw TooFewSites("convex hull needs at least 4 sites");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            UnitVec d = sub(points[i], points[j]);
            if (dot(d, d) <= eps * eps)
                throw DuplicateSites("sites " + std::to_string(i) + " and " +
                                     std::to_string(j) + " coincide");
        }

    // Initial simplex: spread four points, maximizing degeneracy margins.
    int i0 = 0;
    int i1 = -1;
    double best = -1.0;
    for (int i = 1; i < n; ++i) {
        UnitVec d = sub(points[i], points[i0]);
        double v = dot(d, d);
        if (v > best) best = v, i1 = i;
    }
    int i2 = -1;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
        if (i == i0 || i == i1) continue;
        UnitVec c = cross(sub(points[i1], points[i0]),
                          sub(points[i], points[i0]));
        double v = dot(c, c);
        if (v > best) best = v, i2 = i;
    }
    int i3 = -1;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
        if (i == i0 || i == i1 || i == i2) continue;
        double v = std::fabs(
            orient3d_value(points[i0], points[i1], points[i2], points[i]));
        if (v > best) best = v, i3 = i;
    }
    if (i3 < 0 || best <= eps)
        throw HemisphericSites(
            "sites are cocircular: all lie on a single plane");

    Builder b(points, eps);
    // Orient the initial tetrahedron outward: each face must have the
    // opposite vertex on its negative side.
    int t[4] = {i0, i1, i2, i3};
    if (orient3d_value(points[i0], points[i1], points[i2], points[i3]) > 0.0)
        std::swap(t[1], t[2]);
    b.add_face(t[0], t[1], t[2]);
    b.add_face(t[0], t[3], t[1]);
    b.add_face(t[1], t[3], t[2]);
    b.add_face(t[2], t[3], t[0]);

    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
        if (i != i0 && i != i1 && i != i2 && i != i3) rest.push_back(i);
    std::mt19937_64 rng(0x5eedb0a7c4f11e57ULL);
    std::shuffle(rest.begin(), rest.end(), rng);

    for (int f = 0; f < 4; ++f)
        for (int p : rest)
            if (b.orient(f, p) > eps) b.record_conflict(f, p);
    for (int p : rest) b.insert(p);

    std::vector<HullFace> out;
    for (const Face& f : b.faces)
        if (f.alive) out.push_back(HullFace{f.v[0], f.v[1], f.v[2]});
    return out;
}

}  // namespace capvor
