#include "capvor/delaunay.hpp"

#include <cstdint>
#include <unordered_map>

#include "capvor/errors.hpp"

namespace capvor {

namespace {

inline std::uint64_t ekey(int u, int v) {
    return (std::uint64_t(std::uint32_t(u)) << 32) | std::uint32_t(v);
}

}  // namespace

DelaunayTriangulation delaunay_from_hull(const std::vector<HullFace>& faces,
                                         std::vector<Site> sites) {
    DelaunayTriangulation t;
    t.sites = std::move(sites);
    t.triangles = faces;

    // succ[(u,v)] = w for face (u,v,w): rotating a neighbor v around u by
    // succ yields the next neighbor counterclockwise (outside view).
    std::unordered_map<std::uint64_t, int> succ;
    for (const HullFace& f : faces) {
        succ[ekey(f.a, f.b)] = f.c;
        succ[ekey(f.b, f.c)] = f.a;
        succ[ekey(f.c, f.a)] = f.b;
    }

    const int n = static_cast<int>(t.sites.size());
    t.adjacency.resize(n);
    std::vector<int> first(n, -1);
    for (const HullFace& f : faces) {
        if (first[f.a] < 0) first[f.a] = f.b;
        if (first[f.b] < 0) first[f.b] = f.c;
        if (first[f.c] < 0) first[f.c] = f.a;
    }
    for (int u = 0; u < n; ++u) {
        if (first[u] < 0)
            throw DegenerateTriangle("hull face list omits a site");
        int v = first[u];
        do {
            t.adjacency[u].push_back(v);
            auto it = succ.find(ekey(u, v));
            if (it == succ.end())
                throw DegenerateTriangle("hull faces are not edge-manifold");
            v = it->second;
        } while (v != first[u] &&
                 t.adjacency[u].size() <= succ.size());
        if (v != first[u])
            throw DegenerateTriangle("site star does not close into a fan");
    }
    return t;
}

}  // namespace capvor
