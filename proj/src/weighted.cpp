#include "capvor/weighted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "capvor/errors.hpp"
#include "capvor/kernels.hpp"

namespace capvor {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Newton target for the level-set residual, in radians. The contract bound
// is 1e-9 * R on lengths, i.e. 1e-9 in angle; leave headroom below it.
constexpr double kResidual = 1e-10;
constexpr double kVertexMergeEps = 1e-9;
// bisection window when locating a vertex on the curve, radians of arc
constexpr double kVertexWindow = 1e-11;

double site_angle(const UnitVec& x, const UnitVec& p) {
    return kern::unit_angle(x.x, x.y, x.z, p.x, p.y, p.z);
}

UnitVec any_perp(const UnitVec& v) {
    UnitVec probe = std::fabs(v.x) < 0.9 ? UnitVec{1, 0, 0} : UnitVec{0, 1, 0};
    return normalized(cross(v, probe));
}

// Rotate x by ang along the great circle with unit tangent t (t orthogonal
// to x).
UnitVec rotate_along(const UnitVec& x, const UnitVec& t, double ang) {
    return normalized(
        add(scale(x, std::cos(ang)), scale(t, std::sin(ang))));
}

// Level set  angle(x, sm) - angle(x, sl) = delta  traced on the unit sphere.
struct LevelCurve {
    UnitVec sm, sl;
    double delta;

    double residual(const UnitVec& x) const {
        return site_angle(x, sm) - site_angle(x, sl) - delta;
    }

    // Tangent-plane gradient of the residual. The gradient of the distance
    // to a site points directly away from it, with unit length.
    UnitVec gradient(const UnitVec& x) const {
        UnitVec pm = sub(sm, scale(x, dot(x, sm)));
        UnitVec pl = sub(sl, scale(x, dot(x, sl)));
        UnitVec g = sub(normalized(pl), normalized(pm));
        return sub(g, scale(x, dot(g, x)));
    }

    bool project(UnitVec& x) const {
        for (int it = 0; it < 16; ++it) {
            double r = residual(x);
            if (std::fabs(r) <= kResidual) return true;
            UnitVec g = gradient(x);
            double gn = norm(g);
            if (gn < 1e-12) return false;
            x = rotate_along(x, scale(g, 1.0 / gn), -r / gn);
        }
        return std::fabs(residual(x)) <= kResidual;
    }
};

// Great-circle midpoint of two nearby points, projected back to the curve.
UnitVec curve_midpoint(const LevelCurve& c, const UnitVec& a,
                       const UnitVec& b) {
    UnitVec mid = normalized(add(a, b));
    if (!c.project(mid)) throw Error("level curve projection failed");
    return mid;
}

// Marches the closed level loop once around and returns the samples.
// Consecutive samples are at most 1.2 * h of arc apart.
std::vector<UnitVec> march_loop(const LevelCurve& c, double bigD, double h) {
    UnitVec e;
    double cd = dot(c.sm, c.sl);
    UnitVec inplane = sub(c.sl, scale(c.sm, cd));
    e = norm(inplane) < 1e-12 ? any_perp(c.sm) : normalized(inplane);
    UnitVec x0 = rotate_along(c.sm, e, 0.5 * (bigD + c.delta));
    if (!c.project(x0)) throw Error("level curve has no valid start point");

    // azimuth frame around sl; the loop winds around sl exactly once
    UnitVec e1 = any_perp(c.sl);
    UnitVec e2 = cross(c.sl, e1);
    auto azimuth = [&](const UnitVec& x) {
        return std::atan2(dot(x, e2), dot(x, e1));
    };

    std::vector<UnitVec> pts;
    UnitVec x = x0;
    double az_prev = azimuth(x0);
    double winding = 0;
    UnitVec t_last{0, 0, 0};
    const std::size_t max_steps =
        static_cast<std::size_t>(std::ceil(2 * kPi / h)) * 4 + 64;
    for (std::size_t iter = 0; iter < max_steps; ++iter) {
        pts.push_back(x);
        UnitVec g = c.gradient(x);
        UnitVec t = cross(x, g);
        double tn = norm(t);
        if (tn < 1e-12) throw Error("level curve tangent vanished");
        t = scale(t, 1.0 / tn);
        if (iter > 0 && dot(t, t_last) < 0) t = neg(t);
        t_last = t;
        UnitVec xn = rotate_along(x, t, h);
        if (!c.project(xn)) throw Error("level curve correction failed");
        x = xn;
        double az = azimuth(x);
        double daz = az - az_prev;
        if (daz > kPi) daz -= 2 * kPi;
        if (daz < -kPi) daz += 2 * kPi;
        winding += daz;
        az_prev = az;
        if (iter >= 2 && std::fabs(winding) >= kPi) {
            double back = site_angle(x, x0);
            if (back <= 1.2 * h) {
                UnitVec to0 = sub(x0, scale(x, dot(x, x0)));
                if (back <= 0.1 * h || dot(t, to0) > 0) {
                    pts.push_back(x);  // seam gap stays below 1.2 * h
                    return pts;
                }
            }
        }
        if (std::fabs(winding) > 2.5 * kPi)
            throw Error("level curve trace failed to close");
    }
    throw Error("level curve trace exceeded its step budget");
}

}  // namespace

int weighted_argmin(const UnitVec& x, const std::vector<Site>& sites,
                    const std::vector<double>& d, const Sphere& s) {
    if (sites.empty()) throw EmptySiteSet("weighted_argmin with no sites");
    if (d.size() != sites.size())
        throw Error("weight vector length does not match site count");
    // same score and tie order as the batch kernels
    int best = 0;
    double best_score = site_angle(x, sites[0].pos) + d[0] / s.radius;
    for (std::size_t m = 1; m < sites.size(); ++m) {
        double score = site_angle(x, sites[m].pos) + d[m] / s.radius;
        if (score < best_score) {
            best_score = score;
            best = static_cast<int>(m);
        }
    }
    return best;
}

double cell_measure(int m, const std::vector<Site>& sites,
                    const std::vector<double>& d, const DemandMeasure& demand,
                    const Sphere& s, int threads) {
    if (m < 0 || static_cast<std::size_t>(m) >= sites.size())
        throw Error("cell_measure site index out of range");
    return integrate_assigned(demand, sites, d, s, threads).load[m];
}

std::vector<BoundaryArc> trace_boundary(int m, int l,
                                        const std::vector<Site>& sites,
                                        const std::vector<double>& d,
                                        const Sphere& s, double step) {
    const int n = static_cast<int>(sites.size());
    if (m == l || m < 0 || l < 0 || m >= n || l >= n)
        throw Error("trace_boundary needs two distinct site indices");
    if (d.size() != sites.size())
        throw Error("weight vector length does not match site count");
    if (!(step > 0)) throw Error("trace step must be positive");

    const double R = s.radius;
    LevelCurve curve{sites[m].pos, sites[l].pos, (d[l] - d[m]) / R};
    const double bigD = site_angle(sites[m].pos, sites[l].pos);
    if (!(std::fabs(d[m] - d[l]) < bigD * R))
        throw EmptyBisector("weight gap reaches the site distance");

    double rmin = 0.5 * (bigD - std::fabs(curve.delta));
    double h = std::min(0.8 * step, 0.2 * rmin);
    h = std::max(h, 1e-6);

    std::vector<UnitVec> loop = march_loop(curve, bigD, h);
    const std::size_t K = loop.size();

    // clip: keep the parts where no third site scores strictly lower
    const double wm = d[m] / R;
    auto margin = [&](const UnitVec& x) {
        double own = site_angle(x, sites[m].pos) + wm;
        double other = std::numeric_limits<double>::infinity();
        for (int p = 0; p < n; ++p) {
            if (p == m || p == l) continue;
            double sc = site_angle(x, sites[p].pos) + d[p] / R;
            if (sc < other) other = sc;
        }
        return other - own;
    };

    std::vector<double> gs(K);
    for (std::size_t i = 0; i < K; ++i) gs[i] = margin(loop[i]);

    bool any_pos = false, all_pos = true;
    for (double g : gs) {
        if (g > 0) any_pos = true;
        else all_pos = false;
    }

    if (all_pos) {
        BoundaryArc ring;
        ring.points = loop;
        ring.points.push_back(loop.front());
        ring.closed = true;
        return {ring};
    }

    // vertex on the curve between a strictly inside and an outside point
    auto locate_vertex = [&](UnitVec inside, UnitVec outside) {
        for (int it = 0; it < 200 && site_angle(inside, outside) > kVertexWindow;
             ++it) {
            UnitVec mid = curve_midpoint(curve, inside, outside);
            if (margin(mid) > 0) inside = mid;
            else outside = mid;
        }
        return curve_midpoint(curve, inside, outside);
    };

    std::vector<BoundaryArc> arcs;
    auto emit_run = [&](std::size_t first, std::size_t last) {
        // cyclic run gs[first..last] > 0, neighbors outside
        BoundaryArc arc;
        arc.points.push_back(
            locate_vertex(loop[first], loop[(first + K - 1) % K]));
        for (std::size_t i = first;; i = (i + 1) % K) {
            arc.points.push_back(loop[i]);
            if (i == last) break;
        }
        arc.points.push_back(locate_vertex(loop[last], loop[(last + 1) % K]));
        arcs.push_back(std::move(arc));
    };

    if (any_pos) {
        // scan the cycle starting from an outside sample so no run wraps
        std::size_t start = 0;
        while (gs[start] > 0) ++start;
        std::vector<std::pair<std::size_t, std::size_t>> runs;
        bool in_run = false;
        std::size_t first = 0;
        for (std::size_t j = 1; j <= K; ++j) {
            std::size_t idx = (start + j) % K;
            bool inside = j < K && gs[idx] > 0;
            if (inside && !in_run) {
                first = idx;
                in_run = true;
            } else if (!inside && in_run) {
                runs.emplace_back(first, (start + j - 1) % K);
                in_run = false;
            }
        }
        for (auto [a, b] : runs) emit_run(a, b);
    }

    // a short edge can hide between two outside samples: refine local maxima
    // that sit within reach of zero (the margin is 2-Lipschitz in arc length)
    for (std::size_t i = 0; i < K; ++i) {
        std::size_t prev = (i + K - 1) % K, next = (i + 1) % K;
        if (gs[i] > 0 || gs[prev] > 0 || gs[next] > 0) continue;
        if (gs[i] < gs[prev] || gs[i] < gs[next]) continue;
        if (gs[i] <= -2.4 * h) continue;
        // fine march across the neighborhood looking for a positive patch
        std::vector<UnitVec> fine;
        std::vector<double> fg;
        for (std::size_t seg = 0; seg < 2; ++seg) {
            UnitVec from = seg == 0 ? loop[prev] : loop[i];
            UnitVec to = seg == 0 ? loop[i] : loop[next];
            for (int k = seg == 0 ? 0 : 1; k <= 32; ++k) {
                UnitVec p = normalized(add(scale(from, 1.0 - k / 32.0),
                                           scale(to, k / 32.0)));
                if (!curve.project(p)) throw Error("level curve projection failed");
                fine.push_back(p);
                fg.push_back(margin(p));
            }
        }
        std::size_t f = 0;
        while (f < fine.size()) {
            if (fg[f] > 0) {
                std::size_t first = f;
                while (f + 1 < fine.size() && fg[f + 1] > 0) ++f;
                BoundaryArc arc;
                arc.points.push_back(
                    locate_vertex(fine[first],
                                  first == 0 ? loop[prev] : fine[first - 1]));
                for (std::size_t k = first; k <= f; ++k)
                    arc.points.push_back(fine[k]);
                arc.points.push_back(locate_vertex(
                    fine[f], f + 1 < fine.size() ? fine[f + 1] : loop[next]));
                arcs.push_back(std::move(arc));
            }
            ++f;
        }
    }

    if (arcs.empty())
        throw NoSharedEdge("cells share no boundary under these weights");
    return arcs;
}

DiagramGraph build_weighted_diagram(const std::vector<Site>& sites,
                                    const std::vector<double>& d,
                                    const Sphere& s, double step) {
    validate_sites(sites);
    if (d.size() != sites.size())
        throw Error("weight vector length does not match site count");
    const int n = static_cast<int>(sites.size());

    DiagramGraph g;
    g.cells.resize(sites.size());
    if (n == 1) return g;

    auto merge_vertex = [&](const UnitVec& v) {
        for (std::size_t k = 0; k < g.vertices.size(); ++k) {
            UnitVec diff = sub(v, g.vertices[k]);
            if (norm(diff) <= kVertexMergeEps) return static_cast<int>(k);
        }
        g.vertices.push_back(v);
        return static_cast<int>(g.vertices.size()) - 1;
    };

    for (int m = 0; m < n; ++m) {
        for (int l = m + 1; l < n; ++l) {
            double dist = geodesic_distance(sites[m].pos, sites[l].pos, s);
            if (!(std::fabs(d[m] - d[l]) < dist)) continue;
            std::vector<BoundaryArc> arcs;
            try {
                arcs = trace_boundary(m, l, sites, d, s, step);
            } catch (const NoSharedEdge&) {
                continue;
            }
            for (BoundaryArc& arc : arcs) {
                DiagramEdge e;
                e.site_a = m;
                e.site_b = l;
                if (!arc.closed) {
                    e.v_start = merge_vertex(arc.points.front());
                    e.v_end = merge_vertex(arc.points.back());
                }
                e.points = std::move(arc.points);
                int id = static_cast<int>(g.edges.size());
                g.edges.push_back(std::move(e));
                g.cells[m].push_back(id);
                g.cells[l].push_back(id);
            }
        }
    }
    return g;
}

std::vector<double> min_normalized(std::vector<double> d) {
    if (d.empty()) return d;
    double lo = *std::min_element(d.begin(), d.end());
    for (double& x : d) x -= lo;
    return d;
}

}  // namespace capvor
