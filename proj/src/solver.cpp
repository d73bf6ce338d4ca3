#include "capvor/solver.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "capvor/errors.hpp"
#include "capvor/transport.hpp"
#include "capvor/weighted.hpp"

namespace capvor {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_config(const SolverConfig& cfg) {
    if (!(cfg.tol >= 0) || !(cfg.eps >= 0))
        throw Error("solver tolerances must be nonnegative");
    if (cfg.max_outer < 1 || cfg.max_inner < 1)
        throw Error("solver iteration caps must be at least 1");
    if (!(cfg.damping > 0) || cfg.damping > 1)
        throw Error("solver damping must lie in (0, 1]");
    if (cfg.threads < 1) throw Error("thread count must be positive");
}

bool whole(double x) { return x == std::floor(x); }

// Exact solving needs unit atom masses and whole finite capacities. A unit
// never splits across sites, so the flow solution is a per-atom assignment;
// a heavier atom can straddle a cell boundary in the optimal flow, which no
// whole-atom labeling represents.
const DiscreteDemand* exact_path(const DemandMeasure& demand,
                                 const std::vector<Site>& sites) {
    const auto* disc = std::get_if<DiscreteDemand>(&demand);
    if (!disc) return nullptr;
    for (double m : disc->mass)
        if (m != 1.0) return nullptr;
    for (const Site& site : sites)
        if (site.capacity != kUnbounded && !whole(site.capacity))
            return nullptr;
    return disc;
}

SolveResult solve_discrete_exact(const DiscreteDemand& disc,
                                 const std::vector<Site>& sites,
                                 const Sphere& s) {
    const std::size_t n = sites.size();
    TransportInstance inst;
    inst.cost.assign(disc.size(), std::vector<double>(n));
    for (std::size_t k = 0; k < disc.size(); ++k) {
        UnitVec u{disc.px[k], disc.py[k], disc.pz[k]};
        for (std::size_t m = 0; m < n; ++m)
            inst.cost[k][m] = geodesic_distance(u, sites[m].pos, s);
    }
    inst.mass = disc.mass;
    inst.capacity.reserve(n);
    for (const Site& site : sites) inst.capacity.push_back(site.capacity);

    OracleResult res = solve_exact(inst);

    SolveResult out;
    out.weights = std::move(res.site_potential);
    out.assignment.atom_site.assign(res.assignment.begin(),
                                    res.assignment.end());
    out.assignment.load = std::move(res.load);
    out.assignment.total_distance = res.total_distance;
    for (std::size_t m = 0; m < n; ++m)
        if (out.weights[m] > 0) {
            out.active.push_back(static_cast<int>(m));
            out.residuals.push_back(
                std::abs(out.assignment.load[m] - sites[m].capacity));
        }
    out.iterations = 1;
    out.converged = true;
    return out;
}

// Load of site m with its own weight set to dm, the rest of d held fixed.
double load_at(int m, double dm, std::vector<double>& d,
               const std::vector<Site>& sites, const DemandMeasure& demand,
               const Sphere& s, int threads) {
    double saved = d[m];
    d[m] = dm;
    double load = cell_measure(m, sites, d, demand, s, threads);
    d[m] = saved;
    return load;
}

double bracket_top(int m, const std::vector<double>& d, const Sphere& s) {
    double mx = 0;
    for (std::size_t l = 0; l < d.size(); ++l)
        if (static_cast<int>(l) != m) mx = std::max(mx, d[l]);
    return kPi * s.radius + mx;
}

// Weight at which site m's load meets its capacity, from the load <= C
// side; 0 when the site fits without a handicap. Loads only decrease as
// d_m grows, so plain bisection applies.
double seek_capacity(int m, std::vector<double>& d,
                     const std::vector<Site>& sites,
                     const DemandMeasure& demand, const Sphere& s,
                     const SolverConfig& cfg, double slack) {
    const double cap = sites[m].capacity;
    double cur = load_at(m, d[m], d, sites, demand, s, cfg.threads);
    double lo, hi;
    if (cur > cap + slack) {
        lo = d[m];
        hi = bracket_top(m, d, s);
    } else if (d[m] > 0 && cur < cap - slack) {
        if (load_at(m, 0.0, d, sites, demand, s, cfg.threads) <= cap + slack)
            return 0.0;
        lo = 0.0;
        hi = d[m];
    } else {
        return d[m];
    }
    for (int it = 0; it < 60 && hi - lo > 1e-13 * s.radius; ++it) {
        double mid = 0.5 * (lo + hi);
        if (load_at(m, mid, d, sites, demand, s, cfg.threads) > cap)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

std::vector<int> violators(const std::vector<double>& load,
                           const std::vector<Site>& sites, double slack) {
    std::vector<int> out;
    for (std::size_t m = 0; m < sites.size(); ++m)
        if (load[m] > sites[m].capacity + slack)
            out.push_back(static_cast<int>(m));
    return out;
}

}  // namespace

Feasibility check_feasibility(const std::vector<Site>& sites,
                              const DemandMeasure& demand) {
    double caps = 0;
    for (const Site& site : sites) {
        if (site.capacity == kUnbounded) return {};
        caps += site.capacity;
    }
    double need = total_mass(demand);
    if (caps >= need) return {};
    return {false, need - caps};
}

std::vector<int> detect_active_set(const std::vector<Site>& sites,
                                   const DemandMeasure& demand,
                                   const std::vector<double>& d,
                                   const Sphere& s, const SolverConfig& cfg) {
    validate_config(cfg);
    auto ai = integrate_assigned(demand, sites, d, s, cfg.threads);
    return violators(ai.load, sites, cfg.tol * total_mass(demand));
}

SolveResult solve(const std::vector<Site>& sites, const DemandMeasure& demand,
                  const Sphere& s, const SolverConfig& cfg) {
    validate_config(cfg);
    validate_sites(sites);
    Feasibility feas = check_feasibility(sites, demand);
    if (!feas.ok)
        throw InfeasibleInstance("total capacity short of total demand",
                                 feas.deficit);

    const std::size_t n = sites.size();
    const double total = total_mass(demand);
    const double tol_mass = cfg.tol * total;
    const double slack = std::max(cfg.eps * total, 0.0);

    SolveResult out;
    std::vector<double> d(n, 0.0);
    auto full = assign_demand(demand, sites, d, s, cfg.threads);
    std::vector<int> working = violators(full.load, sites, tol_mass);

    // No site overloaded without handicaps: the classical diagram is optimal.
    if (working.empty()) {
        out.weights = std::move(d);
        out.assignment = std::move(full);
        out.converged = true;
        return out;
    }

    if (const DiscreteDemand* disc = exact_path(demand, sites))
        return solve_discrete_exact(*disc, sites, s);

    auto finish = [&](bool converged) {
        out.weights = min_normalized(d);
        out.assignment = assign_demand(demand, sites, out.weights, s,
                                       cfg.threads);
        out.active.clear();
        out.residuals.clear();
        for (int m : working)
            if (out.weights[m] > 0) {
                out.active.push_back(m);
                out.residuals.push_back(std::abs(out.assignment.load[m] -
                                                 sites[m].capacity));
            }
        out.converged = converged;
    };

    for (int outer = 0; outer < cfg.max_outer; ++outer) {
        out.iterations = outer + 1;
        bool settled = false;
        for (int inner = 0; inner < cfg.max_inner && !settled; ++inner) {
            for (int m : working) {
                double target = seek_capacity(m, d, sites, demand, s, cfg,
                                              slack);
                d[m] = std::max(0.0, d[m] + cfg.damping * (target - d[m]));
            }
            auto ai = integrate_assigned(demand, sites, d, s, cfg.threads);
            settled = true;
            for (int m : working) {
                double res = ai.load[m] - sites[m].capacity;
                if (d[m] > 0 ? std::abs(res) > tol_mass : res > tol_mass)
                    settled = false;
            }
        }
        if (!settled) continue;
        finish(true);
        auto grown = violators(out.assignment.load, sites, tol_mass);
        if (grown.empty()) return out;
        // normalization or a fresh overload elsewhere: widen and go again
        d = out.weights;
        std::vector<int> merged;
        std::set_union(working.begin(), working.end(), grown.begin(),
                       grown.end(), std::back_inserter(merged));
        working = std::move(merged);
    }
    finish(false);
    return out;
}

double dual_objective(const std::vector<Site>& sites,
                      const DemandMeasure& demand,
                      const std::vector<double>& d, const Sphere& s,
                      int threads) {
    auto ai = integrate_assigned(demand, sites, d, s, threads);
    double g = ai.total_distance;
    for (std::size_t m = 0; m < sites.size(); ++m) {
        g += ai.load[m] * d[m];
        if (sites[m].capacity != kUnbounded) g -= sites[m].capacity * d[m];
    }
    return g;
}

}  // namespace capvor
