#pragma once

#include <optional>
#include <vector>

// Exact reference solver for the discrete capacitated assignment problem,
// plus the certificates used to audit any assignment against it. This is a
// correctness instrument: clarity over scale.

namespace capvor {

struct TransportInstance {
    // cost[k][m]: distance from user k to site m; costs >= 0
    std::vector<std::vector<double>> cost;
    std::vector<double> mass;      // per user, positive integers
    std::vector<double> capacity;  // per site; kUnbounded allowed
};

struct OracleResult {
    // Per-user site. When the optimal flow splits a user (possible only for
    // masses > 1) this records the site carrying the largest share, lowest
    // index on ties; for unit masses it is exactly the optimal assignment.
    std::vector<int> assignment;
    std::vector<double> load;       // exact optimal flow into each site
    double total_distance = 0;      // exact optimum of the relaxation
    std::vector<double> site_potential;  // one valid d, min-normalized
    std::vector<double> user_potential;  // u_k = min_m (cost_km + d_m)
};

// Minimum-cost transportation via successive shortest paths with node
// potentials. Requires integral masses; finite capacities are floored to
// whole units (fractional headroom is unusable by integral flow). Throws
// InfeasibleInstance when total mass exceeds total usable capacity.
OracleResult solve_exact(const TransportInstance& inst);

struct ExchangeViolation {
    int site_m = -1, site_l = -1;  // moving user_a to l and user_b to m wins
    int user_a = -1, user_b = -1;
    double gain = 0;  // total distance saved by the swap
};

// Pairwise swap test: for every pair of sites, the users kept by the first
// must all have a smaller switching advantage than the users kept by the
// second. Returns the best improving swap if one exists, nullopt when the
// assignment is exchange-optimal within a 1e-9 slack on the cost scale.
std::optional<ExchangeViolation> check_exchange_optimality(
    const std::vector<int>& assignment, const TransportInstance& inst);

// Max over users of [cost to assigned site + its potential] minus the best
// achievable score; zero exactly at optimality.
double potential_gap(const std::vector<int>& assignment,
                     const std::vector<double>& site_potential,
                     const TransportInstance& inst);

// Exhaustive optimum over whole-user assignments, memoized on remaining
// capacities. Unit masses, at most 12 users and 4 sites.
double brute_force_optimum(const TransportInstance& inst);

}  // namespace capvor
