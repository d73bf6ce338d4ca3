#pragma once

#include <vector>

#include "capvor/demand.hpp"
#include "capvor/sites.hpp"

namespace capvor {

struct SolverConfig {
    // Relative to total demand mass. Discrete unit-mass instances take the
    // exact transport path, where this is ignored.
    double tol = 1e-6;
    int max_outer = 50;
    int max_inner = 80;
    double damping = 1.0;  // in (0, 1]
    double eps = 1e-12;    // degeneracy slack for load comparisons
    int threads = 1;
};

struct Feasibility {
    bool ok = true;
    double deficit = 0;  // missing capacity when not ok
};

Feasibility check_feasibility(const std::vector<Site>& sites,
                              const DemandMeasure& demand);

struct SolveResult {
    std::vector<double> weights;  // min-normalized, 0 off the active set
    FullAssignment assignment;
    std::vector<int> active;  // sites pinned at capacity
    int iterations = 0;
    bool converged = false;
    std::vector<double> residuals;  // |load - capacity| per active site
};

// Sites whose load under weights d exceeds capacity by more than
// tol * total_mass.
std::vector<int> detect_active_set(const std::vector<Site>& sites,
                                   const DemandMeasure& demand,
                                   const std::vector<double>& d,
                                   const Sphere& s, const SolverConfig& cfg);

// Finds weights d so that assigning every atom to its weighted-nearest site
// respects all capacities. Discrete demand with unit masses and whole-number
// capacities is solved exactly via the transport network; everything else
// runs the active-set loop with per-site bisection on d_m. Throws
// InfeasibleInstance when total capacity cannot cover total mass; iteration
// caps produce converged=false, never an exception.
SolveResult solve(const std::vector<Site>& sites, const DemandMeasure& demand,
                  const Sphere& s, const SolverConfig& cfg = {});

// G(d) = integral of min_m(dist + d_m) minus sum of C_m d_m over finite
// capacities. Concave; its coordinate slopes are load_m - C_m.
double dual_objective(const std::vector<Site>& sites,
                      const DemandMeasure& demand,
                      const std::vector<double>& d, const Sphere& s,
                      int threads = 1);

}  // namespace capvor
