#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "capvor/demand.hpp"
#include "capvor/sites.hpp"

namespace capvor {

enum class DemandKind { Points, Raster };

// Rows id,lat_deg,lon_deg,capacity with capacity "inf" for uncapped sites.
// Comma-delimited UTF-8; blank lines and lines starting with # are skipped.
std::vector<Site> parse_sites(const std::string& path);

// Points: rows lat_deg,lon_deg,mass. Raster: one header line
// "rows=R cols=C lat_min lat_max lon_min lon_max" (degrees, space-separated)
// followed by R comma-delimited density rows running south to north.
DemandMeasure parse_demand(const std::string& path, DemandKind kind,
                           const Sphere& s);

// Rows id,weight covering every site exactly once; order-insensitive.
std::vector<double> parse_weights(const std::string& path,
                                  const std::vector<Site>& sites);

// Rows atom,site_id covering every atom exactly once.
std::vector<std::int32_t> parse_assignment(const std::string& path,
                                           std::size_t atom_count,
                                           const std::vector<Site>& sites);

std::uint64_t fnv1a64_file(const std::string& path);

// Shortest decimal that parses back to the same double.
std::string format_double(double x);

struct RunReport {
    std::string sites_path, sites_digest;
    std::string demand_path, demand_digest, demand_kind;
    double radius = 0;
    bool feasible = true;
    double deficit = 0;
    std::vector<std::string> site_ids;
    std::vector<double> capacity;  // kUnbounded for uncapped
    std::vector<double> load;
    std::vector<double> weights;
    std::vector<int> active;
    double total_distance = 0;
    int iterations = 0;
    bool converged = false;
    std::string note;  // "classical Voronoi" when nothing binds
    double wall_time_ms = 0;
};

void write_report(const std::string& path, const RunReport& r);
RunReport read_report(const std::string& path);

struct SolveOptions {
    std::string sites_path;
    std::string demand_path;
    DemandKind kind = DemandKind::Points;
    std::string out_dir;
    double radius = 6371.0;
    double tol = 1e-6;
    int max_iter = 500;
    int threads = 1;
};

struct DiagramOptions {
    std::string sites_path;
    std::string weights_path;  // empty means all-zero weights
    std::string out_path;
    double step_deg = 0.5;
    double radius = 6371.0;
};

struct CheckOptions {
    std::string sites_path;
    std::string demand_path;
    DemandKind kind = DemandKind::Points;
    std::string assignment_path;
    std::string weights_path;  // optional
    double radius = 6371.0;
};

// Exit codes: 0 fine, 2 infeasible (or certificate violations for check),
// 3 solver ran out of iterations. Parse and usage failures throw and the
// CLI maps them to 1.
int cmd_solve(const SolveOptions& opt, std::ostream& out);
int cmd_diagram(const DiagramOptions& opt, std::ostream& out);
int cmd_check(const CheckOptions& opt, std::ostream& out);

}  // namespace capvor
