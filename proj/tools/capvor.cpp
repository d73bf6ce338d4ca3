#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "capvor/errors.hpp"
#include "capvor/io.hpp"

namespace {

capvor::DemandKind kind_of(const std::string& s) {
    return s == "raster" ? capvor::DemandKind::Raster
                         : capvor::DemandKind::Points;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Capacity-aware assignment of demand to sites on a sphere via "
        "additively weighted Voronoi diagrams"};
    app.require_subcommand(1);
    auto kind_check = CLI::IsMember({"points", "raster"});

    capvor::SolveOptions so;
    std::string so_kind;
    auto* sc_solve = app.add_subcommand(
        "solve", "Compute capacity-respecting weights and an assignment");
    sc_solve->add_option("--sites", so.sites_path, "sites CSV")->required();
    sc_solve->add_option("--demand", so.demand_path, "demand file")
        ->required();
    sc_solve->add_option("--demand-kind", so_kind, "points or raster")
        ->required()
        ->check(kind_check);
    sc_solve->add_option("--radius-km", so.radius, "sphere radius")
        ->capture_default_str();
    sc_solve->add_option("--tol", so.tol, "relative capacity tolerance")
        ->capture_default_str();
    sc_solve->add_option("--max-iter", so.max_iter, "outer iteration cap")
        ->capture_default_str();
    sc_solve->add_option("--threads", so.threads, "worker threads")
        ->capture_default_str();
    sc_solve
        ->add_option("--out-dir", so.out_dir,
                     "directory for report.json, assignment.csv, weights.csv")
        ->required();

    capvor::DiagramOptions dg;
    auto* sc_diagram = app.add_subcommand(
        "diagram", "Trace cell boundaries into a GeoJSON file");
    sc_diagram->add_option("--sites", dg.sites_path, "sites CSV")->required();
    sc_diagram->add_option("--weights", dg.weights_path,
                           "weights CSV (default: all zero)");
    sc_diagram->add_option("--step-deg", dg.step_deg, "sampling step")
        ->capture_default_str();
    sc_diagram->add_option("--radius-km", dg.radius, "sphere radius")
        ->capture_default_str();
    sc_diagram->add_option("--out", dg.out_path, "output GeoJSON path")
        ->required();

    capvor::CheckOptions ck;
    std::string ck_kind = "points";
    auto* sc_check = app.add_subcommand(
        "check", "Verify a stored assignment against sites and demand");
    sc_check->add_option("--sites", ck.sites_path, "sites CSV")->required();
    sc_check->add_option("--demand", ck.demand_path, "demand file")
        ->required();
    sc_check->add_option("--demand-kind", ck_kind, "points or raster")
        ->capture_default_str()
        ->check(kind_check);
    sc_check->add_option("--assignment", ck.assignment_path, "assignment CSV")
        ->required();
    sc_check->add_option("--weights", ck.weights_path,
                         "weights CSV for the potential-gap check");
    sc_check->add_option("--radius-km", ck.radius, "sphere radius")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (sc_solve->parsed()) {
            so.kind = kind_of(so_kind);
            return capvor::cmd_solve(so, std::cout);
        }
        if (sc_diagram->parsed()) return capvor::cmd_diagram(dg, std::cout);
        ck.kind = kind_of(ck_kind);
        return capvor::cmd_check(ck, std::cout);
    } catch (const capvor::InfeasibleInstance& e) {
        std::cerr << "error: " << e.what() << " (deficit "
                  << capvor::format_double(e.deficit) << ")\n";
        return 2;
    } catch (const capvor::ParseError& e) {
        std::cerr << "error: " << e.what();
        if (e.line > 0) std::cerr << " (line " << e.line << ")";
        std::cerr << "\n";
        return 1;
    } catch (const capvor::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
