#include "capvor/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <variant>

#include "capvor/errors.hpp"
#include "capvor/solver.hpp"
#include "capvor/transport.hpp"
#include "capvor/weighted.hpp"
#include "json.hpp"

namespace capvor {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = kPi / 180.0;

struct Row {
    long line;  // 1-based
    std::string text;
};

// data rows only: blanks and # comments dropped, \r stripped
std::vector<Row> read_rows(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::vector<Row> rows;
    std::string s;
    long line = 0;
    while (std::getline(in, s)) {
        ++line;
        if (!s.empty() && s.back() == '\r') s.pop_back();
        std::size_t i = s.find_first_not_of(" \t");
        if (i == std::string::npos || s[i] == '#') continue;
        rows.push_back({line, s});
    }
    return rows;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = s.find(',', start);
        out.push_back(trim(s.substr(start, comma - start)));
        if (comma == std::string::npos) return out;
        start = comma + 1;
    }
}

double parse_num(const std::string& field, long line, const char* what) {
    double v = 0;
    auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                   v);
    if (ec != std::errc() || p != field.data() + field.size() ||
        !std::isfinite(v))
        throw ParseError(std::string("bad ") + what + " '" + field + "'",
                         line);
    return v;
}

long parse_index(const std::string& field, long line, const char* what) {
    long v = 0;
    auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                   v);
    if (ec != std::errc() || p != field.data() + field.size() || v < 0)
        throw ParseError(std::string("bad ") + what + " '" + field + "'",
                         line);
    return v;
}

double parse_lat(const std::string& field, long line) {
    double lat = parse_num(field, line, "latitude");
    if (lat < -90.0 || lat > 90.0)
        throw ParseError("latitude out of range '" + field + "'", line);
    return lat * kDeg;
}

double parse_lon(const std::string& field, long line) {
    double lon = std::remainder(parse_num(field, line, "longitude") * kDeg,
                                2 * kPi);
    if (lon <= -kPi) lon += 2 * kPi;
    return lon;
}

std::unordered_map<std::string, int> id_index(
    const std::vector<Site>& sites) {
    std::unordered_map<std::string, int> ix;
    for (std::size_t m = 0; m < sites.size(); ++m)
        ix.emplace(sites[m].id, static_cast<int>(m));
    return ix;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
    return s;
}

std::string digest_of(const std::string& path) {
    return "fnv1a64:" + hex64(fnv1a64_file(path));
}

nlohmann::json capacity_json(double c) {
    if (c == kUnbounded) return "inf";
    return c;
}

double capacity_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return kUnbounded;
        throw Error("bad capacity in report");
    }
    return j.get<double>();
}

struct AtomArrays {
    const double* px;
    const double* py;
    const double* pz;
    const double* mass;
    std::size_t n;
};

AtomArrays atom_arrays(const DemandMeasure& m) {
    if (const auto* d = std::get_if<DiscreteDemand>(&m))
        return {d->px.data(), d->py.data(), d->pz.data(), d->mass.data(),
                d->size()};
    const auto& r = std::get<RasterDemand>(m);
    return {r.px.data(), r.py.data(), r.pz.data(), r.pixel_mass.data(),
            r.size()};
}

// worst excess of an atom's assigned score over its best available score
double assignment_gap(const DemandMeasure& demand,
                      const std::vector<Site>& sites,
                      const std::vector<double>& d,
                      const std::vector<std::int32_t>& labels,
                      const Sphere& s) {
    AtomArrays a = atom_arrays(demand);
    double gap = 0;
    for (std::size_t k = 0; k < a.n; ++k) {
        UnitVec u{a.px[k], a.py[k], a.pz[k]};
        double best = kUnbounded;
        for (std::size_t m = 0; m < sites.size(); ++m)
            best = std::min(best,
                            geodesic_distance(u, sites[m].pos, s) + d[m]);
        double got = geodesic_distance(u, sites[labels[k]].pos, s) +
                     d[labels[k]];
        gap = std::max(gap, got - best);
    }
    return gap;
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << body;
    if (!out) throw Error("cannot write " + path);
}

nlohmann::json geojson_point(const UnitVec& p) {
    GeoPoint g = unit_to_geo(p);
    return nlohmann::json::array({g.lon / kDeg, g.lat / kDeg});
}

}  // namespace

std::vector<Site> parse_sites(const std::string& path) {
    std::vector<Site> sites;
    std::unordered_map<std::string, long> seen;
    for (const Row& row : read_rows(path)) {
        auto f = split_csv(row.text);
        if (f.size() != 4)
            throw ParseError("expected id,lat,lon,capacity", row.line);
        if (f[0].empty()) throw ParseError("empty site id", row.line);
        auto [it, fresh] = seen.emplace(f[0], row.line);
        if (!fresh)
            throw DuplicateId("site id '" + f[0] + "' repeats on lines " +
                              std::to_string(it->second) + " and " +
                              std::to_string(row.line));
        double lat = parse_lat(f[1], row.line);
        double lon = parse_lon(f[2], row.line);
        double cap;
        if (f[3] == "inf") {
            cap = kUnbounded;
        } else {
            cap = parse_num(f[3], row.line, "capacity");
            if (cap < 0)
                throw ParseError("negative capacity '" + f[3] + "'",
                                 row.line);
        }
        sites.push_back(make_site(f[0], {lat, lon}, cap));
    }
    if (sites.empty()) throw ParseError("no sites in " + path, 0);
    return sites;
}

DemandMeasure parse_demand(const std::string& path, DemandKind kind,
                           const Sphere& s) {
    auto rows = read_rows(path);
    if (rows.empty()) throw ParseError("no demand in " + path, 0);

    if (kind == DemandKind::Points) {
        DiscreteDemand d;
        for (const Row& row : rows) {
            auto f = split_csv(row.text);
            if (f.size() != 3)
                throw ParseError("expected lat,lon,mass", row.line);
            double lat = parse_lat(f[0], row.line);
            double lon = parse_lon(f[1], row.line);
            add_point(d, {lat, lon}, parse_num(f[2], row.line, "mass"));
        }
        return d;
    }

    // raster header, whitespace-separated
    std::istringstream head(rows[0].text);
    std::string rtok, ctok;
    double lat_min, lat_max, lon_min, lon_max;
    if (!(head >> rtok >> ctok >> lat_min >> lat_max >> lon_min >> lon_max) ||
        rtok.rfind("rows=", 0) != 0 || ctok.rfind("cols=", 0) != 0)
        throw ParseError("expected rows=R cols=C lat_min lat_max lon_min "
                         "lon_max",
                         rows[0].line);
    std::string tail;
    if (head >> tail)
        throw ParseError("trailing raster header field '" + tail + "'",
                         rows[0].line);
    long r = parse_index(rtok.substr(5), rows[0].line, "row count");
    long c = parse_index(ctok.substr(5), rows[0].line, "column count");
    if (r < 1 || c < 1)
        throw ParseError("raster needs at least one row and column",
                         rows[0].line);
    if (lat_min < -90 || lat_max > 90 || lat_min >= lat_max)
        throw ParseError("bad raster latitude range", rows[0].line);
    if (lon_min >= lon_max || lon_max - lon_min > 360 + 1e-9)
        throw ParseError("bad raster longitude range", rows[0].line);
    if (static_cast<long>(rows.size()) - 1 != r)
        throw ParseError("expected " + std::to_string(r) + " density rows, " +
                             "got " + std::to_string(rows.size() - 1),
                         rows[0].line);

    std::vector<double> density;
    density.reserve(static_cast<std::size_t>(r) * c);
    for (long i = 1; i <= r; ++i) {
        auto f = split_csv(rows[i].text);
        if (static_cast<long>(f.size()) != c)
            throw ParseError("expected " + std::to_string(c) + " densities",
                             rows[i].line);
        for (const std::string& field : f)
            density.push_back(parse_num(field, rows[i].line, "density"));
    }
    return make_raster(static_cast<int>(r), static_cast<int>(c),
                       lat_min * kDeg, lat_max * kDeg, lon_min * kDeg,
                       lon_max * kDeg, std::move(density), s);
}

std::vector<double> parse_weights(const std::string& path,
                                  const std::vector<Site>& sites) {
    auto ix = id_index(sites);
    std::vector<double> d(sites.size(), 0.0);
    std::vector<bool> set(sites.size(), false);
    for (const Row& row : read_rows(path)) {
        auto f = split_csv(row.text);
        if (f.size() != 2) throw ParseError("expected id,weight", row.line);
        auto it = ix.find(f[0]);
        if (it == ix.end())
            throw ParseError("unknown site id '" + f[0] + "'", row.line);
        if (set[it->second])
            throw DuplicateId("weight for '" + f[0] + "' given twice");
        set[it->second] = true;
        d[it->second] = parse_num(f[1], row.line, "weight");
    }
    for (std::size_t m = 0; m < sites.size(); ++m)
        if (!set[m])
            throw ParseError("no weight for site '" + sites[m].id + "'", 0);
    return d;
}

std::vector<std::int32_t> parse_assignment(const std::string& path,
                                           std::size_t atom_count,
                                           const std::vector<Site>& sites) {
    auto ix = id_index(sites);
    std::vector<std::int32_t> labels(atom_count, -1);
    for (const Row& row : read_rows(path)) {
        auto f = split_csv(row.text);
        if (f.size() != 2)
            throw ParseError("expected atom,site", row.line);
        long atom = parse_index(f[0], row.line, "atom index");
        if (atom >= static_cast<long>(atom_count))
            throw MismatchedAssignment("atom " + std::to_string(atom) +
                                       " out of range");
        auto it = ix.find(f[1]);
        if (it == ix.end())
            throw MismatchedAssignment("unknown site id '" + f[1] + "'");
        if (labels[atom] != -1)
            throw MismatchedAssignment("atom " + std::to_string(atom) +
                                       " assigned twice");
        labels[atom] = static_cast<std::int32_t>(it->second);
    }
    for (std::size_t k = 0; k < atom_count; ++k)
        if (labels[k] == -1)
            throw MismatchedAssignment("atom " + std::to_string(k) +
                                       " has no assignment");
    return labels;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::uint64_t h = 14695981039346656037ull;
    char buf[65536];
    for (;;) {
        in.read(buf, sizeof buf);
        std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (got < static_cast<std::streamsize>(sizeof buf)) break;
    }
    return h;
}

std::string format_double(double x) {
    if (x == kUnbounded) return "inf";
    return nlohmann::json(x).dump();
}

void write_report(const std::string& path, const RunReport& r) {
    nlohmann::json j;
    j["sites"] = {{"path", r.sites_path}, {"digest", r.sites_digest}};
    j["demand"] = {{"path", r.demand_path},
                   {"digest", r.demand_digest},
                   {"kind", r.demand_kind}};
    j["radius"] = r.radius;
    j["feasible"] = r.feasible;
    j["deficit"] = r.deficit;
    j["site_ids"] = r.site_ids;
    j["capacity"] = nlohmann::json::array();
    for (double c : r.capacity) j["capacity"].push_back(capacity_json(c));
    j["load"] = r.load;
    j["weights"] = r.weights;
    j["active"] = r.active;
    j["total_distance"] = r.total_distance;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["note"] = r.note;
    j["wall_time_ms"] = r.wall_time_ms;
    write_text(path, j.dump(2) + "\n");
}

RunReport read_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    RunReport r;
    r.sites_path = j.at("sites").at("path").get<std::string>();
    r.sites_digest = j.at("sites").at("digest").get<std::string>();
    r.demand_path = j.at("demand").at("path").get<std::string>();
    r.demand_digest = j.at("demand").at("digest").get<std::string>();
    r.demand_kind = j.at("demand").at("kind").get<std::string>();
    r.radius = j.at("radius").get<double>();
    r.feasible = j.at("feasible").get<bool>();
    r.deficit = j.at("deficit").get<double>();
    r.site_ids = j.at("site_ids").get<std::vector<std::string>>();
    for (const auto& c : j.at("capacity"))
        r.capacity.push_back(capacity_from_json(c));
    r.load = j.at("load").get<std::vector<double>>();
    r.weights = j.at("weights").get<std::vector<double>>();
    r.active = j.at("active").get<std::vector<int>>();
    r.total_distance = j.at("total_distance").get<double>();
    r.iterations = j.at("iterations").get<int>();
    r.converged = j.at("converged").get<bool>();
    r.note = j.at("note").get<std::string>();
    r.wall_time_ms = j.at("wall_time_ms").get<double>();
    return r;
}

int cmd_solve(const SolveOptions& opt, std::ostream& out) {
    if (!(opt.radius > 0)) throw Error("radius must be positive");
    Sphere s{opt.radius};
    auto sites = parse_sites(opt.sites_path);
    auto demand = parse_demand(opt.demand_path, opt.kind, s);

    std::filesystem::create_directories(opt.out_dir);
    std::string dir = opt.out_dir + "/";

    RunReport r;
    r.sites_path = opt.sites_path;
    r.sites_digest = digest_of(opt.sites_path);
    r.demand_path = opt.demand_path;
    r.demand_digest = digest_of(opt.demand_path);
    r.demand_kind = opt.kind == DemandKind::Points ? "points" : "raster";
    r.radius = opt.radius;
    for (const Site& site : sites) {
        r.site_ids.push_back(site.id);
        r.capacity.push_back(site.capacity);
    }

    Feasibility feas = check_feasibility(sites, demand);
    if (!feas.ok) {
        r.feasible = false;
        r.deficit = feas.deficit;
        write_report(dir + "report.json", r);
        out << "infeasible: capacity short of demand by "
            << format_double(feas.deficit) << "\n";
        return 2;
    }

    SolverConfig cfg;
    cfg.tol = opt.tol;
    cfg.max_outer = opt.max_iter;
    cfg.threads = opt.threads;

    auto t0 = std::chrono::steady_clock::now();
    SolveResult res = solve(sites, demand, s, cfg);
    auto stats = integrate_labels(demand, sites, res.assignment.atom_site, s);
    r.wall_time_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();

    r.load = stats.load;
    r.weights = res.weights;
    r.active = res.active;
    r.total_distance = stats.total_distance;
    r.iterations = res.iterations;
    r.converged = res.converged;
    bool constrained = false;
    for (double w : res.weights) constrained = constrained || w != 0.0;
    if (!constrained && res.active.empty()) r.note = "classical Voronoi";
    write_report(dir + "report.json", r);

    std::string acsv = "# atom,site\n";
    for (std::size_t k = 0; k < res.assignment.atom_site.size(); ++k)
        acsv += std::to_string(k) + "," +
                sites[res.assignment.atom_site[k]].id + "\n";
    write_text(dir + "assignment.csv", acsv);

    std::string wcsv = "# id,weight\n";
    for (std::size_t m = 0; m < sites.size(); ++m)
        wcsv += sites[m].id + "," + format_double(res.weights[m]) + "\n";
    write_text(dir + "weights.csv", wcsv);

    out << "feasible: yes\n";
    out << (res.converged ? "converged" : "hit the iteration cap") << " after "
        << res.iterations << " iteration(s)\n";
    if (!r.note.empty()) out << "diagram: " << r.note << "\n";
    for (std::size_t i = 0; i < res.active.size(); ++i)
        out << "at capacity: " << sites[res.active[i]].id << " (load "
            << format_double(r.load[res.active[i]]) << ", residual "
            << format_double(res.residuals[i]) << ")\n";
    out << "total distance: " << format_double(r.total_distance) << "\n";
    out << "wrote " << dir << "report.json, assignment.csv, weights.csv\n";
    return res.converged ? 0 : 3;
}

int cmd_diagram(const DiagramOptions& opt, std::ostream& out) {
    if (!(opt.radius > 0)) throw Error("radius must be positive");
    if (!(opt.step_deg > 0)) throw Error("step must be positive");
    Sphere s{opt.radius};
    auto sites = parse_sites(opt.sites_path);
    std::vector<double> d(sites.size(), 0.0);
    if (!opt.weights_path.empty()) d = parse_weights(opt.weights_path, sites);

    DiagramGraph g =
        build_weighted_diagram(sites, d, s, opt.step_deg * kDeg);

    std::map<std::pair<int, int>, std::vector<const DiagramEdge*>> pairs;
    for (const DiagramEdge& e : g.edges)
        pairs[{e.site_a, e.site_b}].push_back(&e);

    nlohmann::json features = nlohmann::json::array();
    for (const auto& [pr, arcs] : pairs) {
        nlohmann::json lines = nlohmann::json::array();
        for (const DiagramEdge* e : arcs) {
            nlohmann::json line = nlohmann::json::array();
            for (const UnitVec& p : e->points) line.push_back(geojson_point(p));
            lines.push_back(std::move(line));
        }
        nlohmann::json f;
        f["type"] = "Feature";
        f["properties"] = {{"site_a", sites[pr.first].id},
                           {"site_b", sites[pr.second].id},
                           {"d_ml", d[pr.first] - d[pr.second]}};
        f["geometry"] = {{"type", "MultiLineString"},
                         {"coordinates", std::move(lines)}};
        features.push_back(std::move(f));
    }
    for (std::size_t m = 0; m < sites.size(); ++m) {
        nlohmann::json f;
        f["type"] = "Feature";
        f["properties"] = {{"id", sites[m].id},
                           {"capacity", capacity_json(sites[m].capacity)},
                           {"weight", d[m]}};
        f["geometry"] = {{"type", "Point"},
                         {"coordinates", geojson_point(sites[m].pos)}};
        features.push_back(std::move(f));
    }

    nlohmann::json geo;
    geo["type"] = "FeatureCollection";
    geo["features"] = std::move(features);
    write_text(opt.out_path, geo.dump() + "\n");
    out << "wrote " << opt.out_path << ": " << pairs.size()
        << " boundary feature(s), " << sites.size() << " site point(s)\n";
    return 0;
}

int cmd_check(const CheckOptions& opt, std::ostream& out) {
    if (!(opt.radius > 0)) throw Error("radius must be positive");
    Sphere s{opt.radius};
    auto sites = parse_sites(opt.sites_path);
    auto demand = parse_demand(opt.demand_path, opt.kind, s);
    auto labels =
        parse_assignment(opt.assignment_path, atom_arrays(demand).n, sites);

    auto stats = integrate_labels(demand, sites, labels, s);
    double slack = 1e-9 * total_mass(demand);
    bool violated = false;
    for (std::size_t m = 0; m < sites.size(); ++m) {
        if (stats.load[m] > sites[m].capacity + slack) {
            violated = true;
            out << "over capacity: " << sites[m].id << " load "
                << format_double(stats.load[m]) << " exceeds "
                << format_double(sites[m].capacity) << " by "
                << format_double(stats.load[m] - sites[m].capacity) << "\n";
        }
    }
    if (!violated) out << "capacities: ok\n";
    out << "total distance: " << format_double(stats.total_distance) << "\n";

    if (const auto* disc = std::get_if<DiscreteDemand>(&demand)) {
        TransportInstance inst;
        inst.cost.assign(disc->size(), std::vector<double>(sites.size()));
        for (std::size_t k = 0; k < disc->size(); ++k) {
            UnitVec u{disc->px[k], disc->py[k], disc->pz[k]};
            for (std::size_t m = 0; m < sites.size(); ++m)
                inst.cost[k][m] = geodesic_distance(u, sites[m].pos, s);
        }
        inst.mass = disc->mass;
        for (const Site& site : sites) inst.capacity.push_back(site.capacity);
        std::vector<int> who(labels.begin(), labels.end());
        if (auto v = check_exchange_optimality(who, inst)) {
            violated = true;
            out << "exchange violation: moving user " << v->user_a
                << " from " << sites[v->site_m].id << " against user "
                << v->user_b << " at " << sites[v->site_l].id << " gains "
                << format_double(v->gain) << "\n";
        } else {
            out << "exchange: optimal\n";
        }
    } else {
        out << "exchange: skipped (raster demand)\n";
    }

    if (!opt.weights_path.empty()) {
        auto d = parse_weights(opt.weights_path, sites);
        out << "potential gap: "
            << format_double(assignment_gap(demand, sites, d, labels, s))
            << "\n";
    }
    return violated ? 2 : 0;
}

}  // namespace capvor
