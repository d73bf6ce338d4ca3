#include "capvor/demand.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "capvor/errors.hpp"
#include "capvor/kernels.hpp"

namespace capvor {

namespace {

constexpr std::size_t kChunk = 4096;

struct AtomView {
    const double* px;
    const double* py;
    const double* pz;
    const double* mass;
    std::size_t n;
};

AtomView atoms_of(const DemandMeasure& m) {
    if (const auto* d = std::get_if<DiscreteDemand>(&m))
        return {d->px.data(), d->py.data(), d->pz.data(), d->mass.data(),
                d->size()};
    const auto& r = std::get<RasterDemand>(m);
    return {r.px.data(), r.py.data(), r.pz.data(), r.pixel_mass.data(),
            r.size()};
}

}  // namespace

void add_point(DiscreteDemand& d, const GeoPoint& p, double m) {
    if (!(m > 0.0))
        throw NegativeMass("demand point mass must be positive");
    UnitVec u = geo_to_unit(p);
    d.geo.push_back(p);
    d.px.push_back(u.x);
    d.py.push_back(u.y);
    d.pz.push_back(u.z);
    d.mass.push_back(m);
}

RasterDemand make_raster(int rows, int cols, double lat_min, double lat_max,
                         double lon_min, double lon_max,
                         std::vector<double> density, const Sphere& s) {
    RasterDemand r;
    r.rows = rows;
    r.cols = cols;
    r.lat_min = lat_min;
    r.lat_max = lat_max;
    r.lon_min = lon_min;
    r.lon_max = lon_max;
    r.radius = s.radius;
    r.density = std::move(density);
    const double dlat = (lat_max - lat_min) / rows;
    const double dlon = (lon_max - lon_min) / cols;
    const double r2dlon = s.radius * s.radius * dlon;
    r.px.reserve(r.density.size());
    r.py.reserve(r.density.size());
    r.pz.reserve(r.density.size());
    r.pixel_mass.reserve(r.density.size());
    for (int i = 0; i < rows; ++i) {
        double band = r2dlon * (std::sin(lat_min + (i + 1) * dlat) -
                                std::sin(lat_min + i * dlat));
        double lat = lat_min + (i + 0.5) * dlat;
        for (int j = 0; j < cols; ++j) {
            double dens = r.density[std::size_t(i) * cols + j];
            if (dens < 0.0)
                throw NegativeMass("raster density must be nonnegative");
            UnitVec u = geo_to_unit({lat, lon_min + (j + 0.5) * dlon});
            r.px.push_back(u.x);
            r.py.push_back(u.y);
            r.pz.push_back(u.z);
            r.pixel_mass.push_back(dens * band);
        }
    }
    return r;
}

double total_mass(const DemandMeasure& m) {
    AtomView a = atoms_of(m);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.n; ++i) sum += a.mass[i];
    return sum;
}

FullAssignment assign_demand(const DemandMeasure& m,
                             const std::vector<Site>& sites,
                             const std::vector<double>& d, const Sphere& s,
                             int threads) {
    if (sites.empty()) throw EmptySiteSet("assignment with no sites");
    const int n = static_cast<int>(sites.size());
    kern::SiteBlock block;
    for (int j = 0; j < n; ++j)
        block.add(sites[j].pos.x, sites[j].pos.y, sites[j].pos.z,
                  (d.empty() ? 0.0 : d[j]) / s.radius);

    AtomView a = atoms_of(m);
    FullAssignment out;
    out.atom_site.resize(a.n);
    out.load.assign(n, 0.0);
    std::vector<double> angle(a.n);

    const std::size_t nchunks = (a.n + kChunk - 1) / kChunk;
    std::vector<double> chunk_load(nchunks * n, 0.0);
    std::vector<double> chunk_dist(nchunks, 0.0);
    kern::AssignFn fn = kern::assign_kernel();

    auto run_chunk = [&](std::size_t c) {
        std::size_t lo = c * kChunk;
        std::size_t hi = std::min(a.n, lo + kChunk);
        fn(a.px + lo, a.py + lo, a.pz + lo, hi - lo, block, -1,
           out.atom_site.data() + lo, angle.data() + lo);
        double* loads = chunk_load.data() + c * n;
        double dist = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            loads[out.atom_site[i]] += a.mass[i];
            dist += a.mass[i] * angle[i];
        }
        chunk_dist[c] = dist;
    };

    int workers = std::max(1, threads);
    if (workers == 1 || nchunks <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::size_t> counter{0};
        auto worker = [&] {
            for (;;) {
                std::size_t c = counter.fetch_add(1);
                if (c >= nchunks) return;
                run_chunk(c);
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers - 1; ++w) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    }

    // Chunk-ordered reduction keeps the sums independent of thread count.
    double dist = 0.0;
    for (std::size_t c = 0; c < nchunks; ++c) {
        const double* loads = chunk_load.data() + c * n;
        for (int j = 0; j < n; ++j) out.load[j] += loads[j];
        dist += chunk_dist[c];
    }
    out.total_distance = s.radius * dist;
    return out;
}

AssignedIntegral integrate_assigned(const DemandMeasure& m,
                                    const std::vector<Site>& sites,
                                    const std::vector<double>& d,
                                    const Sphere& s, int threads) {
    FullAssignment fa = assign_demand(m, sites, d, s, threads);
    return {std::move(fa.load), fa.total_distance};
}

AssignedIntegral integrate_labels(const DemandMeasure& m,
                                  const std::vector<Site>& sites,
                                  const std::vector<std::int32_t>& labels,
                                  const Sphere& s) {
    const int n = static_cast<int>(sites.size());
    AtomView a = atoms_of(m);
    if (labels.size() != a.n)
        throw MismatchedAssignment("label count does not match demand");
    for (std::int32_t j : labels)
        if (j < 0 || j >= n)
            throw MismatchedAssignment("label names a site out of range");

    AssignedIntegral out;
    out.load.assign(n, 0.0);
    double dist = 0.0;
    // chunked exactly like assign_demand so the rounding matches
    const std::size_t nchunks = (a.n + kChunk - 1) / kChunk;
    for (std::size_t c = 0; c < nchunks; ++c) {
        std::size_t lo = c * kChunk;
        std::size_t hi = std::min(a.n, lo + kChunk);
        std::vector<double> loads(n, 0.0);
        double part = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            UnitVec u{a.px[i], a.py[i], a.pz[i]};
            loads[labels[i]] += a.mass[i];
            part += a.mass[i] * angle_between(u, sites[labels[i]].pos);
        }
        for (int j = 0; j < n; ++j) out.load[j] += loads[j];
        dist += part;
    }
    out.total_distance = s.radius * dist;
    return out;
}

}  // namespace capvor
