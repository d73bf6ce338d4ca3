#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

// Batch assignment primitives. The hot loop of every measure integration
// scores each demand atom against every site and keeps the weighted argmin.
// A scalar reference kernel and an AVX2 kernel implement the same IEEE
// operation sequence; the dispatcher picks one at startup, overridable via
// the CAPVOR_KERNEL environment variable ("scalar" or "avx2"). Both produce
// bit-identical output, so everything downstream is reproducible across
// machines regardless of which one runs.

namespace capvor::kern {

// atan2 restricted to y >= 0 (not -0.0), (x, y) != (0, 0); result in [0, pi].
double atan2_pos(double y, double x) noexcept;

// Great-circle angle in radians between unit vectors, in [0, pi].
double unit_angle(double ax, double ay, double az, double bx, double by,
                  double bz) noexcept;

// Sites as structure-of-arrays; w holds additive weights in radians.
struct SiteBlock {
    std::vector<double> x, y, z, w;

    std::size_t size() const { return x.size(); }
    void add(double sx, double sy, double sz, double sw) {
        x.push_back(sx);
        y.push_back(sy);
        z.push_back(sz);
        w.push_back(sw);
    }
};

// For each atom i: out_site[i] = argmin_m [angle(p_i, s_m) + w_m] with ties
// to the lowest index, out_angle[i] = unweighted angle to that site.
// skip >= 0 excludes one site from the scan (used for best-other sweeps).
using AssignFn = void (*)(const double* px, const double* py, const double* pz,
                          std::size_t n, const SiteBlock& sites, int skip,
                          std::int32_t* out_site, double* out_angle);

void assign_scalar(const double* px, const double* py, const double* pz,
                   std::size_t n, const SiteBlock& sites, int skip,
                   std::int32_t* out_site, double* out_angle);

#if CAPVOR_HAVE_AVX2
void assign_avx2(const double* px, const double* py, const double* pz,
                 std::size_t n, const SiteBlock& sites, int skip,
                 std::int32_t* out_site, double* out_angle);
#endif

// Kernel selected for this process (env override, else CPU detection).
AssignFn assign_kernel();
std::string assign_kernel_name();

}  // namespace capvor::kern
