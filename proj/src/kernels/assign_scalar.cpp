#include "capvor/kernels.hpp"

#include <limits>

#include "atan2_core.hpp"

namespace capvor::kern {

double atan2_pos(double y, double x) noexcept { return atan2_pos_core(y, x); }

double unit_angle(double ax, double ay, double az, double bx, double by,
                  double bz) noexcept {
    return unit_angle_core(ax, ay, az, bx, by, bz);
}

void assign_scalar(const double* px, const double* py, const double* pz,
                   std::size_t n, const SiteBlock& sites, int skip,
                   std::int32_t* out_site, double* out_angle) {
    const std::size_t m = sites.size();
    for (std::size_t i = 0; i < n; ++i) {
        double best_score = std::numeric_limits<double>::infinity();
        double best_angle = 0.0;
        std::int32_t best = -1;
        for (std::size_t j = 0; j < m; ++j) {
            if (static_cast<int>(j) == skip) continue;
            double ang = unit_angle_core(px[i], py[i], pz[i], sites.x[j],
                                         sites.y[j], sites.z[j]);
            double score = ang + sites.w[j];
            // Strict < keeps the earlier site on ties, matching the
            // blend mask in the vector kernel.
            if (score < best_score) {
                best_score = score;
                best_angle = ang;
                best = static_cast<std::int32_t>(j);
            }
        }
        out_site[i] = best;
        out_angle[i] = best_angle;
    }
}

}  // namespace capvor::kern
