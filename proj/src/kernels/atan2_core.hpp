#pragma once

// Shared between the scalar and vector assignment kernels. Both follow the
// exact operation sequence below so that results agree bit for bit per lane:
// fused fma where written, unfused mul/sub where written, correctly rounded
// sqrt and divide, and min/max/select never see NaN or negative zero.
//
// atan2_pos(y, x) computes atan2 on the closed upper half plane:
//   requires y >= 0 (never -0.0) and (x, y) != (0, 0); returns [0, pi].
// Reduction: r = min(y,|x|)/max(y,|x|) in [0,1]; a half-angle step maps
// r > tan(pi/8) to q = (r-1)/(r+1) in (-tan(pi/8), 0]; the core polynomial
// then evaluates atan on [-tan(pi/8), tan(pi/8)] and quadrant fixups use
// hi/lo split constants to keep the total error within a few ulps.

#include <cmath>
#include <cstddef>

namespace capvor::kern {

inline constexpr double kTanPi8 = 0x1.a827999fcef32p-2;

inline constexpr double kPiHi  = 0x1.921fb54442d18p+1;
inline constexpr double kPiLo  = 0x1.1a62633145c07p-53;
inline constexpr double kPi2Hi = 0x1.921fb54442d18p+0;
inline constexpr double kPi2Lo = 0x1.1a62633145c07p-54;
inline constexpr double kPi4Hi = 0x1.921fb54442d18p-1;
inline constexpr double kPi4Lo = 0x1.1a62633145c07p-55;

// atan(r) = r + r*s*P(s) with s = r^2, minimax on s in [0, tan(pi/8)^2].
// Truncation error of the fit is below 3e-21, so rounding dominates.
inline constexpr double kAtanPoly[13] = {
    -0x1.5555555555555p-2, 0x1.9999999999997p-3,  -0x1.24924924920adp-3,
    0x1.c71c71c6ddbfcp-4,  -0x1.745d173565149p-4, 0x1.3b13aea9e84b6p-4,
    -0x1.1110cee80b516p-4, 0x1.e1d8e9bffe59dp-5,  -0x1.aebd1fa559894p-5,
    0x1.829ce3237ab26p-5,  -0x1.503c4469943acp-5, 0x1.f5ef74d05428dp-6,
    -0x1.c81291cfc455fp-7};

inline double atan2_pos_core(double y, double x) noexcept {
    double ax = std::fabs(x);
    double num = std::fmin(y, ax);
    double den = std::fmax(y, ax);
    double r = num / den;
    bool big = r > kTanPi8;
    double q = (r - 1.0) / (r + 1.0);
    double rr = big ? q : r;
    double s = rr * rr;
    double p = kAtanPoly[12];
    for (int k = 11; k >= 0; --k) p = std::fma(s, p, kAtanPoly[k]);
    double t = rr * s;
    double a = std::fma(t, p, rr);
    if (big) a = kPi4Hi + (kPi4Lo + a);
    if (y > ax) a = (kPi2Hi - a) + kPi2Lo;
    if (x < 0.0) a = (kPiHi - a) + kPiLo;
    return a;
}

// Great-circle angle between unit vectors, via atan2(|a x b|, a.b).
// The cross components stay unfused on purpose: with both products rounded
// individually, swapping a and b negates each component exactly, so the
// angle is exactly symmetric. The fma dot is symmetric as-is.
inline double unit_angle_core(double ax, double ay, double az, double bx,
                              double by, double bz) noexcept {
    double dot = std::fma(ax, bx, std::fma(ay, by, az * bz));
    double cx = ay * bz - az * by;
    double cy = az * bx - ax * bz;
    double cz = ax * by - ay * bx;
    double cn = std::sqrt(std::fma(cx, cx, std::fma(cy, cy, cz * cz)));
    return atan2_pos_core(cn, dot);
}

}  // namespace capvor::kern
