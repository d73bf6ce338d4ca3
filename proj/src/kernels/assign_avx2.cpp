// AVX2 lane-for-lane equivalent of assign_scalar. Every arithmetic step
// mirrors atan2_core.hpp: fmadd for the fused sequences, plain mul/sub for
// the cross terms, correctly rounded div and sqrt, and compare/blend where
// the scalar code selects. The remainder atoms (n mod 4) go through the
// scalar kernel, so output is bit-identical to assign_scalar for any n.

#include <immintrin.h>

#include <limits>

#include "capvor/kernels.hpp"

#include "atan2_core.hpp"

namespace capvor::kern {

namespace {

inline __m256d atan2_pos_pd(__m256d y, __m256d x) {
    const __m256d abs_mask = _mm256_castsi256_pd(
        _mm256_set1_epi64x(0x7fffffffffffffffLL));
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d ax = _mm256_and_pd(x, abs_mask);
    __m256d num = _mm256_min_pd(y, ax);
    __m256d den = _mm256_max_pd(y, ax);
    __m256d r = _mm256_div_pd(num, den);
    __m256d big = _mm256_cmp_pd(r, _mm256_set1_pd(kTanPi8), _CMP_GT_OQ);
    __m256d q = _mm256_div_pd(_mm256_sub_pd(r, one), _mm256_add_pd(r, one));
    __m256d rr = _mm256_blendv_pd(r, q, big);
    __m256d s = _mm256_mul_pd(rr, rr);
    __m256d p = _mm256_set1_pd(kAtanPoly[12]);
    for (int k = 11; k >= 0; --k)
        p = _mm256_fmadd_pd(s, p, _mm256_set1_pd(kAtanPoly[k]));
    __m256d t = _mm256_mul_pd(rr, s);
    __m256d a = _mm256_fmadd_pd(t, p, rr);
    __m256d a_big = _mm256_add_pd(
        _mm256_set1_pd(kPi4Hi), _mm256_add_pd(_mm256_set1_pd(kPi4Lo), a));
    a = _mm256_blendv_pd(a, a_big, big);
    __m256d swap = _mm256_cmp_pd(y, ax, _CMP_GT_OQ);
    __m256d a_swap = _mm256_add_pd(
        _mm256_sub_pd(_mm256_set1_pd(kPi2Hi), a), _mm256_set1_pd(kPi2Lo));
    a = _mm256_blendv_pd(a, a_swap, swap);
    __m256d neg = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LT_OQ);
    __m256d a_neg = _mm256_add_pd(
        _mm256_sub_pd(_mm256_set1_pd(kPiHi), a), _mm256_set1_pd(kPiLo));
    a = _mm256_blendv_pd(a, a_neg, neg);
    return a;
}

inline __m256d unit_angle_pd(__m256d ax, __m256d ay, __m256d az, __m256d bx,
                             __m256d by, __m256d bz) {
    __m256d dot = _mm256_fmadd_pd(
        ax, bx, _mm256_fmadd_pd(ay, by, _mm256_mul_pd(az, bz)));
    // cross stays unfused to match the scalar core (exact antisymmetry)
    __m256d cx = _mm256_sub_pd(_mm256_mul_pd(ay, bz), _mm256_mul_pd(az, by));
    __m256d cy = _mm256_sub_pd(_mm256_mul_pd(az, bx), _mm256_mul_pd(ax, bz));
    __m256d cz = _mm256_sub_pd(_mm256_mul_pd(ax, by), _mm256_mul_pd(ay, bx));
    __m256d cn = _mm256_sqrt_pd(_mm256_fmadd_pd(
        cx, cx, _mm256_fmadd_pd(cy, cy, _mm256_mul_pd(cz, cz))));
    return atan2_pos_pd(cn, dot);
}

}  // namespace

void assign_avx2(const double* px, const double* py, const double* pz,
                 std::size_t n, const SiteBlock& sites, int skip,
                 std::int32_t* out_site, double* out_angle) {
    const std::size_t m = sites.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d qx = _mm256_loadu_pd(px + i);
        __m256d qy = _mm256_loadu_pd(py + i);
        __m256d qz = _mm256_loadu_pd(pz + i);
        __m256d best_score =
            _mm256_set1_pd(std::numeric_limits<double>::infinity());
        __m256d best_angle = _mm256_setzero_pd();
        __m256d best_idx = _mm256_set1_pd(-1.0);
        for (std::size_t j = 0; j < m; ++j) {
            if (static_cast<int>(j) == skip) continue;
            __m256d sx = _mm256_set1_pd(sites.x[j]);
            __m256d sy = _mm256_set1_pd(sites.y[j]);
            __m256d sz = _mm256_set1_pd(sites.z[j]);
            __m256d ang = unit_angle_pd(qx, qy, qz, sx, sy, sz);
            __m256d score = _mm256_add_pd(ang, _mm256_set1_pd(sites.w[j]));
            __m256d lt = _mm256_cmp_pd(score, best_score, _CMP_LT_OQ);
            best_score = _mm256_blendv_pd(best_score, score, lt);
            best_angle = _mm256_blendv_pd(best_angle, ang, lt);
            best_idx = _mm256_blendv_pd(best_idx,
                                        _mm256_set1_pd(static_cast<double>(j)),
                                        lt);
        }
        _mm_storeu_si128(reinterpret_cast<__m128i*>(out_site + i),
                         _mm256_cvtpd_epi32(best_idx));
        _mm256_storeu_pd(out_angle + i, best_angle);
    }
    if (i < n)
        assign_scalar(px + i, py + i, pz + i, n - i, sites, skip, out_site + i,
                      out_angle + i);
}

}  // namespace capvor::kern
