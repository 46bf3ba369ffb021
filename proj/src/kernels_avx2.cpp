#include "gnx/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#define GNX_AVX2 __attribute__((target("avx2")))

namespace gnx::kernels::avx2 {

namespace {

GNX_AVX2 inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

}  // namespace

GNX_AVX2 void axpby(double a, const double* x, double b, const double* y, double* out,
                    std::size_t n) {
    const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ax = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        const __m256d by = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(out + i, _mm256_add_pd(ax, by));
    }
    scalar::axpby(a, x + i, b, y + i, out + i, n - i);
}

GNX_AVX2 void swe_point_terms(const double* h, const double* hu, const double* bx, double g,
                              double cf, double* fmass, double* fmom, double* src, std::size_t n) {
    const __m256d vg = _mm256_set1_pd(g), vhg = _mm256_set1_pd(0.5 * g), vcf = _mm256_set1_pd(cf);
    const __m256d sign = _mm256_set1_pd(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vh = _mm256_loadu_pd(h + i);
        const __m256d vhu = _mm256_loadu_pd(hu + i);
        const __m256d u = _mm256_div_pd(vhu, vh);
        _mm256_storeu_pd(fmass + i, vhu);
        const __m256d mom = _mm256_add_pd(_mm256_mul_pd(vhu, u), _mm256_mul_pd(vhg, _mm256_mul_pd(vh, vh)));
        _mm256_storeu_pd(fmom + i, mom);
        const __m256d grav = _mm256_mul_pd(_mm256_mul_pd(vg, vh), _mm256_loadu_pd(bx + i));
        const __m256d fric = _mm256_mul_pd(vcf, _mm256_mul_pd(abs_pd(u), u));
        // sign flip by xor so signed zeros match the scalar negation
        _mm256_storeu_pd(src + i, _mm256_sub_pd(_mm256_xor_pd(grav, sign), fric));
    }
    scalar::swe_point_terms(h + i, hu + i, bx + i, g, cf, fmass + i, fmom + i, src + i, n - i);
}

GNX_AVX2 double max_wave_speed(const double* h, const double* hu, double g, std::size_t n) {
    const __m256d vg = _mm256_set1_pd(g);
    __m256d vmax = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vh = _mm256_loadu_pd(h + i);
        const __m256d s = _mm256_add_pd(abs_pd(_mm256_div_pd(_mm256_loadu_pd(hu + i), vh)),
                                        _mm256_sqrt_pd(_mm256_mul_pd(vg, vh)));
        vmax = _mm256_max_pd(vmax, s);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vmax);
    double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    return std::max(m, scalar::max_wave_speed(h + i, hu + i, g, n - i));
}

}  // namespace gnx::kernels::avx2

#endif
