#include <algorithm>
#include <cmath>

#include "gnx/kernels.hpp"

namespace gnx::kernels::scalar {

void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void swe_point_terms(const double* h, const double* hu, const double* bx, double g, double cf,
                     double* fmass, double* fmom, double* src, std::size_t n) {
    const double half_g = 0.5 * g;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = hu[i] / h[i];
        fmass[i] = hu[i];
        fmom[i] = hu[i] * u + half_g * (h[i] * h[i]);
        src[i] = -(g * h[i]) * bx[i] - cf * (std::fabs(u) * u);
    }
}

double max_wave_speed(const double* h, const double* hu, double g, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = std::fabs(hu[i] / h[i]) + std::sqrt(g * h[i]);
        m = std::max(m, s);
    }
    return m;
}

}  // namespace gnx::kernels::scalar
