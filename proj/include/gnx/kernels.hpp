#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Pointwise arithmetic kernels used by the element loops. Every kernel has a
// scalar reference implementation and, on x86-64, an AVX2 one. Both perform the
// same IEEE operations in the same order (no FMA contraction), so the results are
// bit-identical and the backend choice never changes simulation output.

namespace gnx::kernels {

enum class Backend { Scalar, Avx2 };

/// Shallow-water quantities at a batch of points.
struct SwePointInput {
    std::span<const double> h;
    std::span<const double> hu;
    std::span<const double> bed_slope;  ///< db/dx
};

struct SwePointOutput {
    std::span<double> mass_flux;      ///< hu
    std::span<double> momentum_flux;  ///< hu^2 / h + g h^2 / 2
    std::span<double> momentum_source;  ///< -g h db/dx - cf |u| u (friction optional)
};

struct KernelTable {
    Backend backend;
    /// out = a * x + b * y
    void (*axpby)(double a, const double* x, double b, const double* y, double* out, std::size_t n);
    void (*swe_point_terms)(const double* h, const double* hu, const double* bx, double g,
                            double cf, double* fmass, double* fmom, double* src, std::size_t n);
    /// max over points of |hu / h| + sqrt(g h)
    double (*max_wave_speed)(const double* h, const double* hu, double g, std::size_t n);
};

/// Table for a specific backend. Throws if the CPU cannot run it.
const KernelTable& table(Backend backend);
/// Best backend supported by this CPU, unless GNX_SIMD=scalar is set in the environment.
const KernelTable& active();
bool backend_available(Backend backend) noexcept;
std::string_view backend_name(Backend backend) noexcept;

void axpby(double a, std::span<const double> x, double b, std::span<const double> y,
           std::span<double> out);
/// Friction is disabled when cf == 0.
void swe_point_terms(const SwePointInput& in, double g, double cf, const SwePointOutput& out);
double max_wave_speed(std::span<const double> h, std::span<const double> hu, double g);

namespace scalar {
void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n);
void swe_point_terms(const double* h, const double* hu, const double* bx, double g, double cf,
                     double* fmass, double* fmom, double* src, std::size_t n);
double max_wave_speed(const double* h, const double* hu, double g, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n);
void swe_point_terms(const double* h, const double* hu, const double* bx, double g, double cf,
                     double* fmass, double* fmom, double* src, std::size_t n);
double max_wave_speed(const double* h, const double* hu, double g, std::size_t n);
}  // namespace avx2
#endif

}  // namespace gnx::kernels
