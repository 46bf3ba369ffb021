#include "gnx/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace gnx::kernels {

namespace {

constexpr KernelTable kScalar{Backend::Scalar, &scalar::axpby, &scalar::swe_point_terms,
                              &scalar::max_wave_speed};

#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2{Backend::Avx2, &avx2::axpby, &avx2::swe_point_terms,
                            &avx2::max_wave_speed};
#endif

const KernelTable& select() {
    if (const char* env = std::getenv("GNX_SIMD"); env && std::string(env) == "scalar") return kScalar;
#if defined(__x86_64__) || defined(_M_X64)
    if (backend_available(Backend::Avx2)) return kAvx2;
#endif
    return kScalar;
}

}  // namespace

bool backend_available(Backend backend) noexcept {
    switch (backend) {
        case Backend::Scalar:
            return true;
        case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

std::string_view backend_name(Backend backend) noexcept {
    return backend == Backend::Avx2 ? "avx2" : "scalar";
}

const KernelTable& table(Backend backend) {
    if (!backend_available(backend))
        throw std::runtime_error("kernel backend " + std::string(backend_name(backend)) +
                                 " is not supported on this CPU");
#if defined(__x86_64__) || defined(_M_X64)
    if (backend == Backend::Avx2) return kAvx2;
#endif
    return kScalar;
}

const KernelTable& active() {
    static const KernelTable& t = select();
    return t;
}

void axpby(double a, std::span<const double> x, double b, std::span<const double> y,
           std::span<double> out) {
    if (x.size() != out.size() || y.size() != out.size())
        throw std::invalid_argument("axpby: size mismatch");
    active().axpby(a, x.data(), b, y.data(), out.data(), out.size());
}

void swe_point_terms(const SwePointInput& in, double g, double cf, const SwePointOutput& out) {
    const std::size_t n = in.h.size();
    if (in.hu.size() != n || in.bed_slope.size() != n || out.mass_flux.size() != n ||
        out.momentum_flux.size() != n || out.momentum_source.size() != n)
        throw std::invalid_argument("swe_point_terms: size mismatch");
    active().swe_point_terms(in.h.data(), in.hu.data(), in.bed_slope.data(), g, cf,
                             out.mass_flux.data(), out.momentum_flux.data(),
                             out.momentum_source.data(), n);
}

double max_wave_speed(std::span<const double> h, std::span<const double> hu, double g) {
    if (h.size() != hu.size()) throw std::invalid_argument("max_wave_speed: size mismatch");
    return active().max_wave_speed(h.data(), hu.data(), g, h.size());
}

}  // namespace gnx::kernels
