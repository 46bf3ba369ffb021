#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "gnx/kernels.hpp"

using namespace gnx;

namespace {

struct Inputs {
    std::vector<double> h, hu, bx;
};

Inputs random_inputs(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dh(0.01, 2.0), du(-3.0, 3.0), db(-0.3, 0.3);
    Inputs in{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        in.h[i] = dh(rng);
        in.hu[i] = du(rng) * in.h[i];
        in.bx[i] = db(rng);
    }
    return in;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels against direct formulas") {
    const Inputs in = random_inputs(37, 1);
    const std::size_t n = in.h.size();
    std::vector<double> fm(n), fq(n), src(n);
    kernels::scalar::swe_point_terms(in.h.data(), in.hu.data(), in.bx.data(), 9.81, 0.012, fm.data(), fq.data(), src.data(), n);
    double wmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = in.hu[i] / in.h[i];
        CHECK(fm[i] == in.hu[i]);
        CHECK(fq[i] == doctest::Approx(in.hu[i] * u + 0.5 * 9.81 * in.h[i] * in.h[i]).epsilon(1e-15));
        CHECK(src[i] == doctest::Approx(-9.81 * in.h[i] * in.bx[i] - 0.012 * std::abs(u) * u).epsilon(1e-14));
        wmax = std::max(wmax, std::abs(u) + std::sqrt(9.81 * in.h[i]));
    }
    CHECK(kernels::scalar::max_wave_speed(in.h.data(), in.hu.data(), 9.81, n) == doctest::Approx(wmax).epsilon(1e-15));

    std::vector<double> out(n);
    kernels::scalar::axpby(2.0, in.h.data(), -0.5, in.hu.data(), out.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == 2.0 * in.h[i] - 0.5 * in.hu[i]);
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("AVX2 kernels are bit-identical to scalar kernels") {
    if (!kernels::backend_available(kernels::Backend::Avx2)) {
        MESSAGE("AVX2 unavailable, skipping");
        return;
    }
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 8u, 13u, 257u, 1023u}) {
        CAPTURE(n);
        const Inputs in = random_inputs(n, 100 + n);
        std::vector<double> a(n), b(n), c(n), a2(n), b2(n), c2(n);
        kernels::scalar::swe_point_terms(in.h.data(), in.hu.data(), in.bx.data(), 9.81, 0.012, a.data(), b.data(), c.data(), n);
        kernels::avx2::swe_point_terms(in.h.data(), in.hu.data(), in.bx.data(), 9.81, 0.012, a2.data(), b2.data(), c2.data(), n);
        CHECK(same_bits(a, a2));
        CHECK(same_bits(b, b2));
        CHECK(same_bits(c, c2));

        kernels::scalar::axpby(0.3, in.h.data(), -1.7, in.hu.data(), a.data(), n);
        kernels::avx2::axpby(0.3, in.h.data(), -1.7, in.hu.data(), a2.data(), n);
        CHECK(same_bits(a, a2));

        const double w1 = kernels::scalar::max_wave_speed(in.h.data(), in.hu.data(), 9.81, n);
        const double w2 = kernels::avx2::max_wave_speed(in.h.data(), in.hu.data(), 9.81, n);
        CHECK(std::memcmp(&w1, &w2, sizeof w1) == 0);
    }
}

#endif

TEST_CASE("backend table and names") {
    CHECK(kernels::backend_available(kernels::Backend::Scalar));
    CHECK(kernels::backend_name(kernels::Backend::Scalar) == "scalar");
    CHECK(kernels::table(kernels::Backend::Scalar).backend == kernels::Backend::Scalar);
    CHECK(kernels::backend_available(kernels::active().backend));
}
