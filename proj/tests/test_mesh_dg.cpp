#include <doctest.h>

#include <cmath>
#include <random>

#include "gnx/dgcore.hpp"
#include "gnx/mesh1d.hpp"

using namespace gnx;

namespace {

const std::pair<BoundaryKind, BoundaryKind> kWalls{Reflecting{}, Reflecting{}};

double l2_error(const DgField& f, const DgSpace& space, const std::function<double(double)>& ref) {
    // denser rule than the space uses, so the oracle is independent of the projection rule
    const Quadrature q = Quadrature::gauss_legendre(2 * space.order() + 15);
    double s = 0.0;
    for (std::size_t e = 0; e < space.n_elements(); ++e)
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double x = space.mesh().to_physical(e, q.points[i]);
            s += q.weights[i] * space.jacobian(e) * std::pow(eval_at(f, space, e, q.points[i]) - ref(x), 2);
        }
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("uniform mesh spacing and skeleton") {
    const Mesh1D m = build_uniform_mesh(0.0, 20.0, 400, kWalls);
    CHECK(m.n_elements() == 400);
    for (std::size_t e = 0; e < 400; ++e) CHECK(m.length(e) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(m.skeleton().size() == 399);

    const Mesh1D one = build_uniform_mesh(0.0, 1.0, 1, kWalls);
    CHECK(one.n_elements() == 1);
    CHECK(one.skeleton().empty());

    const Mesh1D slope = build_uniform_mesh(-20.0, 20.0, 160, kWalls);
    CHECK(slope.length(17) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("mesh rejects bad input") {
    CHECK_THROWS(build_uniform_mesh(0.0, 1.0, 0, kWalls));
    CHECK_THROWS(build_uniform_mesh(1.0, 0.0, 4, kWalls));
    CHECK_THROWS(Mesh1D({0.0, 0.5, 0.5, 1.0}, Reflecting{}, Reflecting{}));
    CHECK_THROWS(Mesh1D({0.0, 1.0}, Wavemaker::periodic(0.01, 0.0), Reflecting{}));
}

TEST_CASE("node neighbours") {
    const Mesh1D two = build_uniform_mesh(0.0, 1.0, 2, kWalls);
    auto [l, r] = neighbors(two, 1);
    CHECK(l == std::optional<std::size_t>(0));
    CHECK(r == std::optional<std::size_t>(1));
    auto [l0, r0] = neighbors(two, 0);
    CHECK_FALSE(l0.has_value());
    CHECK(r0 == std::optional<std::size_t>(0));

    const Mesh1D m = build_uniform_mesh(0.0, 20.0, 400, kWalls);
    auto [ll, rr] = neighbors(m, 400);
    CHECK(ll == std::optional<std::size_t>(399));
    CHECK_FALSE(rr.has_value());
}

TEST_CASE("locate uses the left element on interior nodes") {
    const Mesh1D m = build_uniform_mesh(0.0, 1.0, 4, kWalls);
    CHECK(m.locate(0.0) == 0);
    CHECK(m.locate(0.25) == 0);
    CHECK(m.locate(0.2500001) == 1);
    CHECK(m.locate(1.0) == 3);
}

TEST_CASE("wavemaker elevation") {
    const Wavemaker w = Wavemaker::periodic(0.01, 2.2);
    CHECK(w.elevation(0.0) == 0.0);
    CHECK(w.elevation(0.55) == doctest::Approx(0.01).epsilon(1e-12));
    const Wavemaker t = Wavemaker::tabulated({{0.0, 0.0}, {1.0, 0.2}});
    CHECK(t.elevation(0.5) == doctest::Approx(0.1));
    CHECK(t.elevation(3.0) == doctest::Approx(0.2));
}

TEST_CASE("Gauss-Legendre exactness") {
    for (int d = 0; d <= 9; ++d) {
        const Quadrature q = Quadrature::gauss_legendre(d);
        CHECK(q.exactness >= d);
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * std::pow(q.points[i], d);
        CHECK(s == doctest::Approx(d % 2 ? 0.0 : 2.0 / (d + 1)).epsilon(1e-14));
    }
}

TEST_CASE("projection of constants and linears") {
    const DgSpace space(build_uniform_mesh(0.0, 1.0, 5, kWalls), 1);
    const DgField c = project([](double) { return 0.6; }, space);
    for (std::size_t e = 0; e < 5; ++e) {
        CHECK(c(e, 0, 0) == doctest::Approx(0.6).epsilon(1e-15));
        CHECK(std::abs(c(e, 0, 1)) < 1e-15);
        CHECK(element_mean(c, e) == doctest::Approx(0.6));
        CHECK(eval_at(c, space, e, 0.37) == doctest::Approx(0.6));
    }

    const DgSpace ref(build_uniform_mesh(-1.0, 1.0, 1, kWalls), 1);
    const DgField lin = project([](double x) { return x; }, ref);
    for (double xi : ref.quadrature().points) CHECK(eval_at(lin, ref, 0, xi) == doctest::Approx(xi).epsilon(1e-14));
    CHECK(eval_at(lin, ref, 0, 0.0) == doctest::Approx(element_mean(lin, 0)));
    // odd linear mode: mean is the leading coefficient
    CHECK(element_mean(lin, 0) == lin(0, 0, 0));
}

TEST_CASE("projection converges at order p + 1") {
    const double kappa = 0.7071;
    auto f = [kappa](double x) { return std::pow(1.0 / std::cosh(kappa * (x - 5.0)), 2); };
    for (int p : {1, 2}) {
        std::vector<double> err;
        for (std::size_t n : {20u, 40u, 80u}) {
            const DgSpace space(build_uniform_mesh(0.0, 20.0, n, kWalls), p);
            err.push_back(l2_error(project(f, space), space, f));
        }
        const double rate = std::log2(err[1] / err[2]);
        CAPTURE(p);
        CHECK(rate > p + 1 - 0.2);
    }
}

TEST_CASE("endpoint traces match direct polynomial evaluation") {
    const DgSpace space(build_uniform_mesh(0.0, 3.0, 6, kWalls), 2);
    const DgField f = project([](double x) { return std::sin(x); }, space);
    for (std::size_t e = 0; e < 6; ++e) {
        const double a = f(e, 0, 0), b = f(e, 0, 1), c = f(e, 0, 2);
        CHECK(space.left_trace(f, e, 0) == doctest::Approx(a - b + c).epsilon(1e-14));
        CHECK(space.right_trace(f, e, 0) == doctest::Approx(a + b + c).epsilon(1e-14));
    }
}

TEST_CASE("element mean equals quadrature of the projection") {
    const DgSpace space(build_uniform_mesh(0.0, 20.0, 40, kWalls), 1);
    const DgField f = project([](double x) { return std::pow(1.0 / std::cosh(0.7071 * (x - 5.0)), 2); }, space);
    const Quadrature q = Quadrature::gauss_legendre(11);
    for (std::size_t e = 0; e < 40; ++e) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) s += 0.5 * q.weights[i] * eval_at(f, space, e, q.points[i]);
        CHECK(std::abs(element_mean(f, e) - s) <= 1e-13);
    }
}

TEST_CASE("weak derivative of linear and constant fields") {
    const DgSpace space(build_uniform_mesh(-2.0, 3.0, 13, kWalls), 1);
    const DgField lin = project([](double x) { return 2.5 * x - 0.7; }, space);
    const DgField d = weak_derivative(lin, space);
    const DgField z = weak_derivative(project([](double) { return 0.6; }, space), space);
    for (std::size_t e = 0; e < 13; ++e) {
        CHECK(std::abs(d(e, 0, 0) - 2.5) < 1e-12);
        CHECK(std::abs(d(e, 0, 1)) < 1e-12);
        CHECK(std::abs(z(e, 0, 0)) < 1e-14);
        CHECK(std::abs(z(e, 0, 1)) < 1e-14);
    }
}

TEST_CASE("weak derivative converges for smooth data") {
    const double k = 1.3;
    std::vector<double> err;
    for (std::size_t n : {50u, 100u, 200u}) {
        const DgSpace space(build_uniform_mesh(0.0, 10.0, n, kWalls), 1);
        const DgField d = weak_derivative(project([k](double x) { return std::sin(k * x); }, space), space);
        err.push_back(l2_error(d, space, [k](double x) { return k * std::cos(k * x); }));
    }
    CHECK(std::log2(err[1] / err[2]) >= 0.95);
}

TEST_CASE("integrate sums element means times lengths") {
    const DgSpace space(build_uniform_mesh(0.0, 2.0, 8, kWalls), 1);
    const DgField f = project([](double x) { return x * x; }, space);
    CHECK(integrate(f, space) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
}
