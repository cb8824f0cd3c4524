#include <doctest.h>

#include "nlpar/error.hpp"
#include "nlpar/kernels.hpp"

#include <cmath>

using namespace nlpar;

namespace {

// Independent closed form 4^s Γ(n/2 + s) / (π^{n/2} |Γ(-s)|).
double normalization_closed_form(int n, double s) {
    return std::pow(4.0, s) * std::tgamma(0.5 * n + s) / (std::pow(M_PI, 0.5 * n) * std::abs(std::tgamma(-s)));
}

}  // namespace

TEST_CASE("fractional Laplacian normalization matches the Gamma-function formula") {
    for (int n : {1, 2}) {
        for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            CAPTURE(n);
            CAPTURE(s);
            CHECK(fractional_laplacian_constant(n, s) == doctest::Approx(normalization_closed_form(n, s)).epsilon(1e-8));
        }
    }
    CHECK(fractional_laplacian_constant(1, 0.5) == doctest::Approx(1.0 / M_PI).epsilon(1e-10));
}

TEST_CASE("kernel values, symmetry and homogeneity") {
    const auto k = KernelSpec::fractional_laplacian(1, 0.5);
    const Point x{0.3, 0.0}, y{1.3, 0.0};
    CHECK(k(x, y, 0.0) == doctest::Approx(1.0 / M_PI));
    CHECK(k(x, y, 0.0) == k(y, x, 0.0));
    const auto c = KernelSpec::constant_multiple(2, 0.4, 3.0, 2.0);
    const Point a{0.1, 0.2}, b{0.7, -0.5};
    const Point a2{0.2, 0.4}, b2{1.4, -1.0};
    // K(ρx, ρy) = ρ^{-n-2s} K(x, y)
    CHECK(c(a2, b2, 0.0) == doctest::Approx(c(a, b, 0.0) * std::pow(2.0, -2.8)).epsilon(1e-14));
    CHECK_THROWS_AS(k(x, x, 0.0), SingularEvaluationError);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(KernelSpec::fractional_laplacian(1, 1.0), PreconditionError);
    CHECK_THROWS_AS(KernelSpec::fractional_laplacian(3, 0.5), PreconditionError);
    CHECK_THROWS_AS(KernelSpec::constant_multiple(1, 0.5, 0.5), PreconditionError);
    // Λ must admit the normalization 1/π ≈ 0.318, so Λ ≥ π.
    CHECK_THROWS_AS(KernelSpec::fractional_laplacian(1, 0.5, 2.0), PreconditionError);
    CHECK(KernelSpec::fractional_laplacian(1, 0.5).lambda() == doctest::Approx(M_PI));
    CHECK_THROWS_AS(named_modulation("nope"), PreconditionError);
}

TEST_CASE("ellipticity holds for every built-in family") {
    const auto samples = random_kernel_samples(1, 500, 11, 1e-3, 1e3, 0.0, 5.0);
    for (const auto& name : modulation_names()) {
        const auto m = named_modulation(name);
        const double lambda = std::max(m.upper, 1.0 / m.lower);
        const auto k = KernelSpec::modulated(1, 0.6, lambda, m);
        const auto rep = check_ellipticity(k, samples);
        CAPTURE(name);
        CHECK(rep.pass);
        CHECK(rep.worst_ratio <= lambda * (1.0 + 1e-12));
        CHECK(rep.min_ratio >= m.lower - 1e-12);
        CHECK(rep.max_ratio <= m.upper + 1e-12);
    }
    const auto fl = KernelSpec::fractional_laplacian(1, 0.5);
    CHECK(check_ellipticity(fl, samples).pass);
}

TEST_CASE("modulated kernels are symmetric in x and y") {
    const auto samples = random_kernel_samples(2, 200, 5, 0.01, 10.0, 0.0, 3.0);
    for (const auto& name : modulation_names()) {
        const auto m = named_modulation(name);
        const auto k = KernelSpec::modulated(2, 0.3, std::max(m.upper, 1.0 / m.lower), m);
        for (const auto& smp : samples) {
            CHECK(k(smp.x, smp.y, smp.t) == doctest::Approx(k(smp.y, smp.x, smp.t)).epsilon(1e-14));
        }
    }
}

TEST_CASE("time horizon is enforced") {
    const auto k = KernelSpec::fractional_laplacian(1, 0.5).with_horizon(0.0, 1.0);
    CHECK_NOTHROW(k(Point{0.0, 0.0}, Point{1.0, 0.0}, 0.5));
    CHECK_THROWS_AS(k(Point{0.0, 0.0}, Point{1.0, 0.0}, 2.0), PreconditionError);
}
