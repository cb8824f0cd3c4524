#include <doctest.h>

#include "nlpar/error.hpp"
#include "nlpar/exterior.hpp"

#include <cmath>

using namespace nlpar;

TEST_CASE("decay exponents of the built-in generators") {
    CHECK(ExteriorData::constant(2.0).decay_exponent() == 0.0);
    CHECK(std::isinf(ExteriorData::zero().decay_exponent()));
    CHECK(ExteriorData::zero().decay_exponent() < 0.0);
    CHECK(ExteriorData::power_decay(1.0, -0.5).decay_exponent() == -0.5);
    CHECK(ExteriorData::linear_in_time(-0.3).decay_exponent() == -0.3);
    CHECK(ExteriorData::annulus(10.0, 12.0, 1.0).decay_exponent() < -1e300);
    CHECK(ExteriorData::poisson_kernel(1.0).decay_exponent() == -2.0);
}

TEST_CASE("values of the generators") {
    const Point y{3.0, 0.0};
    CHECK(ExteriorData::power_decay(2.0, -1.0)(y, 0.0) == doctest::Approx(2.0 / std::sqrt(10.0)));
    CHECK(ExteriorData::linear_in_time(-1.0)(y, 2.0) == doctest::Approx(2.0 / 4.0));
    CHECK(ExteriorData::annulus(2.0, 4.0, -5.0)(y, 0.0) == -5.0);
    CHECK(ExteriorData::annulus(2.0, 4.0, -5.0)(Point{5.0, 0.0}, 0.0) == 0.0);
    // τ / (π (τ^2 + y^2)) with τ = t + offset
    CHECK(ExteriorData::poisson_kernel(1.0)(y, 1.0) == doctest::Approx(2.0 / (M_PI * 13.0)));
    CHECK(ExteriorData::plane_wave(2.0)(Point{0.25, 0.0}, 0.0) == doctest::Approx(std::cos(0.5)));
}

TEST_CASE("far-field series approximates the data at large radius") {
    const double rho = 500.0;
    for (const auto& ext : {ExteriorData::power_decay(0.7, -0.8), ExteriorData::linear_in_time(-0.4),
                            ExteriorData::poisson_kernel(2.0), ExteriorData::constant(3.0)}) {
        CAPTURE(ext.name);
        const double exact = ext(Point{rho, 0.0}, 1.5);
        CHECK(ext.far_value(rho, 1.5) == doctest::Approx(exact).epsilon(1e-6));
    }
}

TEST_CASE("arithmetic on exterior data") {
    const auto a = ExteriorData::power_decay(1.0, -0.5);
    const auto b = ExteriorData::annulus(10.0, 12.0, 2.0);
    const Point y{11.0, 0.0};
    CHECK(a.plus(b)(y, 0.0) == doctest::Approx(a(y, 0.0) + 2.0));
    CHECK(a.scaled(-3.0)(y, 0.0) == doctest::Approx(-3.0 * a(y, 0.0)));
    CHECK(a.shifted(1.0)(y, 0.0) == doctest::Approx(a(y, 0.0) + 1.0));
    CHECK(a.shifted(1.0).decay_exponent() == 0.0);
    const auto lin = ExteriorData::linear_in_time(-1.0);
    CHECK(lin.time_shifted(0.5)(y, 1.0) == doctest::Approx(lin(y, 0.5)));
    const auto mixed = a.plus(ExteriorData::annulus(10.0, 12.0, -5.0));
    CHECK(mixed.positive_part()(y, 0.0) == 0.0);
    CHECK(mixed.negative_part()(y, 0.0) == doctest::Approx(5.0 - a(y, 0.0)));
    CHECK(mixed.absolute()(y, 0.0) == doctest::Approx(5.0 - a(y, 0.0)));
    CHECK(mixed.positive_part()(Point{20.0, 0.0}, 0.0) == doctest::Approx(a(Point{20.0, 0.0}, 0.0)));
}

TEST_CASE("tail integrability requires γ < 2s") {
    CHECK_NOTHROW(require_convergent(ExteriorData::power_decay(1.0, 0.9), 0.5));
    CHECK_THROWS_AS(require_convergent(ExteriorData::power_decay(1.0, 1.2), 0.5), DivergenceError);
    CHECK_THROWS_AS(require_convergent(ExteriorData::power_decay(1.0, 1.0), 0.5), DivergenceError);
    CHECK_NOTHROW(require_convergent(ExteriorData::constant(1.0), 0.1));
}
