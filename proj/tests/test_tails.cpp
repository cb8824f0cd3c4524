#include <doctest.h>

#include "nlpar/error.hpp"
#include "nlpar/tails.hpp"

#include <cmath>

using namespace nlpar;

namespace {

SpaceTimeField constant_field(const Grid& g, double value, double order) {
    return sample_field(g, uniform_times(0.0, 2.0, 0.125), order, [value](const Point&, double) { return value; });
}

}  // namespace

TEST_CASE("tail of the constant one in closed form") {
    // r^{2s} ∫_{|x|>r} |x|^{-1-2s} dx = 1/s, whatever r and t.
    const Grid g(1, 6.0, 241);
    for (double s : {0.3, 0.5, 0.75}) {
        const auto f = constant_field(g, 1.0, s);
        const auto ext = ExteriorData::constant(1.0);
        for (double r : {0.5, 1.0, 2.0}) {
            CAPTURE(s);
            CAPTURE(r);
            const TailQuery q{{0.0, 0.0}, r, 0.5, 1.5, TailTarget::positive_part};
            CHECK(tail(f, ext, q) == doctest::Approx(1.0 / s).epsilon(1e-2));
            CHECK(tail_sup(f, ext, q) == doctest::Approx(1.0 / s).epsilon(1e-2));
        }
    }
    const auto f = constant_field(g, 1.0, 0.5);
    const TailQuery q{{0.0, 0.0}, 1.0, 0.0, 2.0, TailTarget::absolute_value};
    CHECK(tail(f, ExteriorData::constant(1.0), q) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(tail(f.map([](double) { return 0.0; }), ExteriorData::zero(), q) == 0.0);
}

TEST_CASE("tail of a decaying profile against its closed form") {
    // u = (1 + x^2)^{-1/2} everywhere, s = 1/2:
    // r ∫_{|x|>r} (1 + x^2)^{-1/2} x^{-2} dx = 2 (sqrt(1 + r^2) - r).
    const Grid g(1, 8.0, 801);
    const auto f = sample_field(g, {0.0, 1.0}, 0.5, [](const Point& x, double) { return 1.0 / std::hypot(1.0, x[0]); });
    const auto ext = ExteriorData::power_decay(1.0, -1.0);
    for (double r : {0.5, 1.0, 3.0}) {
        CAPTURE(r);
        const double exact = 2.0 * (std::sqrt(1.0 + r * r) - r);
        const auto v = tail_detailed(f, ext, TailQuery{{0.0, 0.0}, r, 0.0, 1.0, TailTarget::absolute_value});
        CHECK(v.value == doctest::Approx(exact).epsilon(2e-3));
        CHECK(v.error_estimate < 1e-6);
    }
}

TEST_CASE("tail parts add up and scale linearly") {
    const Grid g(1, 5.0, 201);
    const auto f = sample_field(g, uniform_times(0.0, 1.0, 0.25), 0.4,
                                [](const Point& x, double t) { return std::sin(2.0 * x[0] + t) + 0.3; });
    const auto ext = ExteriorData::power_decay(1.5, -0.5).shifted(-0.2);
    const Point x0{0.4, 0.0};
    for (std::size_t m = 0; m < f.levels(); ++m) {
        const double plus = spatial_tail_integral(f, ext, x0, 1.0, m, TailTarget::positive_part);
        const double minus = spatial_tail_integral(f, ext, x0, 1.0, m, TailTarget::negative_part);
        const double abs = spatial_tail_integral(f, ext, x0, 1.0, m, TailTarget::absolute_value);
        CHECK(plus > 0.0);
        CHECK(minus > 0.0);
        CHECK(plus + minus == doctest::Approx(abs).epsilon(1e-6));
        const double doubled = spatial_tail_integral(f.map([](double v) { return 2.0 * v; }), ext.scaled(2.0), x0, 1.0,
                                                     m, TailTarget::positive_part);
        CHECK(doubled == doctest::Approx(2.0 * plus).epsilon(1e-10));
    }
    // Smaller balls see more of the field.
    const double small = spatial_tail_integral(f, ext, x0, 0.5, 0, TailTarget::absolute_value);
    const double large = spatial_tail_integral(f, ext, x0, 1.0, 0, TailTarget::absolute_value);
    CHECK(small > large);
}

TEST_CASE("tail inequalities on the constant state") {
    const Grid g(1, 6.0, 241);
    const auto f = constant_field(g, 1.0, 0.5);
    const auto ext = ExteriorData::constant(1.0);

    const auto a = check_supTail_by_Tail(f, ext, {0.0, 0.0}, 1.0, 0.75, 0.5);
    CHECK(a.pass);
    CHECK(a.lhs == doctest::Approx(2.0).epsilon(1e-3));
    // (2 + 1) / ε on the right
    CHECK(a.rhs_sum() == doctest::Approx(6.0).epsilon(1e-3));

    const auto b = check_tail_plus_by_minus(f, ext, {0.0, 0.0}, 0.5, 2.0, 0.5);
    CHECK(b.pass);
    CHECK(b.rhs_tail == 0.0);
    CHECK(b.C_emp == doctest::Approx(2.0).epsilon(1e-3));

    // u- vanishes: both sides of the minus version are zero.
    const auto c = check_supTail_by_Tail_minus(f, ext, {0.0, 0.0}, 1.0, 0.75, 0.5);
    CHECK(c.degenerate);
    CHECK(c.pass);
}

TEST_CASE("tail preconditions") {
    const Grid g(1, 6.0, 121);
    const auto f = constant_field(g, 1.0, 0.5);
    const auto ext = ExteriorData::constant(1.0);
    CHECK_THROWS_AS(check_supTail_by_Tail(f, ext, {0.0, 0.0}, 1.0, 0.75, 0.0), PreconditionError);
    // The backward window leaves the stored times.
    CHECK_THROWS_AS(check_supTail_by_Tail(f, ext, {0.0, 0.0}, 1.0, 0.25, 0.5), GeometryError);
    CHECK_THROWS_AS(check_tail_plus_by_minus(f, ext, {0.0, 0.0}, 1.0, 1.5, 0.5), PreconditionError);
    const auto negative = f.map([](double) { return -1.0; });
    CHECK_THROWS_AS(check_tail_plus_by_minus(negative, ext.scaled(-1.0), {0.0, 0.0}, 0.5, 2.0, 0.5), PreconditionError);
    CHECK_THROWS_AS(
        tail(f, ExteriorData::power_decay(1.0, 1.5), TailQuery{{0.0, 0.0}, 1.0, 0.0, 1.0, TailTarget::absolute_value}),
        DivergenceError);
}
