#include <doctest.h>

#include "nlpar/ensemble.hpp"
#include "nlpar/error.hpp"
#include "nlpar/oracles.hpp"
#include "nlpar/solver.hpp"

#include <algorithm>
#include <cmath>

using namespace nlpar;

namespace {

std::vector<KernelSpec> all_families(double s) {
    std::vector<KernelSpec> out{KernelSpec::fractional_laplacian(1, s), KernelSpec::constant_multiple(1, s, 2.0, 0.6)};
    for (const auto& name : modulation_names()) {
        const auto m = named_modulation(name);
        out.push_back(KernelSpec::modulated(1, s, std::max(m.upper, 1.0 / m.lower), m));
    }
    return out;
}

SpaceTimeField solve_constant(const KernelSpec& k, double c, TimeScheme scheme, int steps) {
    const Grid g(1, 4.0, 65);
    const double dt = 0.05;
    return solve(SolveSpec{k, g, std::vector<double>(g.size(), c), ExteriorData::constant(c), 0.0, steps * dt, dt, scheme});
}

}  // namespace

TEST_CASE("constant states are preserved by every family and scheme") {
    for (double s : {0.25, 0.5, 0.8}) {
        for (const auto& k : all_families(s)) {
            for (auto scheme : {TimeScheme::implicit_euler, TimeScheme::crank_nicolson}) {
                const auto f = solve_constant(k, 1.75, scheme, 100);
                CHECK(f.levels() == 101);
                double dev = 0.0;
                for (double v : f.values()) {
                    dev = std::max(dev, std::abs(v - 1.75));
                }
                CAPTURE(s);
                CAPTURE(k.modulation_name());
                CHECK(dev <= 1e-12);
            }
        }
    }
}

TEST_CASE("implicit Euler obeys the discrete maximum principle") {
    const auto k = KernelSpec::fractional_laplacian(1, 0.4);
    const Discretization disc{.half_width = 6.0, .nodes = 128, .dt = 1.0 / 16, .t_start = 0.0, .t_end = 2.0};
    InitialSpec init;
    ExteriorSpec ext;
    for (std::uint64_t member = 0; member < 6; ++member) {
        const auto m = make_member(init, ext, splitmix64(member));
        const Grid g(1, disc.half_width, disc.nodes);
        std::vector<double> u0(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            u0[i] = m.initial(g.node(i));
        }
        const double hi = std::max(*std::max_element(u0.begin(), u0.end()), ext.amplitude_max);
        const auto f = solve(SolveSpec{k, g, u0, m.exterior, disc.t_start, disc.t_end, disc.dt});
        const auto [lo_it, hi_it] = std::minmax_element(f.values().begin(), f.values().end());
        CHECK(*lo_it >= 0.0);
        CHECK(*hi_it <= hi);
    }
}

TEST_CASE("Poisson-kernel evolution converges to the closed form") {
    const auto k = KernelSpec::fractional_laplacian(1, 0.5);
    double previous = 1e300;
    for (auto [N, dt] : {std::pair{128, 1.0 / 16}, {256, 1.0 / 32}, {512, 1.0 / 64}}) {
        const Grid g(1, 8.0, N);
        std::vector<double> u0(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            u0[i] = oracle::fractional_heat_kernel(1, 0.5, g.node(i), 1.0);
        }
        const auto f = solve(SolveSpec{k, g, u0, ExteriorData::poisson_kernel(1.0), 0.0, 1.0, dt});
        const auto last = f.level(f.levels() - 1);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            err = std::max(err, std::abs(last[i] - oracle::fractional_heat_kernel(1, 0.5, g.node(i), 2.0)));
        }
        const double rel = err * 2.0 * M_PI;
        CAPTURE(N);
        CHECK(rel < 0.02);
        CHECK(rel < previous);
        previous = rel;
    }
}

TEST_CASE("Crank-Nicolson is more accurate in time than implicit Euler") {
    const auto k = KernelSpec::fractional_laplacian(1, 0.5);
    const Grid g(1, 8.0, 256);
    std::vector<double> u0(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        u0[i] = oracle::fractional_heat_kernel(1, 0.5, g.node(i), 1.0);
    }
    auto error = [&](TimeScheme scheme, double dt) {
        const auto f = solve(SolveSpec{k, g, u0, ExteriorData::poisson_kernel(1.0), 0.0, 1.0, dt, scheme});
        const auto ref = solve(SolveSpec{k, g, u0, ExteriorData::poisson_kernel(1.0), 0.0, 1.0, 1.0 / 1024, scheme});
        const auto a = f.level(f.levels() - 1);
        const auto b = ref.level(ref.levels() - 1);
        double e = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            e = std::max(e, std::abs(a[i] - b[i]));
        }
        return e;
    };
    const double ie = error(TimeScheme::implicit_euler, 1.0 / 8);
    const double cn = error(TimeScheme::crank_nicolson, 1.0 / 8);
    CHECK(cn < 0.2 * ie);
    // First order for implicit Euler: halving dt roughly halves the error.
    const double ie2 = error(TimeScheme::implicit_euler, 1.0 / 16);
    CHECK(ie / ie2 == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("solver preconditions") {
    const auto k = KernelSpec::fractional_laplacian(1, 0.5);
    const Grid g(1, 2.0, 17);
    const std::vector<double> u0(g.size(), 0.0);
    CHECK_THROWS_AS(solve(SolveSpec{k, g, u0, ExteriorData::zero(), 0.0, 1.0, 0.0}), PreconditionError);
    CHECK_THROWS_AS(solve(SolveSpec{k, g, u0, ExteriorData::zero(), 1.0, 0.5, 0.1}), PreconditionError);
    CHECK_THROWS_AS(solve(SolveSpec{k, g, std::vector<double>(3, 0.0), ExteriorData::zero(), 0.0, 1.0, 0.1}),
                    PreconditionError);
    CHECK_THROWS_AS(solve(SolveSpec{k, g, u0, ExteriorData::power_decay(1.0, 1.5), 0.0, 1.0, 0.1}), DivergenceError);
    const auto k2 = KernelSpec::fractional_laplacian(2, 0.5);
    const Grid g2(2, 1.0, 9);
    CHECK_THROWS_AS(solve(SolveSpec{k2, g2, std::vector<double>(g2.size(), 0.0), ExteriorData::zero(), 0.0, 1.0, 0.1}),
                    UnsupportedError);
    // The final step is shortened so the last level lands on t_end.
    const auto f = solve(SolveSpec{k, g, u0, ExteriorData::zero(), 0.0, 1.0, 0.3});
    CHECK(f.t_last() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("weak form of discrete solutions, sub- and supersolutions") {
    const auto k = KernelSpec::fractional_laplacian(1, 0.5);
    const Grid g(1, 6.0, 128);
    const auto m = make_member(InitialSpec{.kind = "mixed_bumps"}, ExteriorSpec{}, 17);
    std::vector<double> u0(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        u0[i] = m.initial(g.node(i));
    }
    const auto f = solve(SolveSpec{k, g, u0, m.exterior, 0.0, 2.0, 1.0 / 32});
    const auto battery = bump_battery(g, f.t_first(), f.t_last(), 5);
    REQUIRE(battery.size() == 20);

    SUBCASE("the implicit Euler solution has rounding-level residuals") {
        const WeakForm form(f, k, m.exterior);
        for (const auto& test : battery) {
            CHECK(std::abs(form.residual(test).relative()) < 1e-10);
        }
        const auto c = classify(form, battery, 1e-8);
        CHECK(c.subsolution);
        CHECK(c.supersolution);
    }
    SUBCASE("the positive part is a subsolution") {
        const auto fp = positive_part(f);
        const auto c = classify(WeakForm(fp, k, m.exterior.positive_part()), battery, 1e-10);
        CHECK(c.subsolution);
    }
    SUBCASE("adding c t gives a strict supersolution") {
        const double c = 0.5;
        auto times = f.times();
        std::vector<double> values(f.values().begin(), f.values().end());
        for (std::size_t l = 0; l < f.levels(); ++l) {
            for (std::size_t i = 0; i < g.size(); ++i) {
                values[l * g.size() + i] += c * times[l];
            }
        }
        const SpaceTimeField v(g, std::vector<double>(times.begin(), times.end()), values, f.order());
        ExteriorData ext = m.exterior;
        ext.value = [e = m.exterior, c](const Point& y, double t) { return e(y, t) + c * t; };
        ext.far_terms.push_back({0.0, [c](double t) { return c * t; }});
        const auto cls = classify(WeakForm(v, k, ext), battery, 1e-10);
        CHECK(cls.supersolution);
        CHECK_FALSE(cls.subsolution);
    }
}

TEST_CASE("weak residual rejects test functions leaving the domain") {
    const auto k = KernelSpec::fractional_laplacian(1, 0.5);
    const Grid g(1, 2.0, 33);
    const auto f = solve(SolveSpec{k, g, std::vector<double>(g.size(), 1.0), ExteriorData::constant(1.0), 0.0, 1.0, 0.125});
    CHECK_THROWS_AS(weak_residual(f, k, ExteriorData::constant(1.0), bump_test(Point{1.8, 0.0}, 0.5, 0.2, 0.8)),
                    PreconditionError);
    CHECK(std::abs(weak_residual(f, k, ExteriorData::constant(1.0), bump_test(Point{0.0, 0.0}, 0.5, 0.2, 0.8))) < 1e-12);
}

TEST_CASE("scheme error estimate") {
    const auto k = KernelSpec::fractional_laplacian(1, 0.5);
    const Grid g(1, 2.0, 17);
    const auto f = solve(SolveSpec{k, g, std::vector<double>(g.size(), -3.0), ExteriorData::constant(-3.0), 0.0, 1.0, 0.125});
    CHECK(scheme_error_estimate(f) == doctest::Approx((g.spacing() + 0.125) * 3.0));
}
