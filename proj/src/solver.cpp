#include "nlpar/solver.hpp"

#include "nlpar/error.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace nlpar {

std::string to_string(TimeScheme scheme) {
    return scheme == TimeScheme::implicit_euler ? "implicit_euler" : "crank_nicolson";
}

TimeScheme time_scheme_from_string(const std::string& name) {
    if (name == "implicit_euler") {
        return TimeScheme::implicit_euler;
    }
    if (name == "crank_nicolson") {
        return TimeScheme::crank_nicolson;
    }
    throw ConfigError("unknown time scheme '" + name + "' (expected implicit_euler or crank_nicolson)");
}

namespace {

Eigen::LLT<Eigen::MatrixXd> factorize(const Eigen::MatrixXd& matrix, double t) {
    Eigen::LLT<Eigen::MatrixXd> llt(matrix);
    if (llt.info() != Eigen::Success) {
        std::ostringstream os;
        os << "Cholesky factorization failed at t = " << t;
        throw LinearSolveError(os.str());
    }
    return llt;
}

}  // namespace

SpaceTimeField solve(const SolveSpec& spec) {
    const Grid& grid = spec.grid;
    if (spec.initial.size() != grid.size()) {
        throw PreconditionError("initial data size does not match the grid");
    }
    if (!(spec.dt > 0.0) || !(spec.t_end > spec.t_start)) {
        throw PreconditionError("solve needs dt > 0 and t_end > t_start");
    }
    if (spec.grid.dim() != 1) {
        throw UnsupportedError("time stepping is implemented for n = 1 only");
    }
    require_convergent(spec.exterior, spec.kernel.order());
    const KernelSpec& kernel = spec.kernel;
    const ExteriorData& ext = spec.exterior;
    const std::vector<double> times = uniform_times(spec.t_start, spec.t_end, spec.dt);
    const auto n = static_cast<Eigen::Index>(grid.size());
    const bool cn = spec.scheme == TimeScheme::crank_nicolson;

    std::vector<double> values;
    values.reserve(times.size() * grid.size());
    values.insert(values.end(), spec.initial.begin(), spec.initial.end());
    Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(spec.initial.data(), n);

    // Kernel time of step m -> m+1: t_{m+1} for implicit Euler, the midpoint for Crank-Nicolson.
    auto kernel_time = [&](std::size_t m) { return cn ? 0.5 * (times[m] + times[m + 1]) : times[m + 1]; };

    ExteriorQuadrature exterior(kernel, grid, kernel_time(0), ext.breakpoints, ext.max_panel_width);
    Eigen::MatrixXd matrix;
    Eigen::LLT<Eigen::MatrixXd> llt;
    double factored_dt = -1.0;
    Eigen::VectorXd previous_load;
    if (cn) {
        previous_load = -exterior.integrate(ext, times[0]);
    }
    for (std::size_t m = 0; m + 1 < times.size(); ++m) {
        const double dt = times[m + 1] - times[m];
        const double tk = kernel_time(m);
        const bool rebuild = m == 0 || !kernel.autonomous();
        if (rebuild) {
            if (m > 0) {
                exterior.reweight(kernel, tk);
                // Both Crank-Nicolson loads must use the midpoint kernel, or constants drift.
                if (cn) {
                    previous_load = -exterior.integrate(ext, times[m]);
                }
            }
            matrix = interior_matrix(kernel, grid, tk);
            matrix.diagonal() += exterior.coupling();
        }
        // Steps from uniform_times agree to rounding; refactor only when they do not.
        if (rebuild || std::abs(dt - factored_dt) > 1e-12 * dt) {
            const double theta = cn ? 0.5 : 1.0;
            Eigen::MatrixXd system = theta * dt * matrix;
            system.diagonal().array() += 1.0;
            llt = factorize(system, tk);
            factored_dt = dt;
        }
        const Eigen::VectorXd load = -exterior.integrate(ext, times[m + 1]);
        Eigen::VectorXd rhs;
        if (cn) {
            rhs = u - 0.5 * factored_dt * (matrix * u) - 0.5 * factored_dt * (previous_load + load);
            previous_load = load;
        } else {
            rhs = u - factored_dt * load;
        }
        u = llt.solve(rhs);
        if (!u.allFinite()) {
            std::ostringstream os;
            os << "linear solve produced non-finite values at t = " << times[m + 1];
            throw LinearSolveError(os.str());
        }
        values.insert(values.end(), u.data(), u.data() + n);
    }
    return SpaceTimeField(grid, times, std::move(values), kernel.order());
}

SpaceTimeField positive_part(const SpaceTimeField& f) {
    return f.map([](double v) { return v > 0.0 ? v : 0.0; });
}

SpaceTimeField negative_part(const SpaceTimeField& f) {
    return f.map([](double v) { return v < 0.0 ? -v : 0.0; });
}

TestFunction bump_test(const Point& center, double radius, double t_lo, double t_hi) {
    if (!(radius > 0.0) || !(t_hi > t_lo)) {
        throw PreconditionError("bump test function needs radius > 0 and t_hi > t_lo");
    }
    auto bump = [](double z) { return std::abs(z) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z * z)) : 0.0; };
    TestFunction test;
    test.center = center;
    test.radius = radius;
    test.t_lo = t_lo;
    test.t_hi = t_hi;
    const double tm = 0.5 * (t_lo + t_hi);
    const double tr = 0.5 * (t_hi - t_lo);
    test.value = [=](const Point& x, double t) {
        return bump(distance(x, center) / radius) * bump((t - tm) / tr);
    };
    return test;
}

std::vector<TestFunction> bump_battery(const Grid& grid, double t_first, double t_last, std::uint64_t seed,
                                       std::size_t count) {
    if (!(t_last > t_first)) {
        throw PreconditionError("bump battery needs a nonempty time range");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double L = grid.half_width();
    const double span = t_last - t_first;
    std::vector<TestFunction> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        Point c{(unit(rng) - 0.5) * L, 0.0};
        if (grid.dim() == 2) {
            c[1] = (unit(rng) - 0.5) * L;
        }
        const double radius = L * (0.125 + 0.125 * unit(rng));
        const double a = t_first + span * 0.05 * (1.0 + unit(rng));
        const double b = t_last - span * 0.05 * (1.0 + unit(rng));
        out.push_back(bump_test(c, radius, a, b));
    }
    return out;
}

WeakForm::WeakForm(const SpaceTimeField& field, const KernelSpec& kernel, const ExteriorData& ext) : field_(field) {
    const Grid& grid = field.grid();
    require_convergent(ext, kernel.order());
    const auto times = field.times();
    flux_.resize(times.size());
    std::optional<ExteriorQuadrature> exterior;
    Eigen::MatrixXd matrix;
    for (std::size_t m = 1; m < times.size(); ++m) {
        const double t = times[m];
        if (!exterior) {
            exterior.emplace(kernel, grid, t, ext.breakpoints, ext.max_panel_width);
            matrix = interior_matrix(kernel, grid, t);
            matrix.diagonal() += exterior->coupling();
        } else if (!kernel.autonomous()) {
            exterior->reweight(kernel, t);
            matrix = interior_matrix(kernel, grid, t);
            matrix.diagonal() += exterior->coupling();
        }
        const auto level = field.level(m);
        const Eigen::Map<const Eigen::VectorXd> u(level.data(), static_cast<Eigen::Index>(level.size()));
        flux_[m] = matrix * u - exterior->integrate(ext, t);
    }
}

Residual WeakForm::residual(const TestFunction& test) const {
    const Grid& grid = field_.grid();
    const auto times = field_.times();
    const double L = grid.half_width();
    const double r = test.radius;
    const bool inside_space = std::abs(test.center[0]) + r <= L && (grid.dim() == 1 || std::abs(test.center[1]) + r <= L);
    if (!inside_space || test.t_lo < times.front() || test.t_hi > times.back()) {
        std::ostringstream os;
        os << "test function support B_" << r << "((" << test.center[0] << "," << test.center[1] << ")) x [" << test.t_lo
           << ", " << test.t_hi << "] leaves the field's domain [-" << L << ", " << L << "]^n x [" << times.front()
           << ", " << times.back() << "]";
        throw PreconditionError(os.str());
    }
    const std::size_t n = grid.size();
    const double h = grid.cell_volume();
    const auto nodes = grid.nodes();
    std::vector<double> phi_prev(n), phi_next(n);
    for (std::size_t i = 0; i < n; ++i) {
        phi_prev[i] = test.value(nodes[i], times[0]);
    }
    double value = 0.0;
    double scale = 0.0;
    for (std::size_t m = 0; m + 1 < times.size(); ++m) {
        const double dt = times[m + 1] - times[m];
        const auto u = field_.level(m);
        for (std::size_t i = 0; i < n; ++i) {
            phi_next[i] = test.value(nodes[i], times[m + 1]);
        }
        const Eigen::VectorXd& flux = flux_[m + 1];
        for (std::size_t i = 0; i < n; ++i) {
            const double time_term = -h * u[i] * (phi_next[i] - phi_prev[i]);
            const double space_term = dt * h * flux[static_cast<Eigen::Index>(i)] * phi_next[i];
            value += time_term + space_term;
            scale += std::abs(time_term) + std::abs(space_term);
        }
        std::swap(phi_prev, phi_next);
    }
    return {value, scale};
}

double weak_residual(const SpaceTimeField& f, const KernelSpec& k, const ExteriorData& ext, const TestFunction& test) {
    return WeakForm(f, k, ext).residual(test).value;
}

ResidualClassification classify(const WeakForm& form, const std::vector<TestFunction>& battery, double tol) {
    ResidualClassification c{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), true,
                             true};
    for (const auto& test : battery) {
        const double r = form.residual(test).relative();
        c.max_relative = std::max(c.max_relative, r);
        c.min_relative = std::min(c.min_relative, r);
        c.subsolution = c.subsolution && r <= tol;
        c.supersolution = c.supersolution && r >= -tol;
    }
    return c;
}

double scheme_error_estimate(const SpaceTimeField& f) {
    const auto times = f.times();
    double dt = 0.0;
    for (std::size_t m = 0; m + 1 < times.size(); ++m) {
        dt = std::max(dt, times[m + 1] - times[m]);
    }
    return (f.grid().spacing() + dt) * f.max_abs();
}

}  // namespace nlpar
