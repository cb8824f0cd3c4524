#include "nlpar/oracles.hpp"

#include "nlpar/error.hpp"
#include "nlpar/exterior.hpp"
#include "nlpar/nonlocal_op.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nlpar::oracle {

namespace {

// ∫_0^cut g(ξ) dξ on panels no wider than `width`. The first panel carries the
// ξ^{2s} cusp at the origin and gets a tanh-sinh rule; the others are smooth
// and take a fixed Gauss rule (20 or 30 points, selecting the resolution).
template <typename G>
double panel_integral(G&& g, double cut, double width, bool fine) {
    using namespace boost::math::quadrature;
    const int panels = std::max(1, static_cast<int>(std::ceil(cut / width)));
    const double w = cut / panels;
    tanh_sinh<double> origin;
    double sum = origin.integrate(g, 0.0, w, fine ? 1e-15 : 1e-10);
    for (int p = 1; p < panels; ++p) {
        const double a = w * p;
        const double b = w * (p + 1);
        sum += fine ? gauss<double, 30>::integrate(g, a, b) : gauss<double, 20>::integrate(g, a, b);
    }
    return sum;
}

double fourier_inversion(int dim, double order, double rho, double t, double cut_factor, bool fine) {
    // exp(-t ξ^{2s}) < e^{-40} beyond the cut.
    const double cut = cut_factor * std::pow(40.0 / t, 1.0 / (2.0 * order));
    const double width = rho > 0.0 ? std::min(cut / 16.0, std::numbers::pi / rho) : cut / 16.0;
    if (dim == 1) {
        auto g = [&](double xi) { return std::cos(xi * rho) * std::exp(-t * std::pow(xi, 2.0 * order)); };
        return panel_integral(g, cut, width, fine) / std::numbers::pi;
    }
    auto g = [&](double xi) {
        return boost::math::cyl_bessel_j(0, xi * rho) * xi * std::exp(-t * std::pow(xi, 2.0 * order));
    };
    return panel_integral(g, cut, width, fine) / (2.0 * std::numbers::pi);
}

}  // namespace

OracleValue fractional_heat_kernel_detailed(int dim, double order, const Point& x, double t) {
    if (!(t > 0.0)) {
        throw PreconditionError("heat kernel needs t > 0");
    }
    if (dim != 1 && dim != 2) {
        throw PreconditionError("heat kernel is available for n = 1 and n = 2");
    }
    if (!(order > 0.0 && order < 1.0)) {
        throw PreconditionError("heat kernel needs s in (0, 1)");
    }
    const double rho = norm(x);
    if (order == 0.5) {
        if (dim == 1) {
            return {t / (std::numbers::pi * (t * t + rho * rho)), 0.0};
        }
        return {t / (2.0 * std::numbers::pi * std::pow(t * t + rho * rho, 1.5)), 0.0};
    }
    const double coarse = fourier_inversion(dim, order, rho, t, 1.0, false);
    const double fine = fourier_inversion(dim, order, rho, t, 2.0, true);
    return {fine, std::abs(fine - coarse)};
}

double fractional_heat_kernel(int dim, double order, const Point& x, double t) {
    return fractional_heat_kernel_detailed(dim, order, x, t).value;
}

SpaceTimeField poisson_field(const Grid& grid, std::vector<double> times, double offset) {
    const int dim = grid.dim();
    return sample_field(grid, std::move(times), 0.5, [dim, offset](const Point& x, double t) {
        return fractional_heat_kernel(dim, 0.5, x, t + offset);
    });
}

std::vector<SymbolRow> symbol_eigencheck(const KernelSpec& kernel, const Grid& grid,
                                         const std::vector<double>& frequencies) {
    if (!kernel.translation_invariant()) {
        throw UnsupportedError("symbol_eigencheck needs a translation-invariant kernel, got family " +
                               to_string(kernel.family()));
    }
    std::vector<SymbolRow> rows;
    const std::size_t n = grid.size();
    for (double xi : frequencies) {
        const AssembledOperator op = assemble(kernel, grid, 0.0, ExteriorData::plane_wave(xi));
        Eigen::VectorXd u(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            u[static_cast<Eigen::Index>(i)] = std::cos(xi * grid.coordinate(static_cast<int>(i)));
        }
        const Eigen::VectorXd lu = op.apply(u);
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = n / 4; i < 3 * n / 4; ++i) {
            num += lu[static_cast<Eigen::Index>(i)] * u[static_cast<Eigen::Index>(i)];
            den += u[static_cast<Eigen::Index>(i)] * u[static_cast<Eigen::Index>(i)];
        }
        rows.push_back({xi, num / den, std::pow(std::abs(xi), 2.0 * kernel.order())});
    }
    return rows;
}

std::vector<Region> outside_ball(double c, double r) {
    const double inf = std::numeric_limits<double>::infinity();
    return {Region{-inf, c - r, {c}}, Region{c + r, inf, {c}}};
}

OracleValue reference_quadrature(const std::function<double(double)>& f, const std::vector<Region>& regions,
                                 double tol) {
    using namespace boost::math::quadrature;
    double value = 0.0;
    double error = 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    for (const Region& region : regions) {
        if (!(region.b > region.a)) {
            continue;
        }
        std::vector<double> cuts{region.a};
        for (double p : region.singular_points) {
            if (p > region.a && p < region.b) {
                cuts.push_back(p);
            }
        }
        cuts.push_back(region.b);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double a = cuts[k];
            const double b = cuts[k + 1];
            double piece = 0.0;
            double err = 0.0;
            double l1 = 0.0;
            const double piece_tol = std::sqrt(std::numeric_limits<double>::epsilon());
            if (std::isfinite(a) && std::isfinite(b)) {
                tanh_sinh<double> rule(15);
                piece = rule.integrate(f, a, b, piece_tol, &err, &l1);
            } else if (std::isfinite(a) && b == inf) {
                exp_sinh<double> rule(12);
                piece = rule.integrate(f, a, b, piece_tol, &err, &l1);
            } else if (a == -inf && std::isfinite(b)) {
                exp_sinh<double> rule(12);
                piece = rule.integrate([&](double y) { return f(-y); }, -b, inf, piece_tol, &err, &l1);
            } else {
                sinh_sinh<double> rule(12);
                piece = rule.integrate(f, piece_tol, &err, &l1);
            }
            value += piece;
            error += err;
        }
    }
    if (!(error <= tol) || !std::isfinite(value)) {
        std::ostringstream os;
        os << "reference quadrature reached error " << error << " above the tolerance " << tol;
        throw BudgetExceededError(os.str(), value, error);
    }
    return {value, error};
}

}  // namespace nlpar::oracle
