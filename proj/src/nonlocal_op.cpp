#include "nlpar/nonlocal_op.hpp"

#include "nlpar/error.hpp"
#include "nlpar/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nlpar {

namespace {

void require_one_dimensional(const Grid& grid, const char* what) {
    if (grid.dim() != 1) {
        std::ostringstream os;
        os << what << " is implemented for n = 1 only (got n = " << grid.dim() << ")";
        throw UnsupportedError(os.str());
    }
}

// Panel boundaries of [a, b] graded towards `focus`, split at the given radii
// (both signs) and at most `max_width` wide.
std::vector<double> collar_panels(double a, double b, double focus, std::span<const double> radii, double max_width) {
    std::vector<double> breaks = quad::graded_breakpoints(a, b, focus);
    for (double r : radii) {
        for (double y : {r, -r}) {
            if (y > a && y < b) {
                breaks.push_back(y);
            }
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    if (!std::isfinite(max_width)) {
        return breaks;
    }
    std::vector<double> out{breaks.front()};
    for (std::size_t k = 1; k < breaks.size(); ++k) {
        const double width = breaks[k] - breaks[k - 1];
        const int pieces = static_cast<int>(std::ceil(width / max_width));
        for (int p = 1; p < pieces; ++p) {
            out.push_back(breaks[k - 1] + width * p / pieces);
        }
        out.push_back(breaks[k]);
    }
    return out;
}

// Exact integral of |z|^{-1-2s} over the cell of lattice offset k >= 1, divided by h^{-2s}.
double cell_weight(int k, double order) {
    const double p = 2.0 * order;
    return (std::pow(k - 0.5, -p) - std::pow(k + 0.5, -p)) / p;
}

double sphere_measure(int dim) { return dim == 1 ? 2.0 : 2.0 * std::numbers::pi; }

}  // namespace

double singular_cell_coefficient(const KernelSpec& kernel, const Grid& grid, std::size_t i, double t) {
    const double s = kernel.order();
    const double h = grid.spacing();
    const Point x = grid.node(i);
    return kernel.coefficient() * kernel.modulation_value(x, x, t) * std::pow(0.5 * h, 2.0 - 2.0 * s) /
           ((2.0 - 2.0 * s) * h * h);
}

ExteriorQuadrature::ExteriorQuadrature(const KernelSpec& kernel, const Grid& grid, double t,
                                       std::span<const double> breakpoints, double max_panel_width)
    : grid_(grid), order_(kernel.order()) {
    require_one_dimensional(grid, "exterior quadrature");
    if (kernel.dim() != 1) {
        throw PreconditionError("kernel dimension does not match the grid");
    }
    const double h = grid.spacing();
    inner_ = grid.half_width() + 0.5 * h;
    collar_ = 10.0 * grid.half_width();
    const quad::GaussRule& rule = quad::gauss_legendre(10);
    const std::size_t n = grid.size();
    offset_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.coordinate(static_cast<int>(i));
        for (int side : {-1, 1}) {
            const double a = side > 0 ? inner_ : -collar_;
            const double b = side > 0 ? collar_ : -inner_;
            const auto panels = collar_panels(a, b, x, breakpoints, max_panel_width);
            for (std::size_t p = 0; p + 1 < panels.size(); ++p) {
                const double mid = 0.5 * (panels[p] + panels[p + 1]);
                const double half = 0.5 * (panels[p + 1] - panels[p]);
                for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                    y_.push_back(mid + half * rule.nodes[q]);
                    gauss_weight_.push_back(half * rule.weights[q]);
                }
            }
        }
        offset_[i + 1] = y_.size();
    }
    weight_.resize(y_.size());
    reweight(kernel, t);
}

void ExteriorQuadrature::reweight(const KernelSpec& kernel, double t) {
    const std::size_t n = grid_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point x{grid_.coordinate(static_cast<int>(i)), 0.0};
        for (std::size_t q = offset_[i]; q < offset_[i + 1]; ++q) {
            weight_[q] = gauss_weight_[q] * kernel(x, Point{y_[q], 0.0}, t);
        }
    }
    ghost_left_ = singular_cell_coefficient(kernel, grid_, 0, t);
    ghost_right_ = singular_cell_coefficient(kernel, grid_, n - 1, t);
    far_factor_ = kernel.coefficient() * kernel.far_modulation(t);
    coupling_ = integrate(ExteriorData::constant(1.0), t);
}

double ExteriorQuadrature::far_integral(std::size_t i, double gamma) const {
    const double x = grid_.coordinate(static_cast<int>(i));
    return far_factor_ * quad::far_power_integral(collar_, x, gamma, 1.0 + 2.0 * order_);
}

Eigen::VectorXd ExteriorQuadrature::integrate(const ExteriorData& ext, double t_data) const {
    require_convergent(ext, order_);
    const std::size_t n = grid_.size();
    const double h = grid_.spacing();
    std::vector<double> amplitudes;
    for (const auto& term : ext.far_terms) {
        amplitudes.push_back(term.amplitude(t_data));
    }
    Eigen::VectorXd out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t q = offset_[i]; q < offset_[i + 1]; ++q) {
            sum += weight_[q] * ext(Point{y_[q], 0.0}, t_data);
        }
        for (std::size_t k = 0; k < ext.far_terms.size(); ++k) {
            if (amplitudes[k] != 0.0) {
                sum += amplitudes[k] * far_integral(i, ext.far_terms[k].exponent);
            }
        }
        if (i == 0) {
            sum += ghost_left_ * ext(Point{grid_.coordinate(0) - h, 0.0}, t_data);
        }
        if (i == n - 1) {
            sum += ghost_right_ * ext(Point{grid_.coordinate(static_cast<int>(n) - 1) + h, 0.0}, t_data);
        }
        out[static_cast<Eigen::Index>(i)] = sum;
    }
    return out;
}

Eigen::MatrixXd interior_matrix(const KernelSpec& kernel, const Grid& grid, double t) {
    require_one_dimensional(grid, "operator assembly");
    if (kernel.dim() != 1) {
        throw PreconditionError("kernel dimension does not match the grid");
    }
    const auto n = static_cast<Eigen::Index>(grid.size());
    const double s = kernel.order();
    const double scale = kernel.coefficient() * std::pow(grid.spacing(), -2.0 * s);
    std::vector<double> cell(static_cast<std::size_t>(n));
    for (Eigen::Index k = 1; k < n; ++k) {
        cell[static_cast<std::size_t>(k)] = cell_weight(static_cast<int>(k), s) * scale;
    }
    std::vector<double> singular(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        singular[static_cast<std::size_t>(i)] = singular_cell_coefficient(kernel, grid, static_cast<std::size_t>(i), t);
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    const bool plain = !kernel.modulation();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Point xi{grid.coordinate(static_cast<int>(i)), 0.0};
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double w = cell[static_cast<std::size_t>(j - i)];
            if (!plain) {
                w *= kernel.modulation_value(xi, Point{grid.coordinate(static_cast<int>(j)), 0.0}, t);
            }
            if (j == i + 1) {
                w += 0.5 * (singular[static_cast<std::size_t>(i)] + singular[static_cast<std::size_t>(j)]);
            }
            m(i, j) = -w;
            m(j, i) = -w;
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        double off = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) {
                off += m(i, j);
            }
        }
        m(i, i) = -off;
    }
    return m;
}

AssembledOperator assemble(const Eigen::MatrixXd& interior, const ExteriorQuadrature& exterior, double t,
                           const ExteriorData& ext, double t_data) {
    AssembledOperator op;
    op.matrix = interior;
    op.exterior_coupling = exterior.coupling();
    op.matrix.diagonal() += op.exterior_coupling;
    op.exterior_load = -exterior.integrate(ext, t_data);
    op.time = t;
    return op;
}

AssembledOperator assemble(const KernelSpec& kernel, const Grid& grid, double t, const ExteriorData& ext) {
    require_convergent(ext, kernel.order());
    require_one_dimensional(grid, "operator assembly");
    const ExteriorQuadrature exterior(kernel, grid, t, ext.breakpoints, ext.max_panel_width);
    return assemble(interior_matrix(kernel, grid, t), exterior, t, ext, t);
}

PointwiseResult apply_pointwise_detailed(const KernelSpec& kernel, const SmoothFunction& f, const Point& x, double t,
                                         double tol) {
    const int n = kernel.dim();
    const double s = kernel.order();
    const double gamma = f.decay_exponent;
    if (std::isfinite(gamma) && !(gamma < 2.0 * s)) {
        std::ostringstream os;
        os << "function grows like |y|^" << gamma << "; the operator needs growth below 2s = " << 2.0 * s;
        throw DivergenceError(os.str());
    }
    if (!(tol > 0.0)) {
        throw PreconditionError("apply_pointwise needs a positive tolerance");
    }
    const double kappa = kernel.coefficient();
    const double fx = f.value(x);

    // Angular directions: ±e_1 in one dimension, 2m evenly spaced unit vectors in two.
    std::vector<Point> dirs;
    if (n == 1) {
        dirs = {Point{1.0, 0.0}};
    } else {
        const int m = 64;
        for (int k = 0; k < m / 2; ++k) {
            const double th = 2.0 * std::numbers::pi * k / m;
            dirs.push_back(Point{std::cos(th), std::sin(th)});
        }
    }
    const double angle_weight = n == 1 ? 1.0 : 2.0 * std::numbers::pi / (2.0 * static_cast<double>(dirs.size()));
    auto shifted = [&](const Point& d, double rho, double sign) {
        return Point{x[0] + sign * rho * d[0], x[1] + sign * rho * d[1]};
    };

    // Inner ball: -(1/2) Σ_k ∂_kk f ∫_{B_δ} z_k^2 K dz.
    const double delta = 1e-3;
    double laplacian = 0.0;
    for (int k = 0; k < n; ++k) {
        Point e{0.0, 0.0};
        e[static_cast<std::size_t>(k)] = 1.0;
        laplacian += (f.value(shifted(e, delta, 1.0)) - 2.0 * fx + f.value(shifted(e, delta, -1.0))) / (delta * delta);
    }
    const double inner = -0.5 * laplacian / n * sphere_measure(n) * kappa * kernel.modulation_value(x, x, t) *
                         std::pow(delta, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);

    // Shell δ < |z| < Z.
    double reach = norm(x);
    for (double b : f.breakpoints) {
        reach = std::max(reach, b);
    }
    const double far = 1e3 * (1.0 + reach);
    auto integrand = [&](double rho) {
        double sum = 0.0;
        for (const auto& d : dirs) {
            for (double sign : {1.0, -1.0}) {
                const Point y = shifted(d, rho, sign);
                sum += (fx - f.value(y)) * kernel.modulation_value(x, y, t);
            }
        }
        return angle_weight * sum * kappa * std::pow(rho, -1.0 - 2.0 * s);
    };
    std::vector<double> breaks;
    for (double r = delta; r < far; r *= 2.0) {
        breaks.push_back(r);
    }
    breaks.push_back(far);
    const double rx = norm(x);
    for (double b : f.breakpoints) {
        for (double z : {std::abs(b - rx), b + rx}) {
            if (z > delta && z < far) {
                breaks.push_back(z);
            }
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const quad::QuadResult shell = quad::adaptive_gauss_kronrod(integrand, breaks, 0.5 * tol, 0.0, 20000);
    if (!shell.converged) {
        throw BudgetExceededError("apply_pointwise: shell quadrature did not reach the tolerance", shell.value,
                                  shell.error);
    }

    // Beyond Z: f(x) against the kernel exactly, f(y) by its leading power.
    const double a_far = kernel.far_modulation(t);
    double outer = fx * kappa * a_far * sphere_measure(n) * std::pow(far, -2.0 * s) / (2.0 * s);
    double far_error = 0.0;
    if (std::isfinite(gamma)) {
        double mean = 0.0;
        for (const auto& d : dirs) {
            mean += f.value(shifted(d, far, 1.0)) + f.value(shifted(d, far, -1.0));
        }
        mean /= 2.0 * static_cast<double>(dirs.size());
        const double amplitude = mean / std::pow(far, gamma);
        const double tail = amplitude * kappa * a_far * sphere_measure(n) * std::pow(far, gamma - 2.0 * s) /
                            (2.0 * s - gamma);
        outer -= tail;
        far_error = std::abs(tail) * (1.0 + rx) / far;
    }
    return {inner + shell.value + outer, shell.error + far_error};
}

double apply_pointwise(const KernelSpec& kernel, const SmoothFunction& f, const Point& x, double t, double tol) {
    return apply_pointwise_detailed(kernel, f, x, t, tol).value;
}

double phi(const Point& x, int dim, double order) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    if (r2 < 1.0) {
        return 1.0;
    }
    return std::pow(1.0 + std::pow(r2 - 1.0, 4), -(dim + 2.0 * order) / 8.0);
}

double phi_r(double r, const Point& x, int dim, double order) {
    if (!(r > 0.0)) {
        throw PreconditionError("phi_r needs r > 0");
    }
    return std::pow(r, -dim) * phi(Point{x[0] / r, x[1] / r}, dim, order);
}

SmoothFunction phi_function(double r, int dim, double order) {
    SmoothFunction f;
    f.value = [r, dim, order](const Point& x) { return phi_r(r, x, dim, order); };
    f.decay_exponent = -(dim + 2.0 * order);
    f.breakpoints = {r};
    return f;
}

PhiEigenReport check_phi_eigenbounds(const KernelSpec& kernel, double r, std::span<const Point> sample_points,
                                     double tol, double t) {
    if (!(r > 0.0)) {
        throw PreconditionError("check_phi_eigenbounds needs r > 0");
    }
    if (sample_points.empty()) {
        throw PreconditionError("check_phi_eigenbounds needs at least one sample point");
    }
    const int n = kernel.dim();
    const double s = kernel.order();
    PhiEigenReport report{};
    bool finite = true;
    double c1_min = std::numeric_limits<double>::infinity();
    double c1_max = 0.0;
    for (double rho : {0.5 * r, r, 2.0 * r}) {
        PhiRadiusReport rr{rho, {}, {}, 0.0};
        const SmoothFunction f = phi_function(rho, n, s);
        const double scale = std::pow(rho, -n - 2.0 * s);
        for (const auto& p : sample_points) {
            const Point x{p[0] * rho, p[1] * rho};
            const double value = apply_pointwise(kernel, f, x, t, tol * scale);
            const double ratio = std::abs(value) / (std::pow(rho, -2.0 * s) * phi_r(rho, x, n, s));
            rr.values.push_back(value);
            rr.ratios.push_back(ratio);
            const double c = std::max(ratio, 1.0 / ratio);
            finite = finite && std::isfinite(c);
            rr.c1 = std::max(rr.c1, c);
        }
        c1_min = std::min(c1_min, rr.c1);
        c1_max = std::max(c1_max, rr.c1);
        const Point xf{10.0 * rho, 0.0};
        const double q = phi_r(rho, xf, n, s) * std::pow(norm(xf), n + 2.0 * s) / std::pow(rho, 2.0 * s);
        report.c2_emp = std::max(report.c2_emp, std::max(q, 1.0 / q));
        report.radii.push_back(std::move(rr));
    }
    report.c1_emp = c1_max;
    report.spread = c1_max / c1_min;
    report.pass = finite && std::isfinite(report.spread) && report.spread <= 1.2;
    return report;
}

}  // namespace nlpar
