#pragma once

#include "nlpar/geometry.hpp"
#include "nlpar/kernels.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace nlpar::oracle {

struct OracleValue {
    double value;
    double error_estimate;
};

/// Heat kernel of u_t + (-Δ)^s u = 0 in R^n, n ∈ {1, 2}. For s = 1/2 the
/// Cauchy-Poisson closed form; otherwise Fourier inversion of exp(-t|ξ|^{2s})
/// with an error estimate from a doubling test.
OracleValue fractional_heat_kernel_detailed(int dim, double order, const Point& x, double t);
double fractional_heat_kernel(int dim, double order, const Point& x, double t);

/// One-dimensional Poisson kernel field p(x, t + offset) sampled on a grid.
SpaceTimeField poisson_field(const Grid& grid, std::vector<double> times, double offset);

struct SymbolRow {
    double frequency;
    double eigenvalue;
    double symbol;
};

/// Rayleigh quotients of the assembled operator on cos(ξ x) over the central
/// half of the grid, with the plane wave continued as exterior data.
std::vector<SymbolRow> symbol_eigencheck(const KernelSpec& kernel, const Grid& grid,
                                         const std::vector<double>& frequencies);

/// Interval (a, b), possibly unbounded, with the integrand's singular points.
struct Region {
    double a;
    double b;
    std::vector<double> singular_points;
};

/// Complement of B_r(c) on the real line.
std::vector<Region> outside_ball(double c, double r);

/// Independent adaptive quadrature (double-exponential rules) over a union of
/// regions. Singular points are placed at panel end points. Throws
/// BudgetExceededError with the best estimate when tol cannot be reached.
OracleValue reference_quadrature(const std::function<double(double)>& f, const std::vector<Region>& regions,
                                 double tol);

}  // namespace nlpar::oracle
