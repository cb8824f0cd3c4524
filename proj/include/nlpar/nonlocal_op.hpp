#pragma once

#include "nlpar/exterior.hpp"
#include "nlpar/geometry.hpp"
#include "nlpar/kernels.hpp"

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace nlpar {

/// Discrete operator at one time: (L_h u)_i = (matrix u)_i + exterior_load_i.
/// The matrix already contains the exterior coupling e_i = ∫_{R^n \ Ω} K(x_i, y) dy
/// on its diagonal, so the row sums of `matrix` equal `exterior_coupling`.
struct AssembledOperator {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd exterior_load;
    Eigen::VectorXd exterior_coupling;
    double time = 0.0;

    Eigen::VectorXd apply(const Eigen::VectorXd& u) const { return matrix * u + exterior_load; }
};

/// Quadrature of y -> K(x_i, y, t) over the complement of the cell-centred box
/// [-L - h/2, L + h/2]. A graded Gauss rule covers the collar up to ten times
/// the box, the rest is integrated in closed form against the far-field terms
/// of the exterior data. One instance serves every exterior datum whose
/// breakpoints were declared at construction.
class ExteriorQuadrature {
public:
    ExteriorQuadrature(const KernelSpec& kernel, const Grid& grid, double t, std::span<const double> breakpoints = {},
                       double max_panel_width = std::numeric_limits<double>::infinity());

    /// ∫_E g(y, t_data) K(x_i, y, t) dy for every node, ghost-node term included.
    Eigen::VectorXd integrate(const ExteriorData& ext, double t_data) const;
    /// The same integral for g ≡ 1.
    const Eigen::VectorXd& coupling() const noexcept { return coupling_; }
    /// Rebuilds the kernel weights at another time, keeping the nodes.
    void reweight(const KernelSpec& kernel, double t);

    double collar_radius() const noexcept { return collar_; }
    double inner_radius() const noexcept { return inner_; }

private:
    Grid grid_;
    double order_;
    double inner_;
    double collar_;
    // Collar nodes of node i live in [offset_[i], offset_[i + 1]).
    std::vector<std::size_t> offset_;
    std::vector<double> y_;
    std::vector<double> gauss_weight_;
    std::vector<double> weight_;
    // Singular-cell coefficient of the two boundary nodes, coupling to the ghost nodes.
    double ghost_left_ = 0.0;
    double ghost_right_ = 0.0;
    // κ a_far(t) ∫_{|y| > collar} |y - x_i|^{-1-2s} |y|^γ dy is evaluated lazily per γ.
    double far_factor_ = 0.0;
    Eigen::VectorXd coupling_;

    double far_integral(std::size_t i, double gamma) const;
};

/// Interior part of the operator: cell-integrated off-diagonal weights and the
/// second-difference singular-cell correction, without exterior coupling.
/// Symmetric, with zero row sums.
Eigen::MatrixXd interior_matrix(const KernelSpec& kernel, const Grid& grid, double t);

/// Singular-cell coefficient κ a(x_i, x_i, t) (h/2)^{2-2s} / ((2-2s) h^2) of node i.
double singular_cell_coefficient(const KernelSpec& kernel, const Grid& grid, std::size_t i, double t);

/// Full operator at time t with the load of `ext` evaluated at t.
/// Implemented for n = 1; two-dimensional grids raise UnsupportedError.
AssembledOperator assemble(const KernelSpec& kernel, const Grid& grid, double t, const ExteriorData& ext);

/// Operator from a prepared matrix and exterior quadrature, as used inside time stepping.
AssembledOperator assemble(const Eigen::MatrixXd& interior, const ExteriorQuadrature& exterior, double t,
                           const ExteriorData& ext, double t_data);

/// Smooth function on R^n with |f(y)| ~ A |y|^decay_exponent at infinity.
struct SmoothFunction {
    std::function<double(const Point&)> value;
    double decay_exponent = 0.0;
    /// Radii |y| where f has reduced smoothness; quadrature panels are split there.
    std::vector<double> breakpoints;
};

struct PointwiseResult {
    double value;
    double error_estimate;
};

/// P.V. ∫ (f(x) - f(y)) K(x, y, t) dy by adaptive quadrature. The ball of radius
/// δ around x is replaced by its second-order Taylor model, the shell is
/// integrated with ±z pairs, and the part beyond the far radius uses the
/// leading far-field power of f.
PointwiseResult apply_pointwise_detailed(const KernelSpec& kernel, const SmoothFunction& f, const Point& x, double t,
                                         double tol);
double apply_pointwise(const KernelSpec& kernel, const SmoothFunction& f, const Point& x, double t, double tol);

/// Φ(x) = 1 for |x| < 1, (1 + (|x|^2 - 1)^4)^{-(n+2s)/8} otherwise.
double phi(const Point& x, int dim, double order);
/// Φ_r(x) = r^{-n} Φ(x / r).
double phi_r(double r, const Point& x, int dim, double order);
SmoothFunction phi_function(double r, int dim, double order);

struct PhiRadiusReport {
    double radius;
    /// Ratios |L Φ_r(x)| / (r^{-2s} Φ_r(x)) at the sample points.
    std::vector<double> ratios;
    /// Signed values L Φ_r(x).
    std::vector<double> values;
    double c1;
};

struct PhiEigenReport {
    double c1_emp;
    bool pass;
    /// max c1 / min c1 over the three radii.
    double spread;
    /// Far-field constant: max over the three radii of max(q, 1/q), q = Φ_r(x)|x|^{n+2s}/r^{2s} at |x| = 10r.
    double c2_emp;
    std::vector<PhiRadiusReport> radii;
};

/// Samples are given in units of r. The check is run at r/2, r and 2r and
/// passes when every ratio is finite and the per-radius constants agree within 20%.
PhiEigenReport check_phi_eigenbounds(const KernelSpec& kernel, double r, std::span<const Point> sample_points,
                                     double tol, double t = 0.0);

}  // namespace nlpar
