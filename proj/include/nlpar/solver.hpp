#pragma once

#include "nlpar/exterior.hpp"
#include "nlpar/geometry.hpp"
#include "nlpar/kernels.hpp"
#include "nlpar/nonlocal_op.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nlpar {

enum class TimeScheme { implicit_euler, crank_nicolson };

std::string to_string(TimeScheme scheme);
TimeScheme time_scheme_from_string(const std::string& name);

struct SolveSpec {
    KernelSpec kernel;
    Grid grid;
    std::vector<double> initial;
    ExteriorData exterior;
    double t_start;
    double t_end;
    double dt;
    TimeScheme scheme = TimeScheme::implicit_euler;
};

/// Time-steps u_t + L u = 0 on the grid with u = g outside. Returns every
/// level including t_start. The step is shortened slightly if needed so the
/// last level is exactly t_end.
SpaceTimeField solve(const SolveSpec& spec);

/// Nodewise max(u, 0).
SpaceTimeField positive_part(const SpaceTimeField& f);
/// Nodewise max(-u, 0).
SpaceTimeField negative_part(const SpaceTimeField& f);

/// Nonnegative test function φ(x, t) supported in the box B_radius(center) × [t_lo, t_hi].
struct TestFunction {
    std::function<double(const Point&, double)> value;
    Point center;
    double radius;
    double t_lo;
    double t_hi;
};

/// Product of smooth bumps exp(1 - 1/(1 - z^2)) in space and time.
TestFunction bump_test(const Point& center, double radius, double t_lo, double t_hi);

/// `count` seeded bumps with centres in the middle half of the grid and time
/// supports strictly inside (t_first, t_last).
std::vector<TestFunction> bump_battery(const Grid& grid, double t_first, double t_last, std::uint64_t seed,
                                       std::size_t count = 20);

struct Residual {
    double value;
    /// Sum of the absolute values of all terms; value / scale is the relative residual.
    double scale;
    double relative() const { return scale > 0.0 ? value / scale : 0.0; }
};

/// Discrete weak form of a field, matching implicit Euler:
///   R(φ) = -Σ_m h Σ_i u^m_i (φ^{m+1}_i - φ^m_i) + Σ_m dt_m h Σ_i (L_h u^{m+1})_i φ^{m+1}_i.
/// The fluxes L_h u^m are computed once and reused for every test function.
/// R <= 0 for all nonnegative φ marks a discrete subsolution, R >= 0 a supersolution.
class WeakForm {
public:
    WeakForm(const SpaceTimeField& field, const KernelSpec& kernel, const ExteriorData& ext);

    Residual residual(const TestFunction& test) const;
    const SpaceTimeField& field() const noexcept { return field_; }

private:
    SpaceTimeField field_;
    std::vector<Eigen::VectorXd> flux_;
};

double weak_residual(const SpaceTimeField& f, const KernelSpec& k, const ExteriorData& ext, const TestFunction& test);

struct ResidualClassification {
    double max_relative;
    double min_relative;
    bool subsolution;
    bool supersolution;
};

/// Relative residuals over a test battery, classified with tolerance `tol`.
ResidualClassification classify(const WeakForm& form, const std::vector<TestFunction>& battery, double tol);

/// Scheme error estimate (h + dt) max|u| used for residual and positivity tolerances.
double scheme_error_estimate(const SpaceTimeField& f);

}  // namespace nlpar
