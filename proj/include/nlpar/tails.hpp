#pragma once

#include "nlpar/exterior.hpp"
#include "nlpar/geometry.hpp"
#include "nlpar/report.hpp"

#include <string>
#include <vector>

namespace nlpar {

enum class TailTarget { positive_part, negative_part, absolute_value };

std::string to_string(TailTarget target);

struct TailQuery {
    Point x0{0.0, 0.0};
    double r = 1.0;
    double t1 = 0.0;
    double t2 = 1.0;
    TailTarget target = TailTarget::absolute_value;
};

/// Spatial tail integrals ∫_{R^n \ B_r(x0)} v(x, t) |x - x0|^{-n-2s} dx of one
/// field at each of its time levels, v being the chosen part of u. Inside the
/// cell-centred box the nodal values are integrated against the exact cell
/// weights; outside, the exterior data is integrated on a graded collar and in
/// closed form beyond it. One-dimensional fields only.
class TailIntegrator {
public:
    TailIntegrator(const SpaceTimeField& field, const ExteriorData& ext, const Point& x0, double r, TailTarget target);

    /// Unscaled spatial integral at time level m.
    double spatial(std::size_t level) const;
    /// Estimated quadrature error of the exterior part at the first level.
    double error_estimate() const noexcept { return error_; }
    const SpaceTimeField& field() const noexcept { return field_; }
    double radius() const noexcept { return r_; }

private:
    const SpaceTimeField& field_;
    ExteriorData ext_;
    Point x0_;
    double r_;
    TailTarget target_;
    std::vector<double> cell_weight_;
    double inner_ = 0.0;
    double collar_ = 0.0;
    double error_ = 0.0;

    double exterior(double t, int points) const;
};

struct TailValue {
    double value;
    double error_estimate;
};

/// r^{2s} / (t2 - t1) ∫_{t1}^{t2} ∫_{R^n \ B_r} v / |x - x0|^{n+2s} dx dt, trapezoid rule over stored levels.
TailValue tail_detailed(const SpaceTimeField& f, const ExteriorData& ext, const TailQuery& q);
double tail(const SpaceTimeField& f, const ExteriorData& ext, const TailQuery& q);
/// r^{2s} times the largest spatial integral over stored levels in [t1, t2].
double tail_sup(const SpaceTimeField& f, const ExteriorData& ext, const TailQuery& q);

/// Unscaled spatial integral at one stored level, for additivity checks.
double spatial_tail_integral(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0, double r,
                             std::size_t level, TailTarget target);

/// Tail_∞(u+; r, t1, t2) against ε^{-1} Tail(u+; r, t1 - εr^{2s}, t2) + ε^{-1} mean of u+,
/// t2 = t1 + r^{2s}. u must be nonnegative on B_r × (t1, t2) up to `negativity_tol`.
VerificationReport check_supTail_by_Tail(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0, double r,
                                         double t1, double epsilon, double negativity_tol = 0.0);
/// The same inequality for u-, evaluated as check_supTail_by_Tail on -u.
VerificationReport check_supTail_by_Tail_minus(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0,
                                               double r, double t1, double epsilon);
/// Tail(u+; r, t1, t2) against sup_{B_r × (t1, t2)} u + (r/R)^{2s} Tail(u-; R, t1, t2).
/// u must be nonnegative on B_R × (t1, t2) up to `negativity_tol`.
VerificationReport check_tail_plus_by_minus(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0, double r,
                                            double R, double t1, double negativity_tol = 0.0);

}  // namespace nlpar
