#pragma once

#include "nlpar/exterior.hpp"
#include "nlpar/geometry.hpp"
#include "nlpar/report.hpp"

namespace nlpar {

/// α = (1 + 2^{2s}) / 2, the midpoint of the admissible interval (1, 2^{2s}).
double default_alpha(double order);

/// Harnack: sup over U⁻(x0, t0, r/2) against inf over U⁻(x0, t1, r/2) plus
/// (r/R)^{2s} Tail(u-; x0, R, t0 - r^{2s}, t1), with t1 = t0 + 2r^{2s} - α(r/2)^{2s}.
/// `negativity_tol` bounds how far below zero u may dip on B_R × (t0 - r^{2s}, t1).
VerificationReport verify_harnack(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0, double r, double R,
                                  double t0, double alpha, double negativity_tol = 0.0);

/// Weak Harnack: mean over B_r × (t0 - 2r^{2s}, t0 - r^{2s}) against inf over
/// B_r × (t0 + r^{2s}, t0 + 2r^{2s}) plus (r/R)^{2s} Tail_∞(u-; x0, R, t0 - 2r^{2s}, t0 + 2r^{2s}).
VerificationReport verify_weak_harnack(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0, double r,
                                       double R, double t0, double negativity_tol = 0.0);

/// Local boundedness of subsolutions: sup over U⁻(x0, t0, θr) = C mean_{U⁻(x0, t0, r)} u+ + δ Tail(u+; x0, r, t0 - r^{2s}, t0).
/// C_emp is the solution of that equation, clamped at zero.
VerificationReport verify_local_boundedness(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0, double r,
                                            double t0, double theta, double delta);

/// As verify_local_boundedness with the tail term δ (r/R)^{2s} Tail(u-; x0, R, t0 - r^{2s}, t0)
/// and u >= 0 required on B_R × (t0 - r^{2s}, t0).
VerificationReport verify_local_boundedness_signed(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0,
                                                   double r, double R, double t0, double theta, double delta,
                                                   double negativity_tol = 0.0);

}  // namespace nlpar
