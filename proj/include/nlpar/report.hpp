#pragma once

#include "nlpar/kernels.hpp"

#include <limits>
#include <string>

namespace nlpar {

/// One inequality check: lhs <= C (rhs_inf + rhs_mean + rhs_tail).
/// rhs_inf holds the pointwise term of the right side (an infimum for the
/// Harnack-type checks, a supremum for the tail comparison), rhs_mean an
/// average and rhs_tail the tail term with its prefactor applied.
/// Parameters that do not apply are NaN.
struct VerificationReport {
    static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    std::string theorem_id;
    Point x0{0.0, 0.0};
    double r = nan;
    double R = nan;
    double t0 = nan;
    double alpha = nan;
    double theta = nan;
    double delta = nan;
    double epsilon = nan;

    double lhs = 0.0;
    double rhs_inf = 0.0;
    double rhs_mean = 0.0;
    double rhs_tail = 0.0;
    double C_emp = nan;
    double refinement_ratio = nan;
    /// Both sides vanish (or the left side is nonpositive): the inequality holds trivially.
    bool degenerate = false;
    /// Zero right side with a positive left side.
    bool anomaly = false;
    bool pass = false;
    std::string note;

    double rhs_sum() const { return rhs_inf + rhs_mean + rhs_tail; }
};

/// Sets C_emp = lhs / rhs_sum with a guarded zero denominator, and `pass`.
void finalize_ratio(VerificationReport& report);

/// Stores C_emp(refined) / C_emp(base) in `base` (1 when both vanish) and
/// requires both passes and a stable ratio.
void attach_refinement(VerificationReport& base, const VerificationReport& refined);

/// True when the ratio is finite and within [1/2, 2].
bool refinement_stable(double ratio);

}  // namespace nlpar
