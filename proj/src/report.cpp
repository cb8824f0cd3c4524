#include "nlpar/report.hpp"

#include <cmath>

namespace nlpar {

namespace {

// Relative size below which a side counts as zero.
constexpr double kZero = 1e-14;

}  // namespace

void finalize_ratio(VerificationReport& report) {
    const double den = report.rhs_sum();
    const double scale = std::max({std::abs(report.lhs), std::abs(den), 1e-300});
    if (report.lhs <= kZero * scale && den <= kZero * scale) {
        report.degenerate = true;
        report.C_emp = 0.0;
    } else if (den <= kZero * scale) {
        report.anomaly = true;
        report.C_emp = std::numeric_limits<double>::infinity();
    } else {
        report.C_emp = report.lhs / den;
    }
    report.pass = std::isfinite(report.C_emp) && !report.anomaly;
}

bool refinement_stable(double ratio) { return std::isfinite(ratio) && ratio >= 0.5 && ratio <= 2.0; }

void attach_refinement(VerificationReport& base, const VerificationReport& refined) {
    const double a = base.C_emp;
    const double b = refined.C_emp;
    double& ratio = base.refinement_ratio;
    if (!std::isfinite(a) || !std::isfinite(b)) {
        ratio = std::numeric_limits<double>::quiet_NaN();
    } else if (a == 0.0 && b == 0.0) {
        ratio = 1.0;
    } else if (a == 0.0) {
        ratio = std::numeric_limits<double>::infinity();
    } else {
        ratio = b / a;
    }
    base.pass = base.pass && refined.pass && refinement_stable(ratio);
}

}  // namespace nlpar
