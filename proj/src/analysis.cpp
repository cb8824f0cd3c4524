#include "nlpar/analysis.hpp"

#include "nlpar/error.hpp"
#include "nlpar/tails.hpp"

#include <cmath>
#include <sstream>

namespace nlpar {

namespace {

void require_radii(double r, double R) {
    if (!(r > 0.0) || !(r < 0.5 * R)) {
        std::ostringstream os;
        os << "need 0 < r < R/2 (got r = " << r << ", R = " << R << ")";
        throw PreconditionError(os.str());
    }
}

void require_unit(double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) {
        std::ostringstream os;
        os << name << " must lie in (0, 1), got " << v;
        throw PreconditionError(os.str());
    }
}

// Every space-time set used by a report must lie inside the solved range.
void require_inside(const SpaceTimeField& f, const Point& x0, double radius, double a, double b) {
    const double slack = 1e-9 * std::max(1.0, std::abs(f.t_last()));
    const double L = f.grid().half_width();
    if (a < f.t_first() - slack || b > f.t_last() + slack) {
        std::ostringstream os;
        os << "time interval (" << a << ", " << b << ") leaves the field's range [" << f.t_first() << ", "
           << f.t_last() << "]";
        throw GeometryError(os.str());
    }
    if (std::abs(x0[0]) + radius > L || std::abs(x0[1]) + radius > L) {
        std::ostringstream os;
        os << "ball B_" << radius << " around (" << x0[0] << "," << x0[1] << ") leaves the grid [-" << L << ", " << L
           << "]^n";
        throw GeometryError(os.str());
    }
}

void require_nonnegative(const SpaceTimeField& f, const Point& x0, double R, double a, double b, double tol) {
    const Extrema e = region_extrema(f, x0, R, a, b);
    if (e.inf < -tol) {
        std::ostringstream os;
        os << "positivity hypothesis fails: inf of u over B_" << R << " x (" << a << ", " << b << "] is " << e.inf
           << ", below the tolerance " << -tol;
        throw PreconditionError(os.str());
    }
}

void finalize_boundedness(VerificationReport& rep) {
    const double scale = std::max({std::abs(rep.lhs), rep.rhs_mean, rep.rhs_tail, 1e-300});
    if (rep.lhs <= 1e-14 * scale) {
        rep.degenerate = true;
        rep.C_emp = 0.0;
    } else if (rep.rhs_mean <= 1e-14 * scale) {
        if (rep.lhs <= rep.rhs_tail) {
            rep.C_emp = 0.0;
        } else {
            rep.anomaly = true;
            rep.C_emp = std::numeric_limits<double>::infinity();
        }
    } else {
        // A difference at rounding level of its terms is an exact zero (u = 1, δ = 1/2).
        const double excess = rep.lhs - rep.rhs_tail;
        rep.C_emp = excess <= 1e-12 * std::max(rep.lhs, rep.rhs_tail) ? 0.0 : excess / rep.rhs_mean;
    }
    rep.pass = std::isfinite(rep.C_emp) && !rep.anomaly;
}

}  // namespace

double default_alpha(double order) { return 0.5 * (1.0 + std::pow(2.0, 2.0 * order)); }

VerificationReport verify_harnack(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0, double r, double R,
                                  double t0, double alpha, double negativity_tol) {
    const double s = f.order();
    require_radii(r, R);
    if (!(alpha > 1.0 && alpha < std::pow(2.0, 2.0 * s))) {
        std::ostringstream os;
        os << "α must lie in (1, 2^{2s}) = (1, " << std::pow(2.0, 2.0 * s) << "), got " << alpha;
        throw PreconditionError(os.str());
    }
    const double span = std::pow(r, 2.0 * s);
    const double t1 = t0 + 2.0 * span - alpha * std::pow(0.5 * r, 2.0 * s);
    require_inside(f, x0, R, t0 - span, t1);
    require_nonnegative(f, x0, R, t0 - span, t1, negativity_tol);

    VerificationReport rep;
    rep.theorem_id = "harnack";
    rep.x0 = x0;
    rep.r = r;
    rep.R = R;
    rep.t0 = t0;
    rep.alpha = alpha;
    rep.lhs = field_extrema(f, cylinder(x0, t0, 0.5 * r, s, Orientation::backward)).sup;
    rep.rhs_inf = field_extrema(f, cylinder(x0, t1, 0.5 * r, s, Orientation::backward)).inf;
    rep.rhs_tail = std::pow(r / R, 2.0 * s) * tail(f, ext, TailQuery{x0, R, t0 - span, t1, TailTarget::negative_part});
    finalize_ratio(rep);
    return rep;
}

VerificationReport verify_weak_harnack(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0, double r,
                                       double R, double t0, double negativity_tol) {
    const double s = f.order();
    require_radii(r, R);
    const double span = std::pow(r, 2.0 * s);
    require_inside(f, x0, R, t0 - 2.0 * span, t0 + 2.0 * span);
    require_nonnegative(f, x0, R, t0 - 2.0 * span, t0 + 2.0 * span, negativity_tol);

    VerificationReport rep;
    rep.theorem_id = "weak_harnack";
    rep.x0 = x0;
    rep.r = r;
    rep.R = R;
    rep.t0 = t0;
    rep.lhs = region_extrema(f, x0, r, t0 - 2.0 * span, t0 - span).mean;
    rep.rhs_inf = region_extrema(f, x0, r, t0 + span, t0 + 2.0 * span).inf;
    rep.rhs_tail = std::pow(r / R, 2.0 * s) *
                   tail_sup(f, ext, TailQuery{x0, R, t0 - 2.0 * span, t0 + 2.0 * span, TailTarget::negative_part});
    finalize_ratio(rep);
    return rep;
}

VerificationReport verify_local_boundedness(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0, double r,
                                            double t0, double theta, double delta) {
    const double s = f.order();
    require_unit(theta, "θ");
    require_unit(delta, "δ");
    const double span = std::pow(r, 2.0 * s);
    require_inside(f, x0, r, t0 - span, t0);

    VerificationReport rep;
    rep.theorem_id = "local_boundedness";
    rep.x0 = x0;
    rep.r = r;
    rep.t0 = t0;
    rep.theta = theta;
    rep.delta = delta;
    rep.lhs = field_extrema(f, cylinder(x0, t0, theta * r, s, Orientation::backward)).sup;
    rep.rhs_mean = field_extrema(f.map([](double v) { return v > 0.0 ? v : 0.0; }), cylinder(x0, t0, r, s, Orientation::backward)).mean;
    rep.rhs_tail = delta * tail(f, ext, TailQuery{x0, r, t0 - span, t0, TailTarget::positive_part});
    finalize_boundedness(rep);
    return rep;
}

VerificationReport verify_local_boundedness_signed(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0,
                                                   double r, double R, double t0, double theta, double delta,
                                                   double negativity_tol) {
    const double s = f.order();
    require_radii(r, R);
    require_unit(theta, "θ");
    require_unit(delta, "δ");
    const double span = std::pow(r, 2.0 * s);
    require_inside(f, x0, R, t0 - span, t0);
    require_nonnegative(f, x0, R, t0 - span, t0, negativity_tol);

    VerificationReport rep;
    rep.theorem_id = "local_boundedness_signed";
    rep.x0 = x0;
    rep.r = r;
    rep.R = R;
    rep.t0 = t0;
    rep.theta = theta;
    rep.delta = delta;
    rep.lhs = field_extrema(f, cylinder(x0, t0, theta * r, s, Orientation::backward)).sup;
    rep.rhs_mean = field_extrema(f.map([](double v) { return v > 0.0 ? v : 0.0; }), cylinder(x0, t0, r, s, Orientation::backward)).mean;
    rep.rhs_tail = delta * std::pow(r / R, 2.0 * s) *
                   tail(f, ext, TailQuery{x0, R, t0 - span, t0, TailTarget::negative_part});
    finalize_boundedness(rep);
    return rep;
}

}  // namespace nlpar
