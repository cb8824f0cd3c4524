#include "nlpar/tails.hpp"

#include "nlpar/error.hpp"
#include "nlpar/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlpar {

std::string to_string(TailTarget target) {
    switch (target) {
        case TailTarget::positive_part:
            return "positive_part";
        case TailTarget::negative_part:
            return "negative_part";
        case TailTarget::absolute_value:
            return "absolute_value";
    }
    return "?";
}

namespace {

double apply_target(double v, TailTarget target) {
    switch (target) {
        case TailTarget::positive_part:
            return v > 0.0 ? v : 0.0;
        case TailTarget::negative_part:
            return v < 0.0 ? -v : 0.0;
        case TailTarget::absolute_value:
            return std::abs(v);
    }
    return v;
}

ExteriorData target_exterior(const ExteriorData& ext, TailTarget target) {
    switch (target) {
        case TailTarget::positive_part:
            return ext.positive_part();
        case TailTarget::negative_part:
            return ext.negative_part();
        case TailTarget::absolute_value:
            return ext.absolute();
    }
    return ext;
}

// ∫_a^b |x - c|^{-1-2s} dx for an interval on one side of c.
double power_segment(double a, double b, double c, double s) {
    if (!(b > a)) {
        return 0.0;
    }
    const double d1 = std::min(std::abs(a - c), std::abs(b - c));
    const double d2 = std::max(std::abs(a - c), std::abs(b - c));
    return (std::pow(d1, -2.0 * s) - std::pow(d2, -2.0 * s)) / (2.0 * s);
}

// ∫_{[a,b] \ (c - r, c + r)} |x - c|^{-1-2s} dx
double power_outside_ball(double a, double b, double c, double r, double s) {
    return power_segment(a, std::min(b, c - r), c, s) + power_segment(std::max(a, c + r), b, c, s);
}

void require_window(const SpaceTimeField& f, double t1, double t2) {
    const double slack = 1e-9 * std::max(1.0, std::abs(f.t_last()));
    if (!(t2 > t1) || t1 < f.t_first() - slack || t2 > f.t_last() + slack) {
        std::ostringstream os;
        os << "time window [" << t1 << ", " << t2 << "] is not inside the field's range [" << f.t_first() << ", "
           << f.t_last() << "]";
        throw GeometryError(os.str());
    }
}

double trapezoid_mean(const SpaceTimeField& f, const std::vector<std::size_t>& levels, const TailIntegrator& integ) {
    if (levels.empty()) {
        throw GeometryError("time window contains no stored level");
    }
    if (levels.size() == 1) {
        return integ.spatial(levels.front());
    }
    const auto times = f.times();
    double sum = 0.0;
    double prev = integ.spatial(levels.front());
    for (std::size_t k = 1; k < levels.size(); ++k) {
        const double next = integ.spatial(levels[k]);
        sum += 0.5 * (prev + next) * (times[levels[k]] - times[levels[k - 1]]);
        prev = next;
    }
    return sum / (times[levels.back()] - times[levels.front()]);
}

}  // namespace

TailIntegrator::TailIntegrator(const SpaceTimeField& field, const ExteriorData& ext, const Point& x0, double r,
                               TailTarget target)
    : field_(field), ext_(target_exterior(ext, target)), x0_(x0), r_(r), target_(target) {
    const Grid& grid = field.grid();
    if (grid.dim() != 1) {
        throw UnsupportedError("tail integrals are implemented for n = 1 only");
    }
    if (!(r > 0.0)) {
        throw PreconditionError("tail radius must be positive");
    }
    const double s = field.order();
    require_convergent(ext_, s);
    const double h = grid.spacing();
    inner_ = grid.half_width() + 0.5 * h;
    collar_ = 10.0 * grid.half_width();
    if (std::abs(x0[0]) + r >= collar_) {
        throw UnsupportedError("tail ball reaches beyond the far-field radius");
    }
    cell_weight_.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.coordinate(static_cast<int>(i));
        cell_weight_[i] = power_outside_ball(x - 0.5 * h, x + 0.5 * h, x0[0], r, s);
    }
    const double t = field.t_first();
    error_ = std::abs(exterior(t, 10) - exterior(t, 6));
}

double TailIntegrator::exterior(double t, int points) const {
    const double s = field_.order();
    const double c = x0_[0];
    auto integrand = [&](double y) { return ext_(Point{y, 0.0}, t) * std::pow(std::abs(y - c), -1.0 - 2.0 * s); };
    double sum = 0.0;
    for (auto [a, b] : {std::pair{-collar_, -inner_}, std::pair{inner_, collar_}}) {
        for (auto [p, q] : {std::pair{a, std::min(b, c - r_)}, std::pair{std::max(a, c + r_), b}}) {
            if (q > p) {
                std::vector<double> breaks;
                for (double bp : ext_.breakpoints) {
                    breaks.push_back(bp);
                    breaks.push_back(-bp);
                }
                sum += quad::integrate_graded(integrand, p, q, c, breaks, points);
            }
        }
    }
    for (const auto& term : ext_.far_terms) {
        const double amplitude = term.amplitude(t);
        if (amplitude != 0.0) {
            sum += amplitude * quad::far_power_integral(collar_, c, term.exponent, 1.0 + 2.0 * s);
        }
    }
    return sum;
}

double TailIntegrator::spatial(std::size_t level) const {
    const auto u = field_.level(level);
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (cell_weight_[i] != 0.0) {
            sum += cell_weight_[i] * apply_target(u[i], target_);
        }
    }
    return sum + exterior(field_.times()[level], 10);
}

TailValue tail_detailed(const SpaceTimeField& f, const ExteriorData& ext, const TailQuery& q) {
    require_window(f, q.t1, q.t2);
    const TailIntegrator integ(f, ext, q.x0, q.r, q.target);
    const double scale = std::pow(q.r, 2.0 * f.order());
    return {scale * trapezoid_mean(f, levels_in_closed_window(f, q.t1, q.t2), integ), scale * integ.error_estimate()};
}

double tail(const SpaceTimeField& f, const ExteriorData& ext, const TailQuery& q) {
    return tail_detailed(f, ext, q).value;
}

double tail_sup(const SpaceTimeField& f, const ExteriorData& ext, const TailQuery& q) {
    require_window(f, q.t1, q.t2);
    const TailIntegrator integ(f, ext, q.x0, q.r, q.target);
    const auto levels = levels_in_closed_window(f, q.t1, q.t2);
    if (levels.empty()) {
        throw GeometryError("time window contains no stored level");
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t m : levels) {
        best = std::max(best, integ.spatial(m));
    }
    return std::pow(q.r, 2.0 * f.order()) * best;
}

double spatial_tail_integral(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0, double r,
                             std::size_t level, TailTarget target) {
    return TailIntegrator(f, ext, x0, r, target).spatial(level);
}

namespace {

void require_nonnegative(const SpaceTimeField& f, const Point& x0, double r, double a, double b, double tol,
                         const char* what) {
    const Extrema e = region_extrema(f, x0, r, a, b);
    if (e.inf < -tol) {
        std::ostringstream os;
        os << what << ": u must be nonnegative on B_" << r << "(" << x0[0] << ") x (" << a << ", " << b
           << "), found " << e.inf << " below the tolerance " << -tol;
        throw PreconditionError(os.str());
    }
}

}  // namespace

VerificationReport check_supTail_by_Tail(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0, double r,
                                         double t1, double epsilon, double negativity_tol) {
    const double s = f.order();
    const double span = std::pow(r, 2.0 * s);
    const double t2 = t1 + span;
    const double t_back = t1 - epsilon * span;
    if (!(epsilon > 0.0)) {
        throw PreconditionError("epsilon must be positive");
    }
    require_window(f, t_back, t2);
    require_nonnegative(f, x0, r, t1, t2, negativity_tol, "check_supTail_by_Tail");

    VerificationReport rep;
    rep.theorem_id = "tail_sup_by_tail";
    rep.x0 = x0;
    rep.r = r;
    rep.t0 = t1;
    rep.epsilon = epsilon;
    rep.lhs = tail_sup(f, ext, TailQuery{x0, r, t1, t2, TailTarget::positive_part});
    rep.rhs_tail = tail(f, ext, TailQuery{x0, r, t_back, t2, TailTarget::positive_part}) / epsilon;
    rep.rhs_mean = region_extrema(f.map([](double v) { return v > 0.0 ? v : 0.0; }), x0, r, t_back, t2).mean / epsilon;
    finalize_ratio(rep);
    return rep;
}

VerificationReport check_supTail_by_Tail_minus(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0,
                                               double r, double t1, double epsilon) {
    const SpaceTimeField flipped = f.map([](double v) { return -v; });
    VerificationReport rep = check_supTail_by_Tail(flipped, ext.scaled(-1.0), x0, r, t1, epsilon,
                                                   std::numeric_limits<double>::infinity());
    rep.theorem_id = "tail_sup_by_tail_minus";
    return rep;
}

VerificationReport check_tail_plus_by_minus(const SpaceTimeField& f, const ExteriorData& ext, const Point& x0, double r,
                                            double R, double t1, double negativity_tol) {
    if (!(r > 0.0) || !(r < 0.5 * R)) {
        throw PreconditionError("check_tail_plus_by_minus needs 0 < r < R/2");
    }
    const double s = f.order();
    const double t2 = t1 + std::pow(r, 2.0 * s);
    require_window(f, t1, t2);
    require_nonnegative(f, x0, R, t1, t2, negativity_tol, "check_tail_plus_by_minus");

    VerificationReport rep;
    rep.theorem_id = "tail_plus_by_minus";
    rep.x0 = x0;
    rep.r = r;
    rep.R = R;
    rep.t0 = t1;
    rep.lhs = tail(f, ext, TailQuery{x0, r, t1, t2, TailTarget::positive_part});
    rep.rhs_inf = region_extrema(f, x0, r, t1, t2).sup;
    rep.rhs_tail = std::pow(r / R, 2.0 * s) * tail(f, ext, TailQuery{x0, R, t1, t2, TailTarget::negative_part});
    finalize_ratio(rep);
    return rep;
}

}  // namespace nlpar
