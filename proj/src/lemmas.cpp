#include "nlpar/lemmas.hpp"

#include "nlpar/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace nlpar {

namespace {

double ratio_power(double num, double den, double p) {
    // (num/den)^p with den -> 0 handled for p < 0 as (den/num)^{-p}.
    return std::pow(den / num, -p);
}

void require_finite_report(LemmaReport& rep) {
    const double scale = std::max({std::abs(rep.lhs), std::abs(rep.rhs), 1e-300});
    if (rep.lhs <= 1e-14 * scale && rep.rhs <= 1e-14 * scale) {
        rep.degenerate = true;
        rep.C_emp = 0.0;
    } else if (rep.rhs <= 1e-14 * scale) {
        rep.C_emp = std::numeric_limits<double>::infinity();
    } else {
        rep.C_emp = rep.lhs / rep.rhs;
    }
    rep.pass = std::isfinite(rep.C_emp);
}

struct BallNodes {
    std::vector<Point> x;
    std::vector<std::size_t> index;
};

BallNodes ball_nodes(const Grid& grid, const Point& x0, double r) {
    BallNodes out;
    out.index = nodes_in_ball(grid, x0, r);
    if (out.index.empty()) {
        std::ostringstream os;
        os << "no grid node lies strictly inside B_" << r << "((" << x0[0] << "," << x0[1] << "))";
        throw GeometryError(os.str());
    }
    for (std::size_t i : out.index) {
        out.x.push_back(grid.node(i));
    }
    return out;
}

// Σ_{i≠j} |f_i - f_j|^2 |x_i - x_j|^{-n-2s} w_ij h^{2n}
template <typename W>
double double_sum(const BallNodes& nodes, std::span<const double> f, double order, int dim, double cell, W&& weight) {
    double sum = 0.0;
    const std::size_t m = nodes.index.size();
    for (std::size_t a = 0; a < m; ++a) {
        const double fa = f[nodes.index[a]];
        for (std::size_t b = a + 1; b < m; ++b) {
            const double d = fa - f[nodes.index[b]];
            if (d != 0.0) {
                sum += 2.0 * d * d * std::pow(distance(nodes.x[a], nodes.x[b]), -dim - 2.0 * order) * weight(a, b);
            }
        }
    }
    return sum * cell * cell;
}

double seminorm(const BallNodes& nodes, std::span<const double> f, double order, int dim, double cell) {
    return double_sum(nodes, f, order, dim, cell, [](std::size_t, std::size_t) { return 1.0; });
}

double ball_mean_power(const BallNodes& nodes, std::span<const double> f, double p) {
    double sum = 0.0;
    for (std::size_t i : nodes.index) {
        sum += std::pow(std::abs(f[i]), p);
    }
    return sum / static_cast<double>(nodes.index.size());
}

}  // namespace

AlgebraicCheck check_algebraic_inequality(AlgebraicPart part, double q, double a, double b, double alpha, double beta,
                                          std::span<const double> constants) {
    if (!(a > 0.0) || !(b > 0.0) || !(alpha >= 0.0) || !(beta >= 0.0)) {
        throw PreconditionError("algebraic inequality needs a, b > 0 and α, β >= 0");
    }
    double lhs = 0.0;
    double first = 0.0;
    double second = 0.0;
    if (part == AlgebraicPart::i) {
        if (!(q > 1.0)) {
            throw PreconditionError("part i needs q > 1");
        }
        if (constants.size() != 1) {
            throw PreconditionError("part i takes one constant");
        }
        lhs = (b - a) * (std::pow(alpha, q + 1.0) * std::pow(a, -q) - std::pow(beta, q + 1.0) * std::pow(b, -q));
        // (b/β)^{(1-q)/2} = (β/b)^{(q-1)/2}, finite for β = 0.
        const double vb = ratio_power(b, beta, 0.5 * (1.0 - q));
        const double va = ratio_power(a, alpha, 0.5 * (1.0 - q));
        first = alpha * beta / (q - 1.0) * (vb - va) * (vb - va);
        second = constants[0] * (beta - alpha) * (beta - alpha) * (vb * vb + va * va);
    } else {
        if (!(q > 0.0 && q < 1.0)) {
            throw PreconditionError("part ii needs 0 < q < 1");
        }
        if (constants.size() != 2) {
            throw PreconditionError("part ii takes two constants");
        }
        lhs = (b - a) * (alpha * alpha * std::pow(a, -q) - beta * beta * std::pow(b, -q));
        const double d = beta * std::pow(b, 0.5 * (1.0 - q)) - alpha * std::pow(a, 0.5 * (1.0 - q));
        first = constants[0] * d * d;
        second = constants[1] * (beta - alpha) * (beta - alpha) * (std::pow(b, 1.0 - q) + std::pow(a, 1.0 - q));
    }
    const double slack = lhs - (first - second);
    const double scale = std::max({std::abs(lhs), std::abs(first), std::abs(second)});
    return {slack >= -1e-12 * scale, slack};
}

std::vector<AlgebraicTuple> random_algebraic_tuples(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> log_ab(-2.0, 2.0);
    std::uniform_real_distribution<double> weight(0.0, 2.0);
    std::vector<AlgebraicTuple> out(count);
    for (auto& t : out) {
        t.a = std::pow(10.0, log_ab(rng));
        t.b = std::pow(10.0, log_ab(rng));
        t.alpha = weight(rng);
        t.beta = weight(rng);
    }
    return out;
}

std::vector<double> constant_grid(double lo, double hi, int per_decade) {
    std::vector<double> out;
    const int steps = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
    for (int k = 0; k <= steps; ++k) {
        out.push_back(lo * std::pow(10.0, static_cast<double>(k) / per_decade));
    }
    return out;
}

ConstantSearch search_algebraic_constant(AlgebraicPart part, double q, std::span<const AlgebraicTuple> tuples,
                                         std::span<const double> grid) {
    ConstantSearch out{false, std::numeric_limits<double>::quiet_NaN(), 0.0, std::numeric_limits<double>::quiet_NaN(),
                       tuples.size(), tuples.size()};
    const double c1 = part == AlgebraicPart::ii ? 0.5 * q / (1.0 - q) : 0.0;
    out.fixed_constant = c1;
    for (double c : grid) {
        std::size_t violations = 0;
        for (const auto& t : tuples) {
            const std::vector<double> consts = part == AlgebraicPart::i ? std::vector<double>{c} : std::vector<double>{c1, c};
            if (!check_algebraic_inequality(part, q, t.a, t.b, t.alpha, t.beta, consts).holds) {
                ++violations;
            }
        }
        out.violations = violations;
        if (violations == 0) {
            out.found = true;
            out.constant = c;
            const double rate = part == AlgebraicPart::i ? 1.0 + q : q / (1.0 - q) + 1.0 / q;
            out.rate_ratio = c / rate;
            break;
        }
    }
    return out;
}

std::string to_string(PoincareWeight w) { return w == PoincareWeight::constant ? "constant" : "cone"; }

PoincareWeight poincare_weight_from_string(const std::string& name) {
    if (name == "constant") {
        return PoincareWeight::constant;
    }
    if (name == "cone") {
        return PoincareWeight::cone;
    }
    throw ConfigError("unknown Poincaré weight '" + name + "' (expected constant or cone)");
}

double poincare_weight(PoincareWeight w, double rho_over_r) {
    if (w == PoincareWeight::constant || rho_over_r <= 0.5) {
        return 1.0;
    }
    return std::max(0.0, 2.0 * (1.0 - rho_over_r));
}

LemmaReport check_weighted_poincare(const Grid& grid, std::span<const double> snapshot, const Point& x0, double r,
                                    double order, PoincareWeight weight) {
    if (snapshot.size() != grid.size()) {
        throw PreconditionError("snapshot size does not match the grid");
    }
    const BallNodes nodes = ball_nodes(grid, x0, r);
    const std::size_t m = nodes.index.size();
    std::vector<double> psi(m);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        psi[a] = poincare_weight(weight, distance(nodes.x[a], x0) / r);
        num += snapshot[nodes.index[a]] * psi[a];
        den += psi[a];
    }
    const double mean = num / den;
    const double cell = grid.cell_volume();
    double lhs = 0.0;
    double energy = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        const double d = snapshot[nodes.index[a]] - mean;
        lhs += d * d * psi[a] * cell;
        energy += snapshot[nodes.index[a]] * snapshot[nodes.index[a]] * psi[a] * cell;
    }
    // Deviation at rounding level of the weighted mean means f is constant on the ball.
    if (lhs <= 1e-24 * energy) {
        lhs = 0.0;
    }
    const double rhs = std::pow(r, 2.0 * order) *
                       double_sum(nodes, snapshot, order, grid.dim(), cell,
                                  [&](std::size_t a, std::size_t b) { return std::min(psi[a], psi[b]); });
    LemmaReport rep{lhs, rhs, 0.0, false, false};
    require_finite_report(rep);
    return rep;
}

double sobolev_exponent(int dim, double order) {
    if (!(dim > 2.0 * order)) {
        std::ostringstream os;
        os << "Sobolev embedding needs n > 2s (got n = " << dim << ", s = " << order << ")";
        throw UnsupportedError(os.str());
    }
    return dim / (dim - 2.0 * order);
}

LemmaReport check_sobolev(const Grid& grid, std::span<const double> snapshot, const Point& x0, double r, double order) {
    const int n = grid.dim();
    const double kstar = sobolev_exponent(n, order);
    if (snapshot.size() != grid.size()) {
        throw PreconditionError("snapshot size does not match the grid");
    }
    const BallNodes nodes = ball_nodes(grid, x0, r);
    const double lhs = std::pow(ball_mean_power(nodes, snapshot, 2.0 * kstar), 1.0 / kstar);
    const double rhs = std::pow(r, 2.0 * order - n) * seminorm(nodes, snapshot, order, n, grid.cell_volume()) +
                       ball_mean_power(nodes, snapshot, 2.0);
    LemmaReport rep{lhs, rhs, 0.0, false, false};
    require_finite_report(rep);
    return rep;
}

LemmaReport check_sobolev_parabolic(const SpaceTimeField& f, const Point& x0, double r, double t1, double t2,
                                    double kappa) {
    const Grid& grid = f.grid();
    const int n = grid.dim();
    const double s = f.order();
    const double kstar = sobolev_exponent(n, s);
    if (kappa == 0.0) {
        kappa = 0.5 * (1.0 + kstar);
    }
    if (!(kappa >= 1.0 && kappa <= kstar)) {
        std::ostringstream os;
        os << "κ must lie in [1, κ*] = [1, " << kstar << "]";
        throw PreconditionError(os.str());
    }
    const auto levels = levels_in_closed_window(f, t1, t2);
    if (levels.size() < 2) {
        throw GeometryError("parabolic Sobolev check needs at least two levels in the window");
    }
    const BallNodes nodes = ball_nodes(grid, x0, r);
    const double cell = grid.cell_volume();
    const double p = 2.0 * kstar * (kappa - 1.0) / (kstar - 1.0);
    const auto times = f.times();
    double lhs = 0.0;
    double energy = 0.0;
    double mass = 0.0;
    double sup = 0.0;
    double prev_l = 0.0;
    double prev_e = 0.0;
    double prev_m = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const auto u = f.level(levels[k]);
        const double l = ball_mean_power(nodes, u, 2.0 * kappa);
        const double e = seminorm(nodes, u, s, n, cell);
        const double m2 = ball_mean_power(nodes, u, 2.0) * cell * static_cast<double>(nodes.index.size());
        sup = std::max(sup, ball_mean_power(nodes, u, p));
        if (k > 0) {
            const double dt = times[levels[k]] - times[levels[k - 1]];
            lhs += 0.5 * (l + prev_l) * dt;
            energy += 0.5 * (e + prev_e) * dt;
            mass += 0.5 * (m2 + prev_m) * dt;
        }
        prev_l = l;
        prev_e = e;
        prev_m = m2;
    }
    const double rhs = (std::pow(r, 2.0 * s - n) * energy + std::pow(r, -n) * mass) *
                       std::pow(sup, (kstar - 1.0) / kstar);
    LemmaReport rep{lhs, rhs, 0.0, false, false};
    require_finite_report(rep);
    return rep;
}

}  // namespace nlpar
