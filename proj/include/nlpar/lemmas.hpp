#pragma once

#include "nlpar/geometry.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nlpar {

enum class AlgebraicPart { i, ii };

struct AlgebraicCheck {
    bool holds;
    /// LHS - RHS
    double slack;
};

/// Evaluates the algebraic inequality used for the Caccioppoli estimates.
///   part i  (q > 1):      (b-a)(α^{q+1}a^{-q} - β^{q+1}b^{-q})
///                           >= αβ/(q-1) [(b/β)^{(1-q)/2} - (a/α)^{(1-q)/2}]^2
///                              - c (β-α)^2 [(b/β)^{1-q} + (a/α)^{1-q}]
///   part ii (0 < q < 1):  (b-a)(α^2 a^{-q} - β^2 b^{-q})
///                           >= c1 (β b^{(1-q)/2} - α a^{(1-q)/2})^2 - c2 (β-α)^2 (b^{1-q} + a^{1-q})
/// `constants` holds {c} for part i and {c1, c2} for part ii. A relative
/// rounding allowance of 1e-12 of the largest term is granted.
AlgebraicCheck check_algebraic_inequality(AlgebraicPart part, double q, double a, double b, double alpha, double beta,
                                          std::span<const double> constants);

struct AlgebraicTuple {
    double a;
    double b;
    double alpha;
    double beta;
};

/// Seeded tuples with a, b log-uniform in [1e-2, 1e2] and α, β uniform in [0, 2].
std::vector<AlgebraicTuple> random_algebraic_tuples(std::size_t count, std::uint64_t seed);

/// Log-spaced candidates lo, ..., hi with `per_decade` points per decade.
std::vector<double> constant_grid(double lo = 1e-2, double hi = 1e4, int per_decade = 8);

struct ConstantSearch {
    bool found;
    /// Smallest grid constant with zero violations (c for part i, c2 for part ii).
    double constant;
    /// c1 used for part ii.
    double fixed_constant;
    /// constant divided by the expected rate: 1 + q (part i), q/(1-q) + 1/q (part ii).
    double rate_ratio;
    std::size_t tuples;
    std::size_t violations;
};

/// Brute-force scan of the constant grid over the tuples. Part ii fixes
/// c1 = q / (2 (1 - q)) and scans c2.
ConstantSearch search_algebraic_constant(AlgebraicPart part, double q, std::span<const AlgebraicTuple> tuples,
                                         std::span<const double> grid);

struct LemmaReport {
    double lhs;
    double rhs;
    double C_emp;
    bool degenerate;
    bool pass;
};

enum class PoincareWeight { constant, cone };

std::string to_string(PoincareWeight w);
PoincareWeight poincare_weight_from_string(const std::string& name);

/// ψ(x) = Ψ(|x - x0| / r): constant 1, or 1 on B_{r/2} falling linearly to 0 at |x - x0| = r.
double poincare_weight(PoincareWeight w, double rho_over_r);

/// ∫_{B_r} |f - f_ψ|^2 ψ  against  r^{2s} ∫∫_{B_r×B_r} |f(x) - f(y)|^2 |x-y|^{-n-2s} min(ψ(x), ψ(y)),
/// both by lattice sums over nodes strictly inside B_r(x0).
LemmaReport check_weighted_poincare(const Grid& grid, std::span<const double> snapshot, const Point& x0, double r,
                                    double order, PoincareWeight weight);

enum class SobolevMode { spatial, parabolic };

/// Critical exponent κ* = n / (n - 2s); throws UnsupportedError unless n > 2s.
double sobolev_exponent(int dim, double order);

/// (avg_{B_r} |f|^{2κ*})^{1/κ*}  against  r^{2s-n} [f]^2_{H^s(B_r)} + avg_{B_r} |f|^2.
LemmaReport check_sobolev(const Grid& grid, std::span<const double> snapshot, const Point& x0, double r, double order);

/// ∫ avg_{B_r} |f|^{2κ} dt  against
/// (r^{2s-n} ∫ [f]^2_{H^s(B_r)} dt + r^{-n} ∫ ||f||^2_{L^2(B_r)} dt) (sup_t avg_{B_r} |f|^{2κ*(κ-1)/(κ*-1)})^{(κ*-1)/κ*}
/// over the stored levels in [t1, t2]; κ defaults to (1 + κ*)/2.
LemmaReport check_sobolev_parabolic(const SpaceTimeField& f, const Point& x0, double r, double t1, double t2,
                                    double kappa = 0.0);

}  // namespace nlpar
