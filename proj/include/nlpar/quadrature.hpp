#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nlpar::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Returns the m-point Gauss-Legendre rule. Rules are computed once and cached.
const GaussRule& gauss_legendre(int m);

template <typename F>
double integrate_gauss(F&& f, double a, double b, int m = 10) {
    const GaussRule& rule = gauss_legendre(m);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
    }
    return sum * half;
}

/// Panel boundaries on [a, b] refined geometrically towards a point that lies
/// outside (or on the boundary of) the interval. Panels double in width with
/// distance from `focus`.
std::vector<double> graded_breakpoints(double a, double b, double focus);

/// Composite Gauss-Legendre over geometrically graded panels. Accurate for
/// integrands that behave like a power of |y - focus| times a smooth factor.
/// Extra breakpoints (discontinuities of the smooth factor) are honoured.
template <typename F>
double integrate_graded(F&& f, double a, double b, double focus, std::span<const double> extra_breaks = {},
                        int m = 10) {
    if (!(b > a)) {
        return 0.0;
    }
    std::vector<double> breaks = graded_breakpoints(a, b, focus);
    for (double x : extra_breaks) {
        if (x > a && x < b) {
            breaks.push_back(x);
        }
    }
    std::sort(breaks.begin(), breaks.end());
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        if (breaks[k + 1] > breaks[k]) {
            sum += integrate_gauss(f, breaks[k], breaks[k + 1], m);
        }
    }
    return sum;
}

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
    int intervals = 0;
};

/// Global adaptive Gauss-Kronrod (7/15) quadrature. `breaks` gives the initial
/// partition (at least two points); the worst interval is bisected until the
/// summed error estimate drops below max(abs_tol, rel_tol * |value|).
QuadResult adaptive_gauss_kronrod(const std::function<double(double)>& f, std::span<const double> breaks,
                                  double abs_tol, double rel_tol = 0.0, int max_intervals = 4000);

/// Closed-form far-field integral in one dimension:
///   ∫_{|y|>R} |y|^gamma |y - x0|^{-p} dy,   |x0| < R, gamma - p < -1,
/// evaluated by the binomial series of |y - x0|^{-p} in powers of x0/y.
double far_power_integral(double R, double x0, double gamma, double p);

}  // namespace nlpar::quad
