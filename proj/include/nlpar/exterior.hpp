#pragma once

#include "nlpar/kernels.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace nlpar {

/// One term A(t) |y|^exponent of the far-field expansion of exterior data.
struct FarTerm {
    double exponent;
    std::function<double(double)> amplitude;
};

/// Values g(y, t) of the solution on the complement of the computational box.
/// Beyond the collar radius g is replaced by the sum of its far-field terms,
/// which are integrated against the kernel in closed form.
struct ExteriorData {
    std::string name;
    std::function<double(const Point&, double)> value;
    std::vector<FarTerm> far_terms;
    /// Radii |y| at which g fails to be smooth; quadrature panels are split there.
    std::vector<double> breakpoints;
    /// Upper bound on quadrature panel width for oscillating data.
    double max_panel_width = std::numeric_limits<double>::infinity();

    double operator()(const Point& y, double t) const { return value(y, t); }

    /// Largest exponent γ with |g(y, t)| <= C (1 + |y|)^γ; -inf for compact support.
    double decay_exponent() const;
    /// Sum of the far-field terms at radius |y| = rho.
    double far_value(double rho, double t) const;

    static ExteriorData constant(double c);
    static ExteriorData zero();
    /// A (1 + |y|^2)^{γ/2}
    static ExteriorData power_decay(double amplitude, double gamma);
    /// t (1 + |y|)^γ, increasing in t for t > 0.
    static ExteriorData linear_in_time(double gamma);
    /// level on inner <= |y| <= outer, zero elsewhere.
    static ExteriorData annulus(double inner, double outer, double level);
    /// One-dimensional Cauchy-Poisson kernel p(y, t + offset) = τ / (π (τ^2 + y^2)).
    static ExteriorData poisson_kernel(double time_offset);
    /// cos(ξ y_1); the oscillation is given no far-field term.
    static ExteriorData plane_wave(double frequency);

    ExteriorData scaled(double factor) const;
    ExteriorData plus(const ExteriorData& other) const;
    ExteriorData shifted(double c) const;
    ExteriorData time_shifted(double tau) const;
    /// g_+, g_- and |g|. The far field keeps only the dominant term, with its
    /// amplitude replaced by the corresponding part.
    ExteriorData positive_part() const;
    ExteriorData negative_part() const;
    ExteriorData absolute() const;
};

/// Throws DivergenceError unless every far-field exponent is below 2s.
void require_convergent(const ExteriorData& ext, double order);

}  // namespace nlpar
