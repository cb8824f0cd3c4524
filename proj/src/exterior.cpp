#include "nlpar/exterior.hpp"

#include "nlpar/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace nlpar {

namespace {

std::function<double(double)> constant_amplitude(double a) {
    return [a](double) { return a; };
}

const FarTerm* dominant_term(const std::vector<FarTerm>& terms) {
    const FarTerm* best = nullptr;
    for (const auto& term : terms) {
        if (!best || term.exponent > best->exponent) {
            best = &term;
        }
    }
    return best;
}

ExteriorData part_of(const ExteriorData& g, const std::string& tag, double (*fn)(double)) {
    ExteriorData out;
    out.name = tag + "(" + g.name + ")";
    out.value = [v = g.value, fn](const Point& y, double t) { return fn(v(y, t)); };
    if (const FarTerm* d = dominant_term(g.far_terms)) {
        out.far_terms.push_back({d->exponent, [a = d->amplitude, fn](double t) { return fn(a(t)); }});
    }
    out.breakpoints = g.breakpoints;
    out.max_panel_width = g.max_panel_width;
    return out;
}

}  // namespace

double ExteriorData::decay_exponent() const {
    double gamma = -std::numeric_limits<double>::infinity();
    for (const auto& term : far_terms) {
        gamma = std::max(gamma, term.exponent);
    }
    return gamma;
}

double ExteriorData::far_value(double rho, double t) const {
    double v = 0.0;
    for (const auto& term : far_terms) {
        v += term.amplitude(t) * std::pow(rho, term.exponent);
    }
    return v;
}

ExteriorData ExteriorData::constant(double c) {
    ExteriorData g;
    std::ostringstream os;
    os << "constant(" << c << ")";
    g.name = os.str();
    g.value = [c](const Point&, double) { return c; };
    g.far_terms.push_back({0.0, constant_amplitude(c)});
    return g;
}

ExteriorData ExteriorData::zero() {
    ExteriorData g;
    g.name = "zero";
    g.value = [](const Point&, double) { return 0.0; };
    return g;
}

ExteriorData ExteriorData::power_decay(double amplitude, double gamma) {
    ExteriorData g;
    std::ostringstream os;
    os << "power_decay(" << amplitude << "," << gamma << ")";
    g.name = os.str();
    g.value = [amplitude, gamma](const Point& y, double) {
        return amplitude * std::pow(1.0 + y[0] * y[0] + y[1] * y[1], 0.5 * gamma);
    };
    // (1 + ρ^2)^{γ/2} = ρ^γ (1 + γ/(2ρ^2) + ...)
    g.far_terms.push_back({gamma, constant_amplitude(amplitude)});
    g.far_terms.push_back({gamma - 2.0, constant_amplitude(0.5 * gamma * amplitude)});
    return g;
}

ExteriorData ExteriorData::linear_in_time(double gamma) {
    ExteriorData g;
    std::ostringstream os;
    os << "linear_in_time(" << gamma << ")";
    g.name = os.str();
    g.value = [gamma](const Point& y, double t) { return t * std::pow(1.0 + norm(y), gamma); };
    // (1 + ρ)^γ = ρ^γ (1 + γ/ρ + γ(γ-1)/(2ρ^2) + ...)
    g.far_terms.push_back({gamma, [](double t) { return t; }});
    g.far_terms.push_back({gamma - 1.0, [gamma](double t) { return gamma * t; }});
    g.far_terms.push_back({gamma - 2.0, [gamma](double t) { return 0.5 * gamma * (gamma - 1.0) * t; }});
    return g;
}

ExteriorData ExteriorData::annulus(double inner, double outer, double level) {
    if (!(outer > inner) || !(inner >= 0.0)) {
        throw PreconditionError("annulus exterior data needs 0 <= inner < outer");
    }
    ExteriorData g;
    std::ostringstream os;
    os << "annulus(" << inner << "," << outer << "," << level << ")";
    g.name = os.str();
    g.value = [inner, outer, level](const Point& y, double) {
        const double r = norm(y);
        return (r >= inner && r <= outer) ? level : 0.0;
    };
    g.breakpoints = {inner, outer};
    return g;
}

ExteriorData ExteriorData::poisson_kernel(double time_offset) {
    ExteriorData g;
    std::ostringstream os;
    os << "poisson_kernel(offset=" << time_offset << ")";
    g.name = os.str();
    g.value = [time_offset](const Point& y, double t) {
        const double tau = t + time_offset;
        return tau / (std::numbers::pi * (tau * tau + y[0] * y[0]));
    };
    // τ/(π(τ^2 + y^2)) = (τ/π) Σ_k (-τ^2)^k y^{-2-2k}
    for (int k = 0; k < 4; ++k) {
        g.far_terms.push_back({-2.0 - 2.0 * k, [time_offset, k](double t) {
                                   const double tau = t + time_offset;
                                   return tau / std::numbers::pi * std::pow(-tau * tau, k);
                               }});
    }
    return g;
}

ExteriorData ExteriorData::plane_wave(double frequency) {
    ExteriorData g;
    std::ostringstream os;
    os << "plane_wave(" << frequency << ")";
    g.name = os.str();
    g.value = [frequency](const Point& y, double) { return std::cos(frequency * y[0]); };
    if (frequency > 0.0) {
        g.max_panel_width = 0.5 * std::numbers::pi / frequency;
    }
    return g;
}

ExteriorData ExteriorData::scaled(double factor) const {
    ExteriorData out;
    std::ostringstream os;
    os << factor << "*" << name;
    out.name = os.str();
    out.value = [v = value, factor](const Point& y, double t) { return factor * v(y, t); };
    for (const auto& term : far_terms) {
        out.far_terms.push_back({term.exponent, [a = term.amplitude, factor](double t) { return factor * a(t); }});
    }
    out.breakpoints = breakpoints;
    out.max_panel_width = max_panel_width;
    return out;
}

ExteriorData ExteriorData::plus(const ExteriorData& other) const {
    ExteriorData out;
    out.name = name + "+" + other.name;
    out.value = [a = value, b = other.value](const Point& y, double t) { return a(y, t) + b(y, t); };
    out.far_terms = far_terms;
    out.far_terms.insert(out.far_terms.end(), other.far_terms.begin(), other.far_terms.end());
    out.breakpoints = breakpoints;
    out.max_panel_width = max_panel_width;
    out.breakpoints.insert(out.breakpoints.end(), other.breakpoints.begin(), other.breakpoints.end());
    out.max_panel_width = std::min(max_panel_width, other.max_panel_width);
    return out;
}

ExteriorData ExteriorData::shifted(double c) const { return plus(constant(c)); }

ExteriorData ExteriorData::time_shifted(double tau) const {
    ExteriorData out;
    std::ostringstream os;
    os << name << "(t-" << tau << ")";
    out.name = os.str();
    out.value = [v = value, tau](const Point& y, double t) { return v(y, t - tau); };
    for (const auto& term : far_terms) {
        out.far_terms.push_back({term.exponent, [a = term.amplitude, tau](double t) { return a(t - tau); }});
    }
    out.breakpoints = breakpoints;
    out.max_panel_width = max_panel_width;
    return out;
}

ExteriorData ExteriorData::positive_part() const {
    return part_of(*this, "pos", [](double v) { return v > 0.0 ? v : 0.0; });
}

ExteriorData ExteriorData::negative_part() const {
    return part_of(*this, "neg", [](double v) { return v < 0.0 ? -v : 0.0; });
}

ExteriorData ExteriorData::absolute() const {
    return part_of(*this, "abs", [](double v) { return std::abs(v); });
}

void require_convergent(const ExteriorData& ext, double order) {
    for (const auto& term : ext.far_terms) {
        if (!(term.exponent < 2.0 * order)) {
            std::ostringstream os;
            os << "exterior data '" << ext.name << "' grows like |y|^" << term.exponent
               << " at infinity; tail integrals need decay exponent γ < 2s = " << 2.0 * order;
            throw DivergenceError(os.str());
        }
    }
}

}  // namespace nlpar
