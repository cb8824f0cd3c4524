#include "nlpar/kernels.hpp"

#include "nlpar/error.hpp"
#include "nlpar/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>
#include <random>

namespace nlpar {

namespace {

void validate_common(int dim, double order, double lambda) {
    if (dim != 1 && dim != 2) {
        throw PreconditionError("kernel dimension must be 1 or 2");
    }
    if (!(order > 0.0 && order < 1.0)) {
        throw PreconditionError("kernel order s must lie in (0, 1)");
    }
    if (!(lambda >= 1.0)) {
        throw PreconditionError("ellipticity constant Λ must be >= 1");
    }
}

// ∫_0^∞ (1 - cos z) z^{-1-2s} dz
double one_minus_cos_moment(double s) {
    const double p = 1.0 + 2.0 * s;
    // [0, 1]: termwise integration of the cosine series.
    double head = 0.0;
    double fact = 1.0;
    for (int k = 1; k < 30; ++k) {
        fact *= (2.0 * k - 1.0) * (2.0 * k);
        const double term = 1.0 / (fact * (2.0 * k - 2.0 * s));
        head += (k % 2 == 1) ? term : -term;
        if (term < 1e-18) {
            break;
        }
    }
    // [1, A] with A a multiple of 2π, one panel per half period.
    const int periods = 64;
    const double A = 2.0 * std::numbers::pi * periods;
    std::vector<double> breaks{1.0};
    for (int k = 1; k <= 2 * periods; ++k) {
        breaks.push_back(std::numbers::pi * k);
    }
    auto f = [s](double z) {
        const double sh = std::sin(0.5 * z);
        return 2.0 * sh * sh * std::pow(z, -1.0 - 2.0 * s);
    };
    const auto mid = quad::adaptive_gauss_kronrod(f, breaks, 1e-15, 1e-14, 20000);
    // [A, ∞): ∫ z^{-p} minus the asymptotic expansion of ∫ cos z z^{-p} (sin A = 0, cos A = 1).
    const double tail = std::pow(A, 1.0 - p) / (p - 1.0) - p * std::pow(A, -p - 1.0) +
                        p * (p + 1.0) * (p + 2.0) * std::pow(A, -p - 3.0);
    return head + mid.value + tail;
}

}  // namespace

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::fractional_laplacian:
            return "fractional_laplacian";
        case KernelFamily::constant_multiple:
            return "constant_multiple";
        case KernelFamily::modulated:
            return "modulated";
    }
    return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "fractional_laplacian") return KernelFamily::fractional_laplacian;
    if (name == "constant_multiple") return KernelFamily::constant_multiple;
    if (name == "modulated") return KernelFamily::modulated;
    throw PreconditionError("unknown kernel family '" + name +
                            "' (expected fractional_laplacian, constant_multiple or modulated)");
}

Modulation named_modulation(const std::string& name) {
    Modulation m;
    m.name = name;
    if (name == "oscillating") {
        m.value = [](const Point& x, const Point& y, double t) {
            return 1.0 + 0.4 * std::sin(t) * std::cos(x[0] + x[1] + y[0] + y[1]);
        };
        m.lower = 0.6;
        m.upper = 1.4;
        m.time_dependent = true;
    } else if (name == "bump") {
        m.value = [](const Point& x, const Point& y, double) {
            return 1.0 + 0.5 * std::exp(-(x[0] * x[0] + x[1] * x[1] + y[0] * y[0] + y[1] * y[1]));
        };
        m.lower = 1.0;
        m.upper = 1.5;
    } else if (name == "two_level") {
        m.value = [](const Point& x, const Point& y, double) { return 1.25 + 0.25 * std::tanh(x[0] * y[0]); };
        m.lower = 1.0;
        m.upper = 1.5;
        m.far_mean = [](double) { return 1.25; };
    } else {
        throw PreconditionError("unknown modulation '" + name + "'");
    }
    return m;
}

std::vector<std::string> modulation_names() { return {"oscillating", "bump", "two_level"}; }

double fractional_laplacian_constant(int dim, double order) {
    if (dim != 1 && dim != 2) {
        throw PreconditionError("fractional_laplacian_constant: dimension must be 1 or 2");
    }
    if (!(order > 0.0 && order < 1.0)) {
        throw PreconditionError("fractional_laplacian_constant: order must lie in (0, 1)");
    }
    static std::mutex mutex;
    static std::map<std::pair<int, double>, double> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        if (auto it = cache.find({dim, order}); it != cache.end()) {
            return it->second;
        }
    }
    double moment = 2.0 * one_minus_cos_moment(order);
    if (dim == 2) {
        // Integrating out the transverse coordinate leaves |z_1|^{-1-2s} times
        // ∫_R (1 + v^2)^{-1-s} dv = 2 ∫_0^{π/2} cos^{2s} θ dθ.
        auto g = [order](double th) { return std::pow(std::cos(th), 2.0 * order); };
        const std::array<double, 3> breaks{0.0, 0.25 * std::numbers::pi, 0.5 * std::numbers::pi};
        const auto transverse = quad::adaptive_gauss_kronrod(g, breaks, 1e-15, 1e-14, 20000);
        moment *= 2.0 * transverse.value;
    }
    const double c = 1.0 / moment;
    std::lock_guard<std::mutex> lock(mutex);
    cache[{dim, order}] = c;
    return c;
}

KernelSpec::KernelSpec(int dim, double order, double lambda, KernelFamily family, double coefficient,
                       std::optional<Modulation> modulation)
    : dim_(dim),
      order_(order),
      lambda_(lambda),
      family_(family),
      coefficient_(coefficient),
      modulation_(std::move(modulation)) {}

KernelSpec KernelSpec::fractional_laplacian(int dim, double order, std::optional<double> lambda) {
    validate_common(dim, order, lambda.value_or(1.0));
    const double c = fractional_laplacian_constant(dim, order);
    const double minimal = std::max(c, 1.0 / c);
    const double declared = lambda.value_or(minimal);
    if (declared < minimal * (1.0 - 1e-12)) {
        throw PreconditionError("fractional Laplacian normalization " + std::to_string(c) +
                                " is not admissible for Λ = " + std::to_string(declared));
    }
    return KernelSpec(dim, order, declared, KernelFamily::fractional_laplacian, c, std::nullopt);
}

KernelSpec KernelSpec::constant_multiple(int dim, double order, double lambda, double multiple) {
    validate_common(dim, order, lambda);
    if (!(multiple > 0.0)) {
        throw PreconditionError("constant_multiple kernel needs a positive multiple");
    }
    return KernelSpec(dim, order, lambda, KernelFamily::constant_multiple, multiple, std::nullopt);
}

KernelSpec KernelSpec::modulated(int dim, double order, double lambda, Modulation modulation) {
    validate_common(dim, order, lambda);
    if (!modulation.value) {
        throw PreconditionError("modulated kernel needs a modulation function");
    }
    return KernelSpec(dim, order, lambda, KernelFamily::modulated, 1.0, std::move(modulation));
}

KernelSpec KernelSpec::with_horizon(double t_min, double t_max) const {
    if (!(t_max > t_min)) {
        throw PreconditionError("kernel time horizon must be a nonempty interval");
    }
    KernelSpec copy = *this;
    copy.t_min_ = t_min;
    copy.t_max_ = t_max;
    return copy;
}

double KernelSpec::far_modulation(double t) const {
    if (modulation_ && modulation_->far_mean) {
        return modulation_->far_mean(t);
    }
    return 1.0;
}

double KernelSpec::operator()(const Point& x, const Point& y, double t) const {
    const double r = distance(x, y);
    if (r == 0.0) {
        throw SingularEvaluationError("kernel evaluated at coincident points");
    }
    if (t < t_min_ || t > t_max_) {
        throw PreconditionError("kernel evaluated outside its time horizon");
    }
    return coefficient_ * modulation_value(x, y, t) * std::pow(r, -dim_ - 2.0 * order_);
}

double eval_kernel(const KernelSpec& k, const Point& x, const Point& y, double t) { return k(x, y, t); }

EllipticityReport check_ellipticity(const KernelSpec& k, std::span<const KernelSample> samples) {
    if (samples.empty()) {
        throw PreconditionError("check_ellipticity: empty sample list");
    }
    EllipticityReport report{true, 1.0, std::numeric_limits<double>::infinity(), 0.0};
    const double power = k.dim() + 2.0 * k.order();
    for (const auto& sample : samples) {
        const double r = distance(sample.x, sample.y);
        if (r == 0.0) {
            throw PreconditionError("check_ellipticity: sample with x = y");
        }
        const double ratio = k(sample.x, sample.y, sample.t) * std::pow(r, power);
        report.min_ratio = std::min(report.min_ratio, ratio);
        report.max_ratio = std::max(report.max_ratio, ratio);
        const double worst = ratio > 0.0 ? std::max(ratio, 1.0 / ratio) : std::numeric_limits<double>::infinity();
        report.worst_ratio = std::max(report.worst_ratio, worst);
    }
    const double lam = k.lambda();
    report.pass = report.min_ratio >= 1.0 / lam * (1.0 - 1e-12) && report.max_ratio <= lam * (1.0 + 1e-12);
    return report;
}

std::vector<KernelSample> random_kernel_samples(int dim, std::size_t count, std::uint64_t seed, double min_dist,
                                                double max_dist, double t_min, double t_max) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<KernelSample> out;
    out.reserve(count);
    const double log_lo = std::log(min_dist);
    const double log_hi = std::log(max_dist);
    for (std::size_t i = 0; i < count; ++i) {
        KernelSample s{};
        s.x = {10.0 * unit(rng) - 5.0, dim == 2 ? 10.0 * unit(rng) - 5.0 : 0.0};
        const double r = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
        if (dim == 1) {
            s.y = {s.x[0] + (unit(rng) < 0.5 ? -r : r), 0.0};
        } else {
            const double th = 2.0 * std::numbers::pi * unit(rng);
            s.y = {s.x[0] + r * std::cos(th), s.x[1] + r * std::sin(th)};
        }
        s.t = t_min + (t_max - t_min) * unit(rng);
        out.push_back(s);
    }
    return out;
}

}  // namespace nlpar
