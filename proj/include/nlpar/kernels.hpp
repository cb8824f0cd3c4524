#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nlpar {

/// A point of R^n, n <= 2. In one dimension the second coordinate is zero.
using Point = std::array<double, 2>;

inline double distance(const Point& x, const Point& y) { return std::hypot(x[0] - y[0], x[1] - y[1]); }
inline double norm(const Point& x) { return std::hypot(x[0], x[1]); }

enum class KernelFamily { fractional_laplacian, constant_multiple, modulated };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

/// Bounded symmetric factor a(x, y, t) multiplying |x - y|^{-n-2s}.
struct Modulation {
    std::string name;
    std::function<double(const Point&, const Point&, double)> value;
    /// Declared range of a; used only as metadata, check_ellipticity measures it.
    double lower = 1.0;
    double upper = 1.0;
    bool time_dependent = false;
    /// Value of a used beyond the far-field radius, where the kernel is
    /// integrated in closed form. Defaults to 1 when empty.
    std::function<double(double)> far_mean;
};

/// Named modulations available to run configurations.
///   "oscillating": 1 + 0.4 sin(t) cos(Σ(x_k + y_k)), range [0.6, 1.4], time dependent
///   "bump":        1 + 0.5 exp(-(|x|^2 + |y|^2)),    range [1, 1.5], autonomous
///   "two_level":   1.25 + 0.25 tanh(x_1 y_1),        range [1, 1.5], autonomous
Modulation named_modulation(const std::string& name);
std::vector<std::string> modulation_names();

/// Symmetric jump kernel K(x, y, t) = c · a(x, y, t) · |x - y|^{-n-2s} with
/// Λ^{-1} <= c·a <= Λ. Immutable after construction.
class KernelSpec {
public:
    /// Normalized fractional Laplacian. Λ defaults to the smallest value that
    /// admits the normalization constant.
    static KernelSpec fractional_laplacian(int dim, double order, std::optional<double> lambda = std::nullopt);
    static KernelSpec constant_multiple(int dim, double order, double lambda, double multiple = 1.0);
    static KernelSpec modulated(int dim, double order, double lambda, Modulation modulation);

    double operator()(const Point& x, const Point& y, double t) const;

    int dim() const noexcept { return dim_; }
    double order() const noexcept { return order_; }
    double lambda() const noexcept { return lambda_; }
    KernelFamily family() const noexcept { return family_; }
    /// The constant c in front of the modulation and the power.
    double coefficient() const noexcept { return coefficient_; }
    bool autonomous() const noexcept { return !modulation_ || !modulation_->time_dependent; }
    bool translation_invariant() const noexcept { return family_ != KernelFamily::modulated; }
    const std::optional<Modulation>& modulation() const noexcept { return modulation_; }
    std::string modulation_name() const { return modulation_ ? modulation_->name : std::string("none"); }

    /// a(x, y, t); 1 for unmodulated families. Defined on the diagonal.
    double modulation_value(const Point& x, const Point& y, double t) const {
        return modulation_ ? modulation_->value(x, y, t) : 1.0;
    }
    double far_modulation(double t) const;

    /// Restricts admissible evaluation times; evaluation outside throws.
    KernelSpec with_horizon(double t_min, double t_max) const;

private:
    KernelSpec(int dim, double order, double lambda, KernelFamily family, double coefficient,
               std::optional<Modulation> modulation);

    int dim_;
    double order_;
    double lambda_;
    KernelFamily family_;
    double coefficient_;
    std::optional<Modulation> modulation_;
    double t_min_ = -std::numeric_limits<double>::infinity();
    double t_max_ = std::numeric_limits<double>::infinity();
};

double eval_kernel(const KernelSpec& k, const Point& x, const Point& y, double t);

/// Normalization C(n, s) for which ∫ (u(x) - u(y)) C |x-y|^{-n-2s} dy has
/// Fourier symbol |ξ|^{2s}. Computed numerically as 1 / ∫ (1 - cos z_1) |z|^{-n-2s} dz.
double fractional_laplacian_constant(int dim, double order);

struct KernelSample {
    Point x;
    Point y;
    double t;
};

struct EllipticityReport {
    bool pass;
    /// max over samples of max(ratio, 1/ratio), ratio = K |x-y|^{n+2s}
    double worst_ratio;
    double min_ratio;
    double max_ratio;
};

EllipticityReport check_ellipticity(const KernelSpec& k, std::span<const KernelSample> samples);

/// Deterministic random samples with |x - y| log-uniform in [min_dist, max_dist].
std::vector<KernelSample> random_kernel_samples(int dim, std::size_t count, std::uint64_t seed, double min_dist,
                                                double max_dist, double t_min, double t_max);

}  // namespace nlpar
