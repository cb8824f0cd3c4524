#include "nlpar/quadrature.hpp"

#include "nlpar/error.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>

namespace nlpar::quad {

namespace {

GaussRule compute_gauss_legendre(int m) {
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(m));
    rule.weights.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < (m + 1) / 2; ++k) {
        double x = std::cos(std::numbers::pi * (k + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int j = 2; j <= m; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(k)] = -x;
        rule.nodes[static_cast<std::size_t>(m - 1 - k)] = x;
        rule.weights[static_cast<std::size_t>(k)] = w;
        rule.weights[static_cast<std::size_t>(m - 1 - k)] = w;
    }
    if (m % 2 == 1) {
        rule.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
    }
    return rule;
}

// Kronrod 15-point nodes (positive half) with the embedded Gauss 7-point weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) {
            resg += kWg[j / 2] * (f1 + f2);
        }
    }
    return {a, b, resk * half, std::abs((resk - resg) * half)};
}

}  // namespace

const GaussRule& gauss_legendre(int m) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    if (m < 1) {
        throw PreconditionError("gauss_legendre: rule size must be positive");
    }
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[m];
    if (!slot) {
        slot = std::make_unique<GaussRule>(compute_gauss_legendre(m));
    }
    return *slot;
}

std::vector<double> graded_breakpoints(double a, double b, double focus) {
    std::vector<double> out;
    if (!(b > a)) {
        return out;
    }
    if (focus > a && focus < b) {
        auto left = graded_breakpoints(a, focus, focus);
        auto right = graded_breakpoints(focus, b, focus);
        out = left;
        out.insert(out.end(), right.begin() + 1, right.end());
        return out;
    }
    const bool focus_left = focus <= a;
    const double near = focus_left ? a : b;
    const double far = focus_left ? b : a;
    double d = std::abs(near - focus);
    const double span = b - a;
    if (d <= 0.0) {
        d = span * 1e-9;
    }
    std::vector<double> dist{std::abs(near - focus)};
    const double far_dist = std::abs(far - focus);
    for (double next = 2.0 * d; next < far_dist; next *= 2.0) {
        if (next > dist.back()) {
            dist.push_back(next);
        }
    }
    dist.push_back(far_dist);
    for (double r : dist) {
        out.push_back(focus_left ? focus + r : focus - r);
    }
    out.front() = near;
    out.back() = far;
    std::sort(out.begin(), out.end());
    return out;
}

QuadResult adaptive_gauss_kronrod(const std::function<double(double)>& f, std::span<const double> breaks,
                                  double abs_tol, double rel_tol, int max_intervals) {
    if (breaks.size() < 2) {
        throw PreconditionError("adaptive_gauss_kronrod: need at least two breakpoints");
    }
    std::priority_queue<Segment> heap;
    double value = 0.0;
    double error = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        if (breaks[k + 1] <= breaks[k]) {
            continue;
        }
        Segment seg = kronrod15(f, breaks[k], breaks[k + 1]);
        value += seg.value;
        error += seg.error;
        heap.push(seg);
    }
    QuadResult result;
    while (!heap.empty()) {
        const double target = std::max(abs_tol, rel_tol * std::abs(value));
        if (error <= target) {
            result.converged = true;
            break;
        }
        if (static_cast<int>(heap.size()) >= max_intervals) {
            break;
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // interval cannot be split further in floating point
            heap.push(worst);
            break;
        }
        Segment left = kronrod15(f, worst.a, mid);
        Segment right = kronrod15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed drift accumulated by incremental updates.
    double v = 0.0;
    double e = 0.0;
    result.intervals = static_cast<int>(heap.size());
    while (!heap.empty()) {
        v += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    result.value = v;
    result.error = e;
    if (!result.converged) {
        result.converged = e <= std::max(abs_tol, rel_tol * std::abs(v));
    }
    return result;
}

double far_power_integral(double R, double x0, double gamma, double p) {
    if (!(gamma - p < -1.0)) {
        throw DivergenceError("far_power_integral: |y|^gamma |y-x0|^-p is not integrable at infinity");
    }
    if (!(std::abs(x0) < R)) {
        throw PreconditionError("far_power_integral: centre must lie inside the far-field radius");
    }
    const double ratio = x0 / R;
    // Sum over even k of 2 (p)_k / k! * ratio^k * R^(gamma-p+1) / (p+k-1-gamma)
    double coef = 1.0;  // (p)_k / k!
    double power = 1.0;  // ratio^k
    double sum = 0.0;
    for (int k = 0; k < 4000; ++k) {
        if (k % 2 == 0) {
            const double term = coef * power / (p + k - 1.0 - gamma);
            sum += term;
            if (k > 0 && std::abs(term) <= 1e-17 * std::abs(sum)) {
                break;
            }
        }
        coef *= (p + k) / (k + 1.0);
        power *= ratio;
    }
    return 2.0 * std::pow(R, gamma - p + 1.0) * sum;
}

}  // namespace nlpar::quad
