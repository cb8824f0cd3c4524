#pragma once

#include "nlpar/kernels.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nlpar {

/// Uniform grid on [-L, L]^n with N nodes per axis, x_i = -L + i h, h = 2L/(N-1).
/// In two dimensions nodes are stored row-major with the first coordinate slowest.
class Grid {
public:
    Grid(int dim, double half_width, int nodes_per_axis);

    int dim() const noexcept { return dim_; }
    double half_width() const noexcept { return half_width_; }
    int nodes_per_axis() const noexcept { return nodes_; }
    double spacing() const noexcept { return spacing_; }
    std::size_t size() const noexcept { return size_; }

    double coordinate(int i) const noexcept { return -half_width_ + i * spacing_; }
    Point node(std::size_t flat) const noexcept;
    std::vector<Point> nodes() const;
    /// Cell measure h^n.
    double cell_volume() const noexcept { return dim_ == 1 ? spacing_ : spacing_ * spacing_; }
    /// Every point of [-L, L]^n.
    bool contains(const Point& x) const noexcept;

    /// Grid with the same node count on [-ρL, ρL]^n.
    Grid scaled(double factor) const { return Grid(dim_, half_width_ * factor, nodes_); }

    bool operator==(const Grid& other) const = default;

private:
    int dim_;
    double half_width_;
    int nodes_;
    double spacing_;
    std::size_t size_;
};

/// Nodal values u(x_i, t_m) on a grid at strictly increasing times.
/// `order` records the s of the equation that produced the field.
class SpaceTimeField {
public:
    SpaceTimeField(Grid grid, std::vector<double> times, std::vector<double> values, double order);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> times() const noexcept { return times_; }
    std::span<const double> values() const noexcept { return values_; }
    double order() const noexcept { return order_; }
    std::size_t levels() const noexcept { return times_.size(); }
    std::span<const double> level(std::size_t m) const {
        return std::span<const double>(values_).subspan(m * grid_.size(), grid_.size());
    }
    double t_first() const { return times_.front(); }
    double t_last() const { return times_.back(); }

    /// Nodewise transform into a new field on the same grid and times.
    template <typename F>
    SpaceTimeField map(F&& f) const {
        std::vector<double> out(values_.size());
        for (std::size_t k = 0; k < values_.size(); ++k) {
            out[k] = f(values_[k]);
        }
        return SpaceTimeField(grid_, times_, std::move(out), order_);
    }

    double max_abs() const;

private:
    Grid grid_;
    std::vector<double> times_;
    std::vector<double> values_;
    double order_;
};

/// Samples f(x, t) on every node and time.
template <typename F>
SpaceTimeField sample_field(const Grid& grid, std::vector<double> times, double order, F&& f) {
    std::vector<double> values;
    values.reserve(times.size() * grid.size());
    const auto nodes = grid.nodes();
    for (double t : times) {
        for (const auto& x : nodes) {
            values.push_back(f(x, t));
        }
    }
    return SpaceTimeField(grid, std::move(times), std::move(values), order);
}

/// Uniform time levels t_start, t_start + dt, ..., t_end.
std::vector<double> uniform_times(double t_start, double t_end, double dt);

enum class Orientation { backward, forward };

/// B_r(x0) × (t0 - r^{2s}, t0) (backward, U⁻) or B_r(x0) × (t0, t0 + r^{2s}) (forward, U⁺).
struct ParabolicCylinder {
    Point center;
    double radius;
    double anchor_time;
    Orientation orientation;
    double order;

    double duration() const { return std::pow(radius, 2.0 * order); }
    std::pair<double, double> time_interval() const {
        return orientation == Orientation::backward ? std::pair{anchor_time - duration(), anchor_time}
                                                    : std::pair{anchor_time, anchor_time + duration()};
    }
    std::string describe() const;
};

ParabolicCylinder cylinder(const Point& x0, double t0, double r, double s, Orientation orientation);

struct Extrema {
    double sup;
    double inf;
    double mean;
    std::size_t node_count;
};

/// Time levels of f with a < t <= b (the right end point is included; see README).
std::vector<std::size_t> levels_in_window(const SpaceTimeField& f, double a, double b);
/// Time levels with a <= t <= b, used by time integrals.
std::vector<std::size_t> levels_in_closed_window(const SpaceTimeField& f, double a, double b);
/// Flat indices of nodes with |x - x0| < r.
std::vector<std::size_t> nodes_in_ball(const Grid& grid, const Point& x0, double r);

/// Max, min and average over nodes strictly inside B_r and levels in the cylinder's window.
Extrema field_extrema(const SpaceTimeField& f, const ParabolicCylinder& c);
/// Same over an explicit space-time box B_r(x0) × (a, b].
Extrema region_extrema(const SpaceTimeField& f, const Point& x0, double r, double a, double b);

}  // namespace nlpar
