#include "nlpar/geometry.hpp"

#include "nlpar/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nlpar {

namespace {

double time_slack(const SpaceTimeField& f) {
    return 1e-12 * std::max(1.0, std::max(std::abs(f.t_first()), std::abs(f.t_last())));
}

}  // namespace

Grid::Grid(int dim, double half_width, int nodes_per_axis)
    : dim_(dim), half_width_(half_width), nodes_(nodes_per_axis) {
    if (dim != 1 && dim != 2) {
        throw PreconditionError("grid dimension must be 1 or 2");
    }
    if (nodes_per_axis < 3) {
        throw PreconditionError("grid needs at least 3 nodes per axis");
    }
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw PreconditionError("grid half width must be positive");
    }
    spacing_ = 2.0 * half_width / (nodes_per_axis - 1);
    size_ = dim == 1 ? static_cast<std::size_t>(nodes_) : static_cast<std::size_t>(nodes_) * nodes_;
}

Point Grid::node(std::size_t flat) const noexcept {
    if (dim_ == 1) {
        return {coordinate(static_cast<int>(flat)), 0.0};
    }
    const auto n = static_cast<std::size_t>(nodes_);
    return {coordinate(static_cast<int>(flat / n)), coordinate(static_cast<int>(flat % n))};
}

std::vector<Point> Grid::nodes() const {
    std::vector<Point> out(size_);
    for (std::size_t k = 0; k < size_; ++k) {
        out[k] = node(k);
    }
    return out;
}

bool Grid::contains(const Point& x) const noexcept {
    const bool first = std::abs(x[0]) <= half_width_;
    return dim_ == 1 ? first && x[1] == 0.0 : first && std::abs(x[1]) <= half_width_;
}

SpaceTimeField::SpaceTimeField(Grid grid, std::vector<double> times, std::vector<double> values, double order)
    : grid_(std::move(grid)), times_(std::move(times)), values_(std::move(values)), order_(order) {
    if (times_.empty()) {
        throw PreconditionError("field needs at least one time level");
    }
    for (std::size_t m = 1; m < times_.size(); ++m) {
        if (!(times_[m] > times_[m - 1])) {
            throw PreconditionError("field times must be strictly increasing");
        }
    }
    if (values_.size() != times_.size() * grid_.size()) {
        throw PreconditionError("field values do not match grid size times level count");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw PreconditionError("field values must be finite");
        }
    }
}

double SpaceTimeField::max_abs() const {
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

std::vector<double> uniform_times(double t_start, double t_end, double dt) {
    if (!(dt > 0.0) || !(t_end > t_start)) {
        throw PreconditionError("uniform_times: need dt > 0 and t_end > t_start");
    }
    // The step is adjusted so that the last level lands exactly on t_end.
    const auto steps = static_cast<std::size_t>(std::ceil((t_end - t_start) / dt - 1e-9));
    const double step = (t_end - t_start) / static_cast<double>(steps);
    std::vector<double> times(steps + 1);
    for (std::size_t m = 0; m <= steps; ++m) {
        times[m] = t_start + static_cast<double>(m) * step;
    }
    times.back() = t_end;
    return times;
}

std::string ParabolicCylinder::describe() const {
    std::ostringstream os;
    const auto [a, b] = time_interval();
    os << (orientation == Orientation::backward ? "U-" : "U+") << "(x0=(" << center[0] << "," << center[1]
       << "), r=" << radius << ", t in (" << a << ", " << b << "))";
    return os.str();
}

ParabolicCylinder cylinder(const Point& x0, double t0, double r, double s, Orientation orientation) {
    if (!(r > 0.0)) {
        throw PreconditionError("cylinder radius must be positive");
    }
    if (!(s > 0.0 && s < 1.0)) {
        throw PreconditionError("cylinder order s must lie in (0, 1)");
    }
    return ParabolicCylinder{x0, r, t0, orientation, s};
}

std::vector<std::size_t> levels_in_window(const SpaceTimeField& f, double a, double b) {
    const double eps = time_slack(f);
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < f.levels(); ++m) {
        const double t = f.times()[m];
        if (t > a + eps && t <= b + eps) {
            out.push_back(m);
        }
    }
    return out;
}

std::vector<std::size_t> levels_in_closed_window(const SpaceTimeField& f, double a, double b) {
    const double eps = time_slack(f);
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < f.levels(); ++m) {
        const double t = f.times()[m];
        if (t >= a - eps && t <= b + eps) {
            out.push_back(m);
        }
    }
    return out;
}

std::vector<std::size_t> nodes_in_ball(const Grid& grid, const Point& x0, double r) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (distance(grid.node(k), x0) < r) {
            out.push_back(k);
        }
    }
    return out;
}

Extrema region_extrema(const SpaceTimeField& f, const Point& x0, double r, double a, double b) {
    const auto levels = levels_in_window(f, a, b);
    const auto nodes = nodes_in_ball(f.grid(), x0, r);
    if (levels.empty() || nodes.empty()) {
        std::ostringstream os;
        os << "empty intersection of B_" << r << "((" << x0[0] << "," << x0[1] << ")) x (" << a << ", " << b
           << "] with the field (" << nodes.size() << " nodes, " << levels.size() << " levels)";
        throw GeometryError(os.str());
    }
    Extrema e{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0.0, 0};
    double sum = 0.0;
    for (auto m : levels) {
        const auto lvl = f.level(m);
        for (auto k : nodes) {
            const double v = lvl[k];
            e.sup = std::max(e.sup, v);
            e.inf = std::min(e.inf, v);
            sum += v;
        }
    }
    e.node_count = levels.size() * nodes.size();
    e.mean = sum / static_cast<double>(e.node_count);
    return e;
}

Extrema field_extrema(const SpaceTimeField& f, const ParabolicCylinder& c) {
    const auto [a, b] = c.time_interval();
    try {
        return region_extrema(f, c.center, c.radius, a, b);
    } catch (const GeometryError&) {
        throw GeometryError("cylinder " + c.describe() + " does not intersect the field's grid and time range");
    }
}

}  // namespace nlpar
