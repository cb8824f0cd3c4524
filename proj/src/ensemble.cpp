#include "nlpar/ensemble.hpp"

#include "nlpar/analysis.hpp"
#include "nlpar/error.hpp"
#include "nlpar/field_io.hpp"
#include "nlpar/oracles.hpp"
#include "nlpar/tails.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace nlpar {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

const std::vector<std::string>& theorem_ids() {
    static const std::vector<std::string> ids{"harnack",          "weak_harnack",           "local_boundedness",
                                              "local_boundedness_signed", "tail_sup_by_tail", "tail_sup_by_tail_minus",
                                              "tail_plus_by_minus"};
    return ids;
}

namespace {

struct Bump {
    double amplitude;
    double center;
    double width;
};

std::function<double(const Point&)> bump_sum(std::vector<Bump> bumps) {
    return [bumps = std::move(bumps)](const Point& x) {
        double v = 0.0;
        for (const auto& b : bumps) {
            const double d = (x[0] - b.center) / b.width;
            v += b.amplitude * std::exp(-0.5 * d * d);
        }
        return v;
    };
}

}  // namespace

MemberData make_member(const InitialSpec& init, const ExteriorSpec& ext, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double a, double b) { return a + (b - a) * unit(rng); };
    MemberData m;
    std::ostringstream desc;

    if (init.kind == "bumps" || init.kind == "mixed_bumps") {
        const bool mixed = init.kind == "mixed_bumps";
        const int count = mixed ? 2 + static_cast<int>(rng() % 2) : 1 + static_cast<int>(rng() % 3);
        std::vector<Bump> bumps;
        for (int k = 0; k < count; ++k) {
            Bump b{uniform(0.5, 2.0), uniform(-2.0, 2.0), uniform(0.5, 1.5)};
            if (mixed && k == 0) {
                b.amplitude = -uniform(0.5, 1.5);
            }
            bumps.push_back(b);
        }
        desc << init.kind << "(" << count << ")";
        m.initial = bump_sum(std::move(bumps));
    } else if (init.kind == "constant") {
        const double c = init.level;
        m.initial = [c](const Point&) { return c; };
        desc << "constant(" << c << ")";
    } else if (init.kind == "poisson") {
        const double offset = init.offset;
        m.initial = [offset](const Point& x) { return oracle::fractional_heat_kernel(1, 0.5, x, offset); };
        desc << "poisson(" << offset << ")";
    } else if (init.kind == "gaussian") {
        m.initial = bump_sum({Bump{init.level, init.center, init.width}});
        desc << "gaussian";
    } else {
        throw ConfigError("unknown initial data kind '" + init.kind + "'");
    }

    desc << " / ";
    if (ext.kind == "zero") {
        m.exterior = ExteriorData::zero();
    } else if (ext.kind == "constant") {
        m.exterior = ExteriorData::constant(ext.level);
    } else if (ext.kind == "poisson") {
        m.exterior = ExteriorData::poisson_kernel(ext.offset);
    } else if (ext.kind == "decaying" || ext.kind == "negative_annulus") {
        const double a = uniform(ext.amplitude_min, ext.amplitude_max);
        const double g = uniform(ext.gamma_min, ext.gamma_max);
        m.exterior = ExteriorData::power_decay(a, g);
        if (ext.kind == "negative_annulus") {
            const double mass = uniform(ext.mass_min, ext.mass_max);
            m.exterior = m.exterior.plus(ExteriorData::annulus(ext.inner, ext.outer, -mass));
        }
    } else if (ext.kind == "annulus") {
        m.exterior = ExteriorData::annulus(ext.inner, ext.outer, ext.level);
        if (ext.base != 0.0) {
            m.exterior = m.exterior.shifted(ext.base);
        }
    } else if (ext.kind == "linear_in_time") {
        m.exterior = ExteriorData::linear_in_time(ext.gamma_max);
    } else {
        throw ConfigError("unknown exterior data kind '" + ext.kind + "'");
    }
    desc << m.exterior.name;
    m.description = desc.str();
    return m;
}

ResidualGate residual_gate(const SpaceTimeField& f, const KernelSpec& kernel, const ExteriorData& ext,
                           std::uint64_t seed) {
    const WeakForm form(f, kernel, ext);
    const auto battery = bump_battery(f.grid(), f.t_first(), f.t_last(), seed);
    const auto times = f.times();
    const double dt = times.size() > 1 ? times[1] - times[0] : 0.0;
    const double tol = f.grid().spacing() + dt;
    const ResidualClassification c = classify(form, battery, tol);
    return {std::max(std::abs(c.max_relative), std::abs(c.min_relative)), tol, c.subsolution, c.supersolution};
}

std::vector<ResultRow> run_checks(const SpaceTimeField& f, const KernelSpec& kernel, const ExteriorData& ext,
                                  const CheckGeometry& geometry, const std::vector<std::string>& theorems,
                                  std::size_t member_id, std::uint64_t seed, double negativity_tol) {
    const double s = kernel.order();
    const double alpha = std::isnan(geometry.alpha) ? default_alpha(s) : geometry.alpha;
    const CheckGeometry& g = geometry;
    std::optional<ResidualGate> gate;
    std::string gate_error;
    try {
        gate = residual_gate(f, kernel, ext, seed);
    } catch (const std::exception& e) {
        gate_error = e.what();
    }
    std::vector<ResultRow> rows;
    for (const auto& id : theorems) {
        ResultRow row;
        row.member_id = member_id;
        row.N = f.grid().nodes_per_axis();
        const auto times = f.times();
        row.dt = times.size() > 1 ? times[1] - times[0] : 0.0;
        row.s = s;
        row.lambda = kernel.lambda();
        row.report.theorem_id = id;
        try {
            bool need_sub = false;
            bool need_super = false;
            if (id == "harnack") {
                row.report = verify_harnack(f, ext, g.x0, g.r, g.R, g.t0, alpha, negativity_tol);
                need_sub = need_super = true;
            } else if (id == "weak_harnack") {
                row.report = verify_weak_harnack(f, ext, g.x0, g.r, g.R, g.t0, negativity_tol);
                need_super = true;
            } else if (id == "local_boundedness") {
                row.report = verify_local_boundedness(f, ext, g.x0, g.r, g.t0, g.theta, g.delta);
                need_sub = true;
            } else if (id == "local_boundedness_signed") {
                row.report =
                    verify_local_boundedness_signed(f, ext, g.x0, g.r, g.R, g.t0, g.theta, g.delta, negativity_tol);
                need_sub = true;
            } else if (id == "tail_sup_by_tail") {
                row.report = check_supTail_by_Tail(f, ext, g.x0, g.r, g.t0, g.epsilon, negativity_tol);
                need_sub = true;
            } else if (id == "tail_sup_by_tail_minus") {
                row.report = check_supTail_by_Tail_minus(f, ext, g.x0, g.r, g.t0, g.epsilon);
                need_super = true;
            } else if (id == "tail_plus_by_minus") {
                row.report = check_tail_plus_by_minus(f, ext, g.x0, g.r, g.R, g.t0, negativity_tol);
                need_sub = need_super = true;
            } else {
                throw ConfigError("unknown theorem id '" + id + "'");
            }
            if (!gate) {
                throw Error("weak-form residual gate could not be evaluated: " + gate_error);
            }
            if ((need_sub && !gate->subsolution) || (need_super && !gate->supersolution)) {
                std::ostringstream os;
                os << "weak-form residual gate failed: max relative residual " << gate->max_abs_relative
                   << " exceeds " << gate->tolerance;
                row.report.note = os.str();
                row.report.pass = false;
            }
        } catch (const std::exception& e) {
            row.error = e.what();
            row.report.theorem_id = id;
            row.report.pass = false;
            row.report.C_emp = VerificationReport::nan;
        }
        if (std::isnan(row.report.alpha) && id == "harnack") {
            row.report.alpha = alpha;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double refinement_difference(const SpaceTimeField& coarse, const SpaceTimeField& fine) {
    const Grid& gc = coarse.grid();
    const Grid& gf = fine.grid();
    if (gc.dim() != 1 || gf.dim() != 1) {
        throw UnsupportedError("refinement_difference is implemented for n = 1 only");
    }
    const auto tc = coarse.times();
    const auto tf = fine.times();
    double worst = 0.0;
    std::size_t j = 0;
    for (std::size_t m = 0; m < tc.size(); ++m) {
        while (j < tf.size() && tf[j] < tc[m] - 1e-9) {
            ++j;
        }
        if (j == tf.size() || std::abs(tf[j] - tc[m]) > 1e-9) {
            continue;
        }
        const auto uc = coarse.level(m);
        const auto uf = fine.level(j);
        for (int i = 0; i < gc.nodes_per_axis(); ++i) {
            const double x = gc.coordinate(i);
            const double pos = (x + gf.half_width()) / gf.spacing();
            const int k = std::clamp(static_cast<int>(std::floor(pos)), 0, gf.nodes_per_axis() - 2);
            const double w = pos - k;
            const double v = (1.0 - w) * uf[static_cast<std::size_t>(k)] + w * uf[static_cast<std::size_t>(k) + 1];
            worst = std::max(worst, std::abs(uc[static_cast<std::size_t>(i)] - v));
        }
    }
    return worst;
}

namespace {

SpaceTimeField solve_member(const KernelSpec& kernel, const Discretization& disc, const MemberData& member, int nodes,
                            double dt) {
    const Grid grid(1, disc.half_width, nodes);
    std::vector<double> initial(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        initial[i] = member.initial(grid.node(i));
    }
    return solve(SolveSpec{kernel, grid, std::move(initial), member.exterior, disc.t_start, disc.t_end, dt, disc.scheme});
}

}  // namespace

std::vector<ResultRow> run_member(const KernelSpec& kernel, const Discretization& disc, const MemberData& member,
                                  const CheckGeometry& geometry, const std::vector<std::string>& theorems,
                                  std::size_t member_id, std::uint64_t seed, bool refine) {
    const SpaceTimeField coarse = solve_member(kernel, disc, member, disc.nodes, disc.dt);
    if (!refine) {
        const double tol = 10.0 * scheme_error_estimate(coarse);
        return run_checks(coarse, kernel, member.exterior, geometry, theorems, member_id, seed, tol);
    }
    const SpaceTimeField fine = solve_member(kernel, disc, member, 2 * disc.nodes, 0.5 * disc.dt);
    const double tol = 10.0 * refinement_difference(coarse, fine);
    auto rows = run_checks(coarse, kernel, member.exterior, geometry, theorems, member_id, seed, tol);
    const auto fine_rows = run_checks(fine, kernel, member.exterior, geometry, theorems, member_id, seed, tol);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].error.empty() && !fine_rows[k].error.empty()) {
            rows[k].error = "refined run: " + fine_rows[k].error;
        }
        attach_refinement(rows[k].report, fine_rows[k].report);
        if (rows[k].report.note.empty()) {
            rows[k].report.note = fine_rows[k].report.note;
        }
    }
    return rows;
}

std::vector<ResultRow> estimate_constants(const EnsembleSpec& spec) {
    std::vector<std::vector<ResultRow>> per_member(spec.count);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t k = next++; k < spec.count; k = next++) {
            const std::uint64_t seed = splitmix64(spec.seed ^ static_cast<std::uint64_t>(k));
            try {
                const MemberData member = make_member(spec.initial, spec.exterior, seed);
                per_member[k] = run_member(spec.kernel, spec.discretization, member, spec.geometry, spec.theorems, k,
                                           seed, spec.refine);
            } catch (const std::exception& e) {
                std::vector<ResultRow> rows;
                for (const auto& id : spec.theorems) {
                    ResultRow row;
                    row.report.theorem_id = id;
                    row.member_id = k;
                    row.N = spec.discretization.nodes;
                    row.dt = spec.discretization.dt;
                    row.s = spec.kernel.order();
                    row.lambda = spec.kernel.lambda();
                    row.error = e.what();
                    rows.push_back(std::move(row));
                }
                per_member[k] = std::move(rows);
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(spec.jobs, static_cast<unsigned>(spec.count)));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    std::vector<ResultRow> rows;
    for (auto& member_rows : per_member) {
        for (auto& row : member_rows) {
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<TheoremSummary> summarize(const std::vector<ResultRow>& rows) {
    std::vector<TheoremSummary> out;
    std::map<std::string, std::size_t> index;
    std::map<std::string, std::vector<double>> values;
    for (const auto& row : rows) {
        const auto& id = row.report.theorem_id;
        if (!index.count(id)) {
            index[id] = out.size();
            out.push_back(TheoremSummary{id});
        }
        TheoremSummary& s = out[index[id]];
        ++s.rows;
        if (!row.report.pass) {
            ++s.failures;
        }
        if (std::isfinite(row.report.C_emp)) {
            values[id].push_back(row.report.C_emp);
            s.max_C = std::max(s.max_C, row.report.C_emp);
        }
        const double r = row.report.refinement_ratio;
        if (std::isfinite(r)) {
            s.min_refinement_ratio = std::isnan(s.min_refinement_ratio) ? r : std::min(s.min_refinement_ratio, r);
            s.max_refinement_ratio = std::isnan(s.max_refinement_ratio) ? r : std::max(s.max_refinement_ratio, r);
        }
    }
    for (auto& s : out) {
        auto& v = values[s.theorem_id];
        if (!v.empty()) {
            std::sort(v.begin(), v.end());
            const std::size_t n = v.size();
            s.median_C = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
        }
    }
    return out;
}

const std::string& results_header() {
    static const std::string header =
        "theorem_id,member_id,N,dt,s,lambda,alpha,theta,delta,lhs,rhs_inf,rhs_mean,rhs_tail,C_emp,refinement_ratio,pass";
    return header;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
    using io::format_double;
    std::ostringstream os;
    os << results_header() << "\n";
    for (const auto& row : rows) {
        const auto& r = row.report;
        os << r.theorem_id << "," << row.member_id << "," << row.N << "," << format_double(row.dt) << ","
           << format_double(row.s) << "," << format_double(row.lambda) << "," << format_double(r.alpha) << ","
           << format_double(r.theta) << "," << format_double(r.delta) << "," << format_double(r.lhs) << ","
           << format_double(r.rhs_inf) << "," << format_double(r.rhs_mean) << "," << format_double(r.rhs_tail) << ","
           << format_double(r.C_emp) << "," << format_double(r.refinement_ratio) << ","
           << (r.pass ? "true" : "false") << "\n";
    }
    return os.str();
}

}  // namespace nlpar
