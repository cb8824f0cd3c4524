// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include "nlpar/analysis.hpp"
#include "nlpar/config.hpp"
#include "nlpar/ensemble.hpp"
#include "nlpar/lemmas.hpp"
#include "nlpar/nonlocal_op.hpp"
#include "nlpar/oracles.hpp"
#include "nlpar/run.hpp"
#include "nlpar/solver.hpp"
#include "nlpar/tails.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

using namespace nlpar;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<double> sample_initial(const Grid& g, const std::function<double(const Point&)>& f) {
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        out[i] = f(g.node(i));
    }
    return out;
}

std::vector<KernelSpec> all_families(double s) {
    std::vector<KernelSpec> out{KernelSpec::fractional_laplacian(1, s), KernelSpec::constant_multiple(1, s, 2.0, 0.6)};
    for (const auto& name : modulation_names()) {
        const auto m = named_modulation(name);
        out.push_back(KernelSpec::modulated(1, s, std::max(m.upper, 1.0 / m.lower), m));
    }
    return out;
}

// Poisson-kernel evolution u(x, t) = p(x, t + 1) against the solver.
Outcome oracle_convergence() {
    Outcome o;
    const auto k = KernelSpec::fractional_laplacian(1, 0.5);
    double previous = std::numeric_limits<double>::infinity();
    for (auto [N, dt] : {std::pair{256, 1.0 / 64}, {512, 1.0 / 128}, {1024, 1.0 / 256}}) {
        const Grid g(1, 8.0, N);
        const auto u0 = sample_initial(g, [](const Point& x) { return oracle::fractional_heat_kernel(1, 0.5, x, 1.0); });
        const auto f = solve(SolveSpec{k, g, u0, ExteriorData::poisson_kernel(1.0), 0.0, 1.0, dt});
        double rel = 0.0;
        for (std::size_t m = 0; m < f.levels(); ++m) {
            const double tau = f.times()[m] + 1.0;
            const auto level = f.level(m);
            double err = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                err = std::max(err, std::abs(level[i] - oracle::fractional_heat_kernel(1, 0.5, g.node(i), tau)));
            }
            rel = std::max(rel, err * M_PI * tau);
        }
        o.detail += "N=" + std::to_string(N) + " err " + fmt("%.3e", rel) + "; ";
        o.pass = o.pass && rel < previous;
        previous = rel;
    }
    o.pass = o.pass && previous <= 0.02;
    return o;
}

Outcome constants_preserved() {
    Outcome o;
    double worst = 0.0;
    int runs = 0;
    for (double s : {0.25, 0.5, 0.8}) {
        for (const auto& k : all_families(s)) {
            for (auto scheme : {TimeScheme::implicit_euler, TimeScheme::crank_nicolson}) {
                const Grid g(1, 4.0, 96);
                const double c = -2.5;
                const auto f = solve(SolveSpec{k, g, std::vector<double>(g.size(), c), ExteriorData::constant(c), 0.0,
                                               100 * 0.04, 0.04, scheme});
                for (double v : f.values()) {
                    worst = std::max(worst, std::abs(v - c));
                }
                ++runs;
            }
        }
    }
    o.pass = worst <= 1e-12;
    o.detail = std::to_string(runs) + " runs of 100 steps, max deviation " + fmt("%.2e", worst);
    return o;
}

Outcome maximum_principle() {
    Outcome o;
    InitialSpec init;
    init.kind = "mixed_bumps";
    ExteriorSpec ext;
    const Discretization disc{.half_width = 8.0, .nodes = 256, .dt = 1.0 / 32, .t_start = 0.0, .t_end = 3.0};
    const Grid g(1, disc.half_width, disc.nodes);
    std::size_t violations = 0;
    for (std::uint64_t member = 0; member < 20; ++member) {
        const auto m = make_member(init, ext, splitmix64(100 + member));
        const auto k = KernelSpec::fractional_laplacian(1, member % 2 == 0 ? 0.4 : 0.7);
        const auto u0 = sample_initial(g, m.initial);
        double lo = *std::min_element(u0.begin(), u0.end());
        double hi = *std::max_element(u0.begin(), u0.end());
        // Exterior extremes over sampled radii and times.
        for (double t = 0.0; t <= disc.t_end; t += 0.25) {
            for (double rho = disc.half_width; rho < 1e4; rho *= 1.05) {
                for (double y : {rho, -rho}) {
                    const double v = m.exterior(Point{y, 0.0}, t);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
        }
        const auto f = solve(SolveSpec{k, g, u0, m.exterior, disc.t_start, disc.t_end, disc.dt});
        const double slack = 1e-12 * std::max(1.0, hi - lo);
        for (double v : f.values()) {
            violations += (v < lo - slack || v > hi + slack) ? 1 : 0;
        }
    }
    o.pass = violations == 0;
    o.detail = "20 members, " + std::to_string(violations) + " violations";
    return o;
}

Outcome symbol_normalization() {
    Outcome o;
    const Grid g(1, 8.0, 2048);
    for (double s : {0.3, 0.5, 0.7}) {
        double worst = 0.0;
        for (const auto& r : oracle::symbol_eigencheck(KernelSpec::fractional_laplacian(1, s), g, {0.5, 1.0, 2.0})) {
            worst = std::max(worst, std::abs(r.eigenvalue - r.symbol) / r.symbol);
        }
        o.pass = o.pass && worst <= 0.02;
        o.detail += "s=" + fmt("%.1f", s) + " max rel " + fmt("%.4f", worst) + "; ";
    }
    // Outside the gate: the h^{2-2s} consistency order shows near s = 1.
    double high = 0.0;
    for (const auto& r : oracle::symbol_eigencheck(KernelSpec::fractional_laplacian(1, 0.8), g, {0.5, 1.0, 2.0})) {
        high = std::max(high, std::abs(r.eigenvalue - r.symbol) / r.symbol);
    }
    o.detail += "(info: s=0.8 max rel " + fmt("%.4f", high) + ")";
    return o;
}

// Shared 20-member nonnegative ensemble for criteria 5 and 8.
const std::vector<ResultRow>& ensemble_rows() {
    static const std::vector<ResultRow> rows = [] {
        EnsembleSpec spec{.kernel = KernelSpec::fractional_laplacian(1, 0.5),
                          .discretization = Discretization{},
                          .initial = InitialSpec{},
                          .exterior = ExteriorSpec{},
                          .geometry = CheckGeometry{},
                          .theorems = theorem_ids(),
                          .count = 20,
                          .seed = 2024,
                          .refine = true,
                          .jobs = 1};
        return estimate_constants(spec);
    }();
    return rows;
}

Outcome stable_rows(const std::vector<std::string>& ids) {
    Outcome o;
    std::size_t rows = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double max_c = 0.0;
    for (const auto& row : ensemble_rows()) {
        if (std::find(ids.begin(), ids.end(), row.report.theorem_id) == ids.end()) {
            continue;
        }
        ++rows;
        const auto& r = row.report;
        const bool ok = row.error.empty() && r.pass && std::isfinite(r.C_emp) && refinement_stable(r.refinement_ratio);
        if (!ok) {
            o.pass = false;
            o.detail += "[member " + std::to_string(row.member_id) + " " + r.theorem_id + " C=" + fmt("%.3g", r.C_emp) +
                        " ratio=" + fmt("%.3g", r.refinement_ratio) + (row.error.empty() ? "" : " " + row.error) + "] ";
        }
        lo = std::min(lo, r.refinement_ratio);
        hi = std::max(hi, r.refinement_ratio);
        max_c = std::max(max_c, r.C_emp);
    }
    o.pass = o.pass && rows == 20 * ids.size();
    o.detail += std::to_string(rows) + " rows, max C_emp " + fmt("%.3f", max_c) + ", ratios in [" + fmt("%.3f", lo) +
                ", " + fmt("%.3f", hi) + "]";
    return o;
}

Outcome theorem_stability() {
    return stable_rows({"harnack", "weak_harnack", "local_boundedness", "local_boundedness_signed"});
}

// u = A v + M m, where v starts from 1 with zero exterior data and m starts
// from 0 with exterior data -1 on the annulus 40 <= |y| <= 60.
Outcome tail_necessity() {
    Outcome o;
    const auto k = KernelSpec::fractional_laplacian(1, 0.5);
    const double L = 20.0, t_end = 3.5, r = 1.0, R = 3.0, t0 = 2.0, alpha = 1.5;
    const double t1 = t0 + 2.0 * r - alpha * 0.5 * r;
    struct Pair {
        SpaceTimeField v;
        SpaceTimeField m;
    };
    auto basis = [&](int N, double dt) {
        const Grid g(1, L, N);
        return Pair{solve(SolveSpec{k, g, std::vector<double>(g.size(), 1.0), ExteriorData::zero(), 0.0, t_end, dt}),
                    solve(SolveSpec{k, g, std::vector<double>(g.size(), 0.0), ExteriorData::annulus(40.0, 60.0, -1.0),
                                    0.0, t_end, dt})};
    };
    auto combine = [](const Pair& p, double A, double M) {
        std::vector<double> values(p.v.values().size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            values[i] = A * p.v.values()[i] + M * p.m.values()[i];
        }
        return SpaceTimeField(p.v.grid(), std::vector<double>(p.v.times().begin(), p.v.times().end()), values, 0.5);
    };
    const Pair base = basis(640, 1.0 / 64);
    const Pair fine = basis(1280, 1.0 / 128);

    // Smallest initial level keeping u at 1% of A on B_R over the Harnack window at M = 100.
    auto margin = [&](double A) { return region_extrema(combine(base, A, 100.0), {0.0, 0.0}, R, t0 - r, t1).inf - 0.01 * A; };
    double a = 0.1, b = 100.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (a + b);
        (margin(mid) < 0.0 ? a : b) = mid;
    }
    const double A = b;

    double c_lo = std::numeric_limits<double>::infinity(), c_hi = 0.0;
    double ratio_first = 0.0, ratio_last = 0.0;
    o.detail = "A=" + fmt("%.4f", A) + "; ";
    for (double M : {1.0, 10.0, 100.0}) {
        const auto ext = ExteriorData::annulus(40.0, 60.0, -M);
        const auto u = combine(base, A, M);
        const auto u_fine = combine(fine, A, M);
        const double tol = 10.0 * refinement_difference(u, u_fine);
        auto rep = verify_harnack(u, ext, {0.0, 0.0}, r, R, t0, alpha, tol);
        const auto rep_fine = verify_harnack(u_fine, ext, {0.0, 0.0}, r, R, t0, alpha, tol);
        attach_refinement(rep, rep_fine);
        const double tail_free = rep.lhs / rep.rhs_inf;
        if (M == 1.0) {
            ratio_first = tail_free;
        }
        ratio_last = tail_free;
        c_lo = std::min(c_lo, rep.C_emp);
        c_hi = std::max(c_hi, rep.C_emp);
        o.pass = o.pass && rep.pass;
        o.detail += "M=" + fmt("%g", M) + " sup/inf " + fmt("%.3f", tail_free) + " C_emp " + fmt("%.3f", rep.C_emp) +
                    " ratio " + fmt("%.3f", rep.refinement_ratio) + "; ";
    }
    const double growth = ratio_last / ratio_first;
    const double change = c_hi / c_lo;
    o.pass = o.pass && growth >= 10.0 && change <= 2.0;
    o.detail += "growth " + fmt("%.1f", growth) + "x, C_emp change " + fmt("%.2f", change) + "x";
    return o;
}

Outcome lemma_suites() {
    Outcome o;
    const auto tuples = random_algebraic_tuples(100000, 7);
    const auto grid = constant_grid();
    std::string constants;
    for (double q : {1.5, 2.0, 3.0}) {
        const auto c = search_algebraic_constant(AlgebraicPart::i, q, tuples, grid);
        o.pass = o.pass && c.found && c.violations == 0;
        constants += fmt("%.3g", c.constant) + " ";
    }
    for (double q : {0.25, 0.5, 0.75}) {
        const auto c = search_algebraic_constant(AlgebraicPart::ii, q, tuples, grid);
        o.pass = o.pass && c.found && c.violations == 0;
        constants += fmt("%.3g", c.constant) + " ";
    }
    o.detail = "algebraic constants " + constants + "; ";

    // Poincaré (s = 1/2, cone weight) and Sobolev (s = 0.3) on bump snapshots at N and 2N.
    double p_lo = 1e300, p_hi = 0.0, s_lo = 1e300, s_hi = 0.0;
    for (std::uint64_t member = 0; member < 5; ++member) {
        const auto m = make_member(InitialSpec{}, ExteriorSpec{}, splitmix64(member));
        const Grid coarse(1, 8.0, 256), fine(1, 8.0, 512);
        const auto uc = sample_initial(coarse, m.initial);
        const auto uf = sample_initial(fine, m.initial);
        for (double x0 : {0.0, 1.0}) {
            const Point c{x0, 0.0};
            const auto pc = check_weighted_poincare(coarse, uc, c, 1.0, 0.5, PoincareWeight::cone);
            const auto pf = check_weighted_poincare(fine, uf, c, 1.0, 0.5, PoincareWeight::cone);
            const auto sc = check_sobolev(coarse, uc, c, 1.0, 0.3);
            const auto sf = check_sobolev(fine, uf, c, 1.0, 0.3);
            const double pr = pf.C_emp / pc.C_emp;
            const double sr = sf.C_emp / sc.C_emp;
            o.pass = o.pass && pc.pass && pf.pass && sc.pass && sf.pass && refinement_stable(pr) && refinement_stable(sr);
            p_lo = std::min(p_lo, pr);
            p_hi = std::max(p_hi, pr);
            s_lo = std::min(s_lo, sr);
            s_hi = std::max(s_hi, sr);
        }
    }
    o.detail += "Poincare ratios [" + fmt("%.3f", p_lo) + ", " + fmt("%.3f", p_hi) + "], Sobolev ratios [" +
                fmt("%.3f", s_lo) + ", " + fmt("%.3f", s_hi) + "]; ";

    std::vector<Point> samples;
    for (double x : {0.0, 0.5, 0.9, 2.0, 5.0, 10.0}) {
        samples.push_back(Point{x, 0.0});
    }
    for (double s : {0.3, 0.5}) {
        const auto phi = check_phi_eigenbounds(KernelSpec::fractional_laplacian(1, s), 1.0, samples, 1e-9);
        o.pass = o.pass && phi.pass && phi.spread <= 1.2;
        o.detail += "Phi spread s=" + fmt("%.1f", s) + " " + fmt("%.4f", phi.spread) + " ";
    }
    return o;
}

Outcome tail_lemmas() {
    Outcome o = stable_rows({"tail_sup_by_tail", "tail_sup_by_tail_minus", "tail_plus_by_minus"});
    const Grid g(1, 8.0, 256);
    const auto one = sample_field(g, uniform_times(0.0, 2.0, 1.0 / 16), 0.5, [](const Point&, double) { return 1.0; });
    const TailQuery q{{0.0, 0.0}, 1.0, 0.5, 1.5, TailTarget::absolute_value};
    const double avg = tail(one, ExteriorData::constant(1.0), q);
    const double sup = tail_sup(one, ExteriorData::constant(1.0), q);
    o.pass = o.pass && std::abs(avg - 2.0) <= 0.02 && std::abs(sup - 2.0) <= 0.02;
    o.detail += "; closed form Tail " + fmt("%.5f", avg) + ", Tail_inf " + fmt("%.5f", sup);
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
    Outcome o;
    const std::string text = "[run]\ncommand = estimate\nseed = 99\nmembers = 6\nrefine = true\n";
    std::vector<std::string> csv;
    std::vector<std::string> hashes;
    for (unsigned jobs : {1u, 3u}) {
        auto c = parse_config(text);
        c.jobs = jobs;
        c.output.directory = fs::temp_directory_path() / ("nlpar_acceptance_" + std::to_string(jobs));
        fs::remove_all(c.output.directory);
        std::ostringstream log;
        const int code = run(c, log);
        o.pass = o.pass && code != exit_error;
        csv.push_back(slurp(c.output.directory / "results.csv"));
        hashes.push_back(c.hash());
    }
    o.pass = o.pass && !csv[0].empty() && csv[0] == csv[1] && hashes[0] == hashes[1];
    o.detail = std::to_string(csv[0].size()) + " bytes, identical: " + (csv[0] == csv[1] ? "yes" : "no");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle convergence", oracle_convergence},
        {"exactness on constants", constants_preserved},
        {"discrete maximum principle", maximum_principle},
        {"symbol normalization", symbol_normalization},
        {"theorem stability", theorem_stability},
        {"tail necessity probe", tail_necessity},
        {"lemma suites", lemma_suites},
        {"tail lemma checks", tail_lemmas},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu %-28s %s  %s (%.1f s)\n", i + 1, criteria[i].first.c_str(), out.pass ? "PASS" : "FAIL",
                    out.detail.c_str(), secs);
        std::fflush(stdout);
        failures += out.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
