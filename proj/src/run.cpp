#include "nlpar/run.hpp"

#include "nlpar/error.hpp"
#include "nlpar/field_io.hpp"
#include "nlpar/lemmas.hpp"
#include "nlpar/nonlocal_op.hpp"
#include "nlpar/oracles.hpp"
#include "nlpar/tails.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace nlpar {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw Error("write failed for " + path.string());
    }
}

void write_field(const RunConfig& c, const SpaceTimeField& f, const std::string& stem) {
    const fs::path dir = c.output.directory;
    if (c.output.binary) {
        io::save(dir / (stem + ".bin"), f);
    }
    if (c.output.csv) {
        io::save(dir / (stem + ".csv"), f);
    }
}

json base_summary(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["seed"] = c.seed;
    j["config_hash"] = c.hash();
    j["refine"] = c.refine;
    j["kernel"] = {{"family", c.kernel.family},
                   {"dimension_n", c.kernel.dim},
                   {"order_s", c.kernel.order},
                   {"lambda", c.kernel.build().lambda()},
                   {"modulation", c.kernel.family == "modulated" ? c.kernel.modulation : "none"}};
    j["grid"] = {{"half_width_L", c.discretization.half_width}, {"nodes_N", c.discretization.nodes}};
    j["time"] = {{"time_start", c.discretization.t_start},
                 {"time_end", c.discretization.t_end},
                 {"step_dt", c.discretization.dt},
                 {"scheme", to_string(c.discretization.scheme)}};
    return j;
}

Grid base_grid(const RunConfig& c, int factor = 1) {
    return Grid(c.kernel.dim, c.discretization.half_width, factor * c.discretization.nodes);
}

SpaceTimeField solve_data(const RunConfig& c, const KernelSpec& kernel, const MemberData& m, int factor) {
    const Grid grid = base_grid(c, factor);
    std::vector<double> initial(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        initial[i] = m.initial(grid.node(i));
    }
    return solve(SolveSpec{kernel, grid, std::move(initial), m.exterior, c.discretization.t_start,
                           c.discretization.t_end, c.discretization.dt / factor, c.discretization.scheme});
}

/// The single-member commands use member 0 of the ensemble the config describes.
std::uint64_t member_seed(const RunConfig& c) { return splitmix64(c.seed ^ 0ULL); }

int cmd_solve(const RunConfig& c, std::ostream& log, json& summary) {
    const KernelSpec kernel = c.kernel.build();
    const MemberData m = make_member(c.initial, c.exterior, member_seed(c));
    const SpaceTimeField f = solve_data(c, kernel, m, 1);
    write_field(c, f, "field");
    summary["member"] = m.description;
    summary["levels"] = f.levels();
    summary["max_abs"] = number(f.max_abs());
    log << "solved " << m.description << ": " << f.levels() << " levels, max|u| = " << f.max_abs() << "\n";
    if (c.refine) {
        const SpaceTimeField fine = solve_data(c, kernel, m, 2);
        write_field(c, fine, "field_refined");
        const double diff = refinement_difference(f, fine);
        summary["refinement_difference"] = number(diff);
        log << "refined run: max|u_N - u_2N| = " << diff << "\n";
    }
    return exit_pass;
}

int cmd_tail(const RunConfig& c, std::ostream& log, json& summary) {
    const KernelSpec kernel = c.kernel.build();
    const MemberData m = make_member(c.initial, c.exterior, member_seed(c));
    const SpaceTimeField f = solve_data(c, kernel, m, 1);
    write_field(c, f, "field");
    const auto& g = c.geometry;
    const double s = kernel.order();
    const double t1 = std::isnan(c.tail.t1) ? g.t0 - std::pow(g.r, 2.0 * s) : c.tail.t1;
    const double t2 = std::isnan(c.tail.t2) ? g.t0 : c.tail.t2;
    std::ostringstream csv;
    csv << "target,radius,t1,t2,tail,tail_sup,error_estimate\n";
    json rows = json::array();
    for (double radius : {g.r, g.R}) {
        for (TailTarget target : {TailTarget::positive_part, TailTarget::negative_part, TailTarget::absolute_value}) {
            const TailQuery q{g.x0, radius, t1, t2, target};
            const TailValue tv = tail_detailed(f, m.exterior, q);
            const double sup = tail_sup(f, m.exterior, q);
            csv << to_string(target) << "," << io::format_double(radius) << "," << io::format_double(t1) << ","
                << io::format_double(t2) << "," << io::format_double(tv.value) << "," << io::format_double(sup) << ","
                << io::format_double(tv.error_estimate) << "\n";
            rows.push_back({{"target", to_string(target)},
                            {"radius", radius},
                            {"tail", number(tv.value)},
                            {"tail_sup", number(sup)}});
            log << "Tail(" << to_string(target) << "; r=" << radius << ") = " << tv.value << ", sup form " << sup
                << "\n";
        }
    }
    write_text(fs::path(c.output.directory) / "tails.csv", csv.str());
    summary["member"] = m.description;
    summary["window"] = {t1, t2};
    summary["tails"] = rows;
    return exit_pass;
}

json theorem_summaries(const std::vector<ResultRow>& rows) {
    json out = json::array();
    for (const auto& s : summarize(rows)) {
        out.push_back({{"theorem_id", s.theorem_id},
                       {"rows", s.rows},
                       {"failures", s.failures},
                       {"max_C", number(s.max_C)},
                       {"median_C", number(s.median_C)},
                       {"min_refinement_ratio", number(s.min_refinement_ratio)},
                       {"max_refinement_ratio", number(s.max_refinement_ratio)}});
    }
    return out;
}

json row_problems(const std::vector<ResultRow>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        if (!r.error.empty() || !r.report.note.empty() || r.report.anomaly) {
            out.push_back({{"member_id", r.member_id},
                           {"theorem_id", r.report.theorem_id},
                           {"error", r.error},
                           {"note", r.report.note},
                           {"anomaly", r.report.anomaly}});
        }
    }
    return out;
}

int report_rows(const RunConfig& c, const std::vector<ResultRow>& rows, std::ostream& log, json& summary) {
    write_text(fs::path(c.output.directory) / "results.csv", results_csv(rows));
    std::size_t failures = 0;
    for (const auto& r : rows) {
        failures += r.report.pass ? 0 : 1;
    }
    summary["rows"] = rows.size();
    summary["failures"] = failures;
    summary["theorems"] = theorem_summaries(rows);
    summary["problems"] = row_problems(rows);
    for (const auto& s : summarize(rows)) {
        log << s.theorem_id << ": " << s.rows - s.failures << "/" << s.rows << " pass, max C_emp " << s.max_C
            << ", median " << s.median_C << "\n";
    }
    return failures == 0 ? exit_pass : exit_verification_failure;
}

int cmd_verify(const RunConfig& c, std::ostream& log, json& summary) {
    const KernelSpec kernel = c.kernel.build();
    const std::uint64_t seed = member_seed(c);
    const MemberData m = make_member(c.initial, c.exterior, seed);
    const SpaceTimeField f = solve_data(c, kernel, m, 1);
    write_field(c, f, "field");
    summary["member"] = m.description;
    const auto rows = run_member(kernel, c.discretization, m, c.geometry, c.theorems, 0, seed, c.refine);
    return report_rows(c, rows, log, summary);
}

int cmd_estimate(const RunConfig& c, std::ostream& log, json& summary) {
    const EnsembleSpec spec = c.ensemble();
    summary["members"] = spec.count;
    const auto rows = estimate_constants(spec);
    return report_rows(c, rows, log, summary);
}

struct OracleError {
    double relative;
    SpaceTimeField field;
};

OracleError heat_kernel_error(const RunConfig& c, const KernelSpec& kernel, int factor) {
    const double offset = c.oracle.time_offset;
    const double t0 = c.discretization.t_start;
    MemberData m;
    m.initial = [&](const Point& x) { return oracle::fractional_heat_kernel(kernel.dim(), 0.5, x, offset + t0); };
    m.exterior = ExteriorData::poisson_kernel(offset);
    SpaceTimeField f = solve_data(c, kernel, m, factor);
    const auto last = f.level(f.levels() - 1);
    const double t = f.t_last();
    double err = 0.0;
    double peak = 0.0;
    for (std::size_t i = 0; i < f.grid().size(); ++i) {
        const double exact = oracle::fractional_heat_kernel(kernel.dim(), 0.5, f.grid().node(i), offset + t);
        err = std::max(err, std::abs(last[i] - exact));
        peak = std::max(peak, std::abs(exact));
    }
    return {err / peak, std::move(f)};
}

int cmd_oracle(const RunConfig& c, std::ostream& log, json& summary) {
    const KernelSpec kernel = c.kernel.build();
    if (kernel.family() != KernelFamily::fractional_laplacian) {
        throw UnsupportedError("oracle comparisons need the normalized fractional Laplacian");
    }
    const fs::path dir = c.output.directory;
    bool pass = true;
    summary["mode"] = c.oracle.mode;
    summary["tolerance"] = c.oracle.tolerance;
    if (c.oracle.mode == "symbol") {
        const auto rows = oracle::symbol_eigencheck(kernel, base_grid(c), c.oracle.frequencies);
        std::ostringstream csv;
        csv << "frequency,eigenvalue,symbol,relative_error\n";
        json out = json::array();
        for (const auto& r : rows) {
            const double rel = std::abs(r.eigenvalue - r.symbol) / r.symbol;
            pass = pass && rel <= c.oracle.tolerance;
            csv << io::format_double(r.frequency) << "," << io::format_double(r.eigenvalue) << ","
                << io::format_double(r.symbol) << "," << io::format_double(rel) << "\n";
            out.push_back({{"frequency", r.frequency}, {"relative_error", number(rel)}});
            log << "ξ = " << r.frequency << ": eigenvalue " << r.eigenvalue << ", symbol " << r.symbol << "\n";
        }
        write_text(dir / "oracle.csv", csv.str());
        summary["symbol"] = out;
    } else {
        if (std::abs(kernel.order() - 0.5) > 1e-12 || kernel.dim() != 1) {
            throw UnsupportedError("heat-kernel oracle runs need n = 1 and s = 1/2 (closed-form exterior data)");
        }
        const OracleError base = heat_kernel_error(c, kernel, 1);
        write_field(c, base.field, "field");
        std::ostringstream csv;
        csv << "x,numeric,exact,abs_error\n";
        const auto last = base.field.level(base.field.levels() - 1);
        for (std::size_t i = 0; i < base.field.grid().size(); ++i) {
            const Point x = base.field.grid().node(i);
            const double exact =
                oracle::fractional_heat_kernel(1, 0.5, x, c.oracle.time_offset + base.field.t_last());
            csv << io::format_double(x[0]) << "," << io::format_double(last[i]) << "," << io::format_double(exact)
                << "," << io::format_double(std::abs(last[i] - exact)) << "\n";
        }
        write_text(dir / "oracle.csv", csv.str());
        summary["relative_error"] = number(base.relative);
        pass = base.relative <= c.oracle.tolerance;
        log << "max-norm relative error " << base.relative << " (tolerance " << c.oracle.tolerance << ")\n";
        if (c.refine) {
            const OracleError fine = heat_kernel_error(c, kernel, 2);
            summary["refined_relative_error"] = number(fine.relative);
            const bool decreasing = fine.relative < base.relative;
            summary["error_decreases"] = decreasing;
            pass = pass && decreasing;
            log << "refined (2N, dt/2): " << fine.relative << (decreasing ? " (decreasing)" : " (NOT decreasing)")
                << "\n";
        }
    }
    summary["pass"] = pass;
    return pass ? exit_pass : exit_verification_failure;
}

struct LemmaRow {
    std::string lemma;
    double parameter;
    int N;
    double lhs;
    double rhs;
    double C_emp;
    double refinement_ratio;
    bool pass;
    std::string note;
};

LemmaRow paired(const std::string& name, double parameter, int N, const LemmaReport& base, const LemmaReport& fine) {
    double ratio = VerificationReport::nan;
    if (base.C_emp == 0.0 && fine.C_emp == 0.0) {
        ratio = 1.0;
    } else if (base.C_emp != 0.0) {
        ratio = fine.C_emp / base.C_emp;
    }
    const bool pass = base.pass && fine.pass && (base.degenerate || refinement_stable(ratio));
    return {name, parameter, N, base.lhs, base.rhs, base.C_emp, ratio, pass, base.degenerate ? "degenerate" : ""};
}

int cmd_lemma(const RunConfig& c, std::ostream& log, json& summary) {
    const KernelSpec kernel = c.kernel.build();
    const int n = kernel.dim();
    const double s = kernel.order();
    const auto& g = c.geometry;
    std::vector<LemmaRow> rows;

    const auto tuples = random_algebraic_tuples(c.lemma.tuples, c.seed);
    const auto grid = constant_grid();
    for (auto [part, qs] : {std::pair{AlgebraicPart::i, c.lemma.q_part_i}, {AlgebraicPart::ii, c.lemma.q_part_ii}}) {
        for (double q : qs) {
            const ConstantSearch cs = search_algebraic_constant(part, q, tuples, grid);
            std::ostringstream note;
            note << "violations " << cs.violations << "/" << cs.tuples << ", constant/rate " << cs.rate_ratio;
            rows.push_back({part == AlgebraicPart::i ? "algebraic_i" : "algebraic_ii", q, 0, VerificationReport::nan,
                            VerificationReport::nan, cs.found ? cs.constant : VerificationReport::nan,
                            VerificationReport::nan, cs.found && cs.violations == 0, note.str()});
        }
    }

    const MemberData m = make_member(c.initial, c.exterior, member_seed(c));
    auto snapshot = [&](const Grid& gr) {
        std::vector<double> v(gr.size());
        for (std::size_t i = 0; i < gr.size(); ++i) {
            v[i] = m.initial(gr.node(i));
        }
        return v;
    };
    const Grid coarse = base_grid(c, 1);
    const Grid fine = base_grid(c, 2);
    const auto u_coarse = snapshot(coarse);
    const auto u_fine = snapshot(fine);
    rows.push_back(paired("poincare_" + to_string(c.lemma.weight), g.r, coarse.nodes_per_axis(),
                          check_weighted_poincare(coarse, u_coarse, g.x0, g.r, s, c.lemma.weight),
                          check_weighted_poincare(fine, u_fine, g.x0, g.r, s, c.lemma.weight)));

    if (n > 2.0 * s) {
        rows.push_back(paired("sobolev_spatial", g.r, coarse.nodes_per_axis(),
                              check_sobolev(coarse, u_coarse, g.x0, g.r, s), check_sobolev(fine, u_fine, g.x0, g.r, s)));
        if (n == 1) {
            const SpaceTimeField f1 = solve_data(c, kernel, m, 1);
            const SpaceTimeField f2 = solve_data(c, kernel, m, 2);
            const double t1 = g.t0 - std::pow(g.r, 2.0 * s);
            rows.push_back(paired("sobolev_parabolic", g.r, coarse.nodes_per_axis(),
                                  check_sobolev_parabolic(f1, g.x0, g.r, t1, g.t0),
                                  check_sobolev_parabolic(f2, g.x0, g.r, t1, g.t0)));
        }
    } else {
        rows.push_back({"sobolev_spatial", g.r, coarse.nodes_per_axis(), VerificationReport::nan,
                        VerificationReport::nan, VerificationReport::nan, VerificationReport::nan, true,
                        "not applicable: the embedding needs n > 2s"});
    }

    std::vector<Point> samples;
    for (double x : c.lemma.phi_samples) {
        samples.push_back(Point{x, 0.0});
    }
    const PhiEigenReport phi = check_phi_eigenbounds(kernel, c.lemma.phi_radius, samples, 1e-8);
    for (const auto& rr : phi.radii) {
        rows.push_back({"phi_eigenbound", rr.radius, 0, VerificationReport::nan, VerificationReport::nan, rr.c1,
                        phi.spread, phi.pass, ""});
    }

    std::ostringstream csv;
    csv << "lemma,parameter,N,lhs,rhs,C_emp,refinement_ratio,pass,note\n";
    bool pass = true;
    json out = json::array();
    for (const auto& r : rows) {
        pass = pass && r.pass;
        csv << r.lemma << "," << io::format_double(r.parameter) << "," << r.N << "," << io::format_double(r.lhs) << ","
            << io::format_double(r.rhs) << "," << io::format_double(r.C_emp) << ","
            << io::format_double(r.refinement_ratio) << "," << (r.pass ? "true" : "false") << "," << r.note << "\n";
        out.push_back({{"lemma", r.lemma},
                       {"parameter", r.parameter},
                       {"C_emp", number(r.C_emp)},
                       {"refinement_ratio", number(r.refinement_ratio)},
                       {"pass", r.pass}});
        log << r.lemma << " (" << r.parameter << "): C_emp " << r.C_emp << (r.pass ? " pass" : " FAIL")
            << (r.note.empty() ? "" : ", " + r.note) << "\n";
    }
    write_text(fs::path(c.output.directory) / "lemmas.csv", csv.str());
    summary["lemmas"] = out;
    summary["phi_spread"] = number(phi.spread);
    summary["phi_c2"] = number(phi.c2_emp);
    return pass ? exit_pass : exit_verification_failure;
}

}  // namespace

int run(const RunConfig& config, std::ostream& log) {
    const fs::path dir = config.output.directory;
    try {
        fs::create_directories(dir);
        fs::remove(dir / failure_marker);
    } catch (const fs::filesystem_error& e) {
        log << "error: " << e.what() << "\n";
        return exit_error;
    }
    try {
        validate(config);
        json summary = base_summary(config);
        int code = exit_error;
        if (config.command == "solve") {
            code = cmd_solve(config, log, summary);
        } else if (config.command == "tail") {
            code = cmd_tail(config, log, summary);
        } else if (config.command == "verify") {
            code = cmd_verify(config, log, summary);
        } else if (config.command == "estimate") {
            code = cmd_estimate(config, log, summary);
        } else if (config.command == "oracle") {
            code = cmd_oracle(config, log, summary);
        } else if (config.command == "lemma-check") {
            code = cmd_lemma(config, log, summary);
        }
        summary["exit_code"] = code;
        write_text(dir / "summary.json", summary.dump(2) + "\n");
        return code;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        try {
            write_text(dir / failure_marker, std::string(e.what()) + "\n");
        } catch (const std::exception&) {
        }
        return exit_error;
    }
}

}  // namespace nlpar
