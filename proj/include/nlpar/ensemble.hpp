#pragma once

#include "nlpar/exterior.hpp"
#include "nlpar/geometry.hpp"
#include "nlpar/kernels.hpp"
#include "nlpar/report.hpp"
#include "nlpar/solver.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nlpar {

/// SplitMix64 step, used to derive independent member seeds from one run seed.
std::uint64_t splitmix64(std::uint64_t x);

/// Theorem identifiers accepted by run_checks.
const std::vector<std::string>& theorem_ids();

/// Geometry shared by the checks. Defaults follow the admissible ranges:
/// α is filled in from the kernel order when left NaN.
struct CheckGeometry {
    Point x0{0.0, 0.0};
    double r = 1.0;
    double R = 3.0;
    double t0 = 2.0;
    double alpha = VerificationReport::nan;
    double theta = 0.5;
    double delta = 0.5;
    double epsilon = 0.5;
};

/// Initial data generator.
///   "bumps":       1-3 Gaussian bumps with positive amplitudes (seeded)
///   "mixed_bumps": 2-3 Gaussian bumps, one of them negative (seeded)
///   "constant":    u ≡ level
///   "poisson":     p(x, offset), the Cauchy-Poisson kernel (s = 1/2)
///   "gaussian":    level exp(-|x - center|^2 / (2 width^2))
struct InitialSpec {
    std::string kind = "bumps";
    double level = 1.0;
    double offset = 1.0;
    double center = 0.0;
    double width = 1.0;
};

/// Exterior data generator.
///   "zero", "constant" (level), "poisson" (offset),
///   "decaying":  A (1 + |y|^2)^{γ/2}, A in [amplitude_min, amplitude_max], γ in [gamma_min, gamma_max] (seeded)
///   "annulus":   level on inner <= |y| <= outer, with `base` added everywhere
///   "negative_annulus": decaying data minus a seeded mass M in [mass_min, mass_max] on the annulus
///   "linear_in_time": t (1 + |y|)^γ with γ = gamma_max
struct ExteriorSpec {
    std::string kind = "decaying";
    double level = 1.0;
    double offset = 1.0;
    double amplitude_min = 0.0;
    double amplitude_max = 0.2;
    double gamma_min = -2.0;
    double gamma_max = -0.5;
    double inner = 10.0;
    double outer = 14.0;
    double base = 0.0;
    double mass_min = 0.0;
    double mass_max = 1.0;
};

/// Continuous data of one ensemble member, sampled on each resolution.
struct MemberData {
    std::function<double(const Point&)> initial;
    ExteriorData exterior;
    std::string description;
};

MemberData make_member(const InitialSpec& init, const ExteriorSpec& ext, std::uint64_t seed);

/// Problem parameters of one solve, without the data.
struct Discretization {
    double half_width = 8.0;
    int nodes = 256;
    double dt = 1.0 / 64.0;
    double t_start = 0.0;
    double t_end = 4.0;
    TimeScheme scheme = TimeScheme::implicit_euler;
};

struct ResultRow {
    VerificationReport report;
    std::size_t member_id = 0;
    int N = 0;
    double dt = 0.0;
    double s = 0.0;
    double lambda = 0.0;
    std::string error;
};

/// Gate on the weak form: relative residuals of the battery must be within
/// (h + dt). Returns the largest |relative residual|.
struct ResidualGate {
    double max_abs_relative;
    double tolerance;
    bool subsolution;
    bool supersolution;
};

ResidualGate residual_gate(const SpaceTimeField& f, const KernelSpec& kernel, const ExteriorData& ext,
                           std::uint64_t seed);

/// Runs the requested checks on a solved field. Failures of individual checks
/// are captured as rows with `error` set and pass = false.
/// Positivity hypotheses are checked with tolerance `negativity_tol`.
std::vector<ResultRow> run_checks(const SpaceTimeField& f, const KernelSpec& kernel, const ExteriorData& ext,
                                  const CheckGeometry& geometry, const std::vector<std::string>& theorems,
                                  std::size_t member_id, std::uint64_t seed, double negativity_tol);

/// max |u_coarse - I u_fine| over coarse nodes and the coarse levels that the
/// fine field also stores; I is linear interpolation in space.
double refinement_difference(const SpaceTimeField& coarse, const SpaceTimeField& fine);

/// Solves one member at the base resolution and, when `refine` is set, at
/// (2N, dt/2); refinement ratios are attached to the base rows. The
/// positivity tolerance is 10 times the scheme error estimate: the measured
/// difference between the two resolutions when refining, the a priori
/// (h + dt) max|u| otherwise.
std::vector<ResultRow> run_member(const KernelSpec& kernel, const Discretization& disc, const MemberData& member,
                                  const CheckGeometry& geometry, const std::vector<std::string>& theorems,
                                  std::size_t member_id, std::uint64_t seed, bool refine);

struct EnsembleSpec {
    KernelSpec kernel;
    Discretization discretization;
    InitialSpec initial;
    ExteriorSpec exterior;
    CheckGeometry geometry;
    std::vector<std::string> theorems;
    std::size_t count = 20;
    std::uint64_t seed = 1;
    bool refine = true;
    unsigned jobs = 1;
};

/// Runs every member (concurrently up to `jobs`) and returns rows ordered by
/// member index, then theorem order.
std::vector<ResultRow> estimate_constants(const EnsembleSpec& spec);

struct TheoremSummary {
    std::string theorem_id;
    std::size_t rows = 0;
    std::size_t failures = 0;
    double max_C = 0.0;
    double median_C = 0.0;
    double min_refinement_ratio = VerificationReport::nan;
    double max_refinement_ratio = VerificationReport::nan;
};

std::vector<TheoremSummary> summarize(const std::vector<ResultRow>& rows);

/// Column header of results.csv.
const std::string& results_header();
/// results.csv contents: header plus one line per row, numbers in shortest round-trip form.
std::string results_csv(const std::vector<ResultRow>& rows);

}  // namespace nlpar
