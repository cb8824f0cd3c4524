#pragma once

#include "nlpar/ensemble.hpp"
#include "nlpar/lemmas.hpp"
#include "nlpar/tails.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nlpar {

struct KernelConfig {
    std::string family = "fractional_laplacian";
    int dim = 1;
    double order = 0.5;
    /// Unset means the smallest admissible value for the fractional Laplacian.
    std::optional<double> lambda;
    double multiple = 1.0;
    std::string modulation = "oscillating";

    KernelSpec build() const;
};

struct TailConfig {
    /// NaN defaults: t1 = t0 - r^{2s}, t2 = t0.
    double t1 = VerificationReport::nan;
    double t2 = VerificationReport::nan;
};

struct OracleConfig {
    /// "heat_kernel" (Poisson-kernel evolution, s = 1/2) or "symbol" (plane-wave eigenvalues).
    std::string mode = "heat_kernel";
    double time_offset = 1.0;
    std::vector<double> frequencies{0.5, 1.0, 2.0};
    double tolerance = 0.02;
};

struct LemmaConfig {
    std::size_t tuples = 100000;
    std::vector<double> q_part_i{1.5, 2.0, 3.0};
    std::vector<double> q_part_ii{0.25, 0.5, 0.75};
    PoincareWeight weight = PoincareWeight::cone;
    /// Φ_r is checked at r/2, r and 2r; samples are |x| in units of the radius,
    /// away from the plateau edge and the sign change of LΦ near 1.6.
    double phi_radius = 1.0;
    std::vector<double> phi_samples{0.0, 0.5, 0.9, 2.0, 5.0, 10.0};
};

struct OutputConfig {
    std::filesystem::path directory = "out";
    bool binary = true;
    bool csv = true;
};

/// Fully resolved run configuration. Sections of the INI text:
/// [run] [kernel] [grid] [time] [initial] [exterior] [geometry] [tail] [oracle] [lemma] [output].
struct RunConfig {
    std::string command = "verify";
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    bool refine = false;
    std::size_t count = 20;
    std::vector<std::string> theorems = theorem_ids();

    KernelConfig kernel;
    Discretization discretization;
    InitialSpec initial;
    ExteriorSpec exterior;
    CheckGeometry geometry;
    TailConfig tail;
    OracleConfig oracle;
    LemmaConfig lemma;
    OutputConfig output;

    /// Every resolved setting as sorted `section.key = value` lines, except
    /// run.jobs and output.directory.
    std::string canonical() const;
    /// FNV-1a of canonical(), as 16 hex digits.
    std::string hash() const;
    EnsembleSpec ensemble() const;
};

std::vector<std::string> command_names();

/// Parses INI text. Unknown sections or keys, malformed numbers and values
/// outside the admissible ranges raise ConfigError naming the key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Range checks (parse_config runs these too), plus for verify and estimate
/// the containment of every check's ball and time window in the solved range.
/// Run after command-line overrides.
void validate(const RunConfig& config);

std::uint64_t fnv1a(const std::string& text);

}  // namespace nlpar
