#include "nlpar/config.hpp"

#include "nlpar/error.hpp"
#include "nlpar/field_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace nlpar {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& text, const std::string& key) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw ConfigError(key + ": '" + text + "' is not a number");
    }
    return v;
}

/// Accepts plain numbers and simple fractions such as 1/64.
double parse_number(const std::string& raw, const std::string& key) {
    const std::string text = trim(raw);
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        return parse_plain(text, key);
    }
    const double num = parse_plain(trim(text.substr(0, slash)), key);
    const double den = parse_plain(trim(text.substr(slash + 1)), key);
    if (den == 0.0) {
        throw ConfigError(key + ": zero denominator in '" + text + "'");
    }
    return num / den;
}

std::uint64_t parse_unsigned(const std::string& raw, const std::string& key) {
    const std::string text = trim(raw);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError(key + ": '" + text + "' is not a nonnegative integer");
    }
    return v;
}

bool parse_bool(const std::string& raw, const std::string& key) {
    const std::string text = trim(raw);
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    throw ConfigError(key + ": '" + text + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& raw) {
    std::vector<std::string> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t k = 0; k < items.size(); ++k) {
        out += (k ? "," : "") + items[k];
    }
    return out;
}

std::string num(double v) { return io::format_double(v); }

std::string num_list(const std::vector<double>& v) {
    std::vector<std::string> parts;
    for (double x : v) {
        parts.push_back(num(x));
    }
    return join(parts);
}

std::vector<double> parse_number_list(const std::string& raw, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split_list(raw)) {
        out.push_back(parse_number(item, key));
    }
    if (out.empty()) {
        throw ConfigError(key + ": empty list");
    }
    return out;
}

struct Field {
    std::string section;
    std::string key;
    std::function<void(const std::string&)> set;
    std::function<std::string()> get;
};

std::vector<Field> fields(RunConfig& c) {
    std::vector<Field> f;
    auto real = [&f](std::string section, std::string key, double& target) {
        const std::string name = section + "." + key;
        f.push_back({section, key, [&target, name](const std::string& v) { target = parse_number(v, name); },
                     [&target] { return num(target); }});
    };
    auto text = [&f](std::string section, std::string key, std::string& target) {
        f.push_back({section, key, [&target](const std::string& v) { target = trim(v); }, [&target] { return target; }});
    };
    auto flag = [&f](std::string section, std::string key, bool& target) {
        const std::string name = section + "." + key;
        f.push_back({section, key, [&target, name](const std::string& v) { target = parse_bool(v, name); },
                     [&target] { return std::string(target ? "true" : "false"); }});
    };
    auto list = [&f](std::string section, std::string key, std::vector<double>& target) {
        const std::string name = section + "." + key;
        f.push_back({section, key, [&target, name](const std::string& v) { target = parse_number_list(v, name); },
                     [&target] { return num_list(target); }});
    };

    text("run", "command", c.command);
    f.push_back({"run", "seed", [&c](const std::string& v) { c.seed = parse_unsigned(v, "run.seed"); },
                 [&c] { return std::to_string(c.seed); }});
    f.push_back({"run", "jobs", [&c](const std::string& v) { c.jobs = static_cast<unsigned>(parse_unsigned(v, "run.jobs")); },
                 [&c] { return std::to_string(c.jobs); }});
    flag("run", "refine", c.refine);
    f.push_back({"run", "members", [&c](const std::string& v) { c.count = parse_unsigned(v, "run.members"); },
                 [&c] { return std::to_string(c.count); }});
    f.push_back({"run", "theorems", [&c](const std::string& v) { c.theorems = split_list(v); },
                 [&c] { return join(c.theorems); }});

    text("kernel", "family", c.kernel.family);
    f.push_back({"kernel", "dimension_n",
                 [&c](const std::string& v) { c.kernel.dim = static_cast<int>(parse_unsigned(v, "kernel.dimension_n")); },
                 [&c] { return std::to_string(c.kernel.dim); }});
    real("kernel", "order_s", c.kernel.order);
    f.push_back({"kernel", "lambda", [&c](const std::string& v) { c.kernel.lambda = parse_number(v, "kernel.lambda"); },
                 [&c] { return c.kernel.lambda ? num(*c.kernel.lambda) : std::string("auto"); }});
    real("kernel", "multiple", c.kernel.multiple);
    text("kernel", "modulation", c.kernel.modulation);

    real("grid", "half_width_L", c.discretization.half_width);
    f.push_back({"grid", "nodes_N",
                 [&c](const std::string& v) { c.discretization.nodes = static_cast<int>(parse_unsigned(v, "grid.nodes_N")); },
                 [&c] { return std::to_string(c.discretization.nodes); }});

    real("time", "time_start", c.discretization.t_start);
    real("time", "time_end", c.discretization.t_end);
    real("time", "step_dt", c.discretization.dt);
    f.push_back({"time", "scheme",
                 [&c](const std::string& v) {
                     try {
                         c.discretization.scheme = time_scheme_from_string(trim(v));
                     } catch (const Error& e) {
                         throw ConfigError(std::string("time.scheme: ") + e.what());
                     }
                 },
                 [&c] { return to_string(c.discretization.scheme); }});

    text("initial", "kind", c.initial.kind);
    real("initial", "level", c.initial.level);
    real("initial", "time_offset", c.initial.offset);
    real("initial", "center_x", c.initial.center);
    real("initial", "width", c.initial.width);

    text("exterior", "kind", c.exterior.kind);
    real("exterior", "level", c.exterior.level);
    real("exterior", "time_offset", c.exterior.offset);
    real("exterior", "amplitude_min", c.exterior.amplitude_min);
    real("exterior", "amplitude_max", c.exterior.amplitude_max);
    real("exterior", "gamma_min", c.exterior.gamma_min);
    real("exterior", "gamma_max", c.exterior.gamma_max);
    real("exterior", "radius_inner", c.exterior.inner);
    real("exterior", "radius_outer", c.exterior.outer);
    real("exterior", "base", c.exterior.base);
    real("exterior", "mass_min", c.exterior.mass_min);
    real("exterior", "mass_max", c.exterior.mass_max);

    real("geometry", "center_x0", c.geometry.x0[0]);
    real("geometry", "radius_r", c.geometry.r);
    real("geometry", "radius_R", c.geometry.R);
    real("geometry", "time_t0", c.geometry.t0);
    f.push_back({"geometry", "alpha", [&c](const std::string& v) { c.geometry.alpha = parse_number(v, "geometry.alpha"); },
                 [&c] { return num(c.geometry.alpha); }});
    real("geometry", "theta", c.geometry.theta);
    real("geometry", "delta", c.geometry.delta);
    real("geometry", "epsilon", c.geometry.epsilon);

    real("tail", "time_t1", c.tail.t1);
    real("tail", "time_t2", c.tail.t2);

    text("oracle", "mode", c.oracle.mode);
    real("oracle", "time_offset", c.oracle.time_offset);
    list("oracle", "frequencies", c.oracle.frequencies);
    real("oracle", "tolerance", c.oracle.tolerance);

    f.push_back({"lemma", "tuples", [&c](const std::string& v) { c.lemma.tuples = parse_unsigned(v, "lemma.tuples"); },
                 [&c] { return std::to_string(c.lemma.tuples); }});
    list("lemma", "q_part_i", c.lemma.q_part_i);
    list("lemma", "q_part_ii", c.lemma.q_part_ii);
    f.push_back({"lemma", "poincare_weight",
                 [&c](const std::string& v) {
                     try {
                         c.lemma.weight = poincare_weight_from_string(trim(v));
                     } catch (const Error& e) {
                         throw ConfigError(std::string("lemma.poincare_weight: ") + e.what());
                     }
                 },
                 [&c] { return to_string(c.lemma.weight); }});
    real("lemma", "phi_radius", c.lemma.phi_radius);
    list("lemma", "phi_samples", c.lemma.phi_samples);

    f.push_back({"output", "directory", [&c](const std::string& v) { c.output.directory = trim(v); },
                 [&c] { return c.output.directory.string(); }});
    f.push_back({"output", "formats",
                 [&c](const std::string& v) {
                     c.output.binary = c.output.csv = false;
                     for (const auto& item : split_list(v)) {
                         if (item == "binary") {
                             c.output.binary = true;
                         } else if (item == "csv") {
                             c.output.csv = true;
                         } else {
                             throw ConfigError("output.formats: unknown format '" + item + "' (binary, csv)");
                         }
                     }
                 },
                 [&c] {
                     std::vector<std::string> v;
                     if (c.output.binary) v.push_back("binary");
                     if (c.output.csv) v.push_back("csv");
                     return join(v);
                 }});
    return f;
}

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw ConfigError(message);
    }
}

std::string open_range(const std::string& key, double v, const std::string& range) {
    std::ostringstream os;
    os << key << " = " << num(v) << " lies outside the admissible range " << range;
    return os.str();
}

const std::set<std::string> initial_kinds{"bumps", "mixed_bumps", "constant", "poisson", "gaussian"};
const std::set<std::string> exterior_kinds{"zero", "constant", "poisson", "decaying", "annulus", "negative_annulus",
                                           "linear_in_time"};

}  // namespace

KernelSpec KernelConfig::build() const {
    const KernelFamily fam = kernel_family_from_string(family);
    switch (fam) {
        case KernelFamily::fractional_laplacian:
            return KernelSpec::fractional_laplacian(dim, order, lambda);
        case KernelFamily::constant_multiple:
            return KernelSpec::constant_multiple(dim, order, lambda.value_or(std::max(multiple, 1.0 / multiple)), multiple);
        case KernelFamily::modulated: {
            Modulation m = named_modulation(modulation);
            const double need = std::max(m.upper, 1.0 / m.lower);
            return KernelSpec::modulated(dim, order, lambda.value_or(need), std::move(m));
        }
    }
    throw ConfigError("unknown kernel family");
}

std::vector<std::string> command_names() { return {"solve", "tail", "verify", "estimate", "oracle", "lemma-check"}; }

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string RunConfig::canonical() const {
    RunConfig copy = *this;
    std::vector<std::string> lines;
    for (const auto& field : fields(copy)) {
        // Execution settings that cannot change any emitted number.
        if ((field.section == "run" && field.key == "jobs") || (field.section == "output" && field.key == "directory")) {
            continue;
        }
        lines.push_back(field.section + "." + field.key + " = " + field.get());
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& line : lines) {
        out += line + "\n";
    }
    return out;
}

std::string RunConfig::hash() const {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a(canonical());
    std::string out(16, '0');
    for (int k = 15; k >= 0; --k, h >>= 4) {
        out[static_cast<std::size_t>(k)] = digits[h & 0xf];
    }
    return out;
}

EnsembleSpec RunConfig::ensemble() const {
    EnsembleSpec spec{.kernel = kernel.build(),
                      .discretization = discretization,
                      .initial = initial,
                      .exterior = exterior,
                      .geometry = geometry,
                      .theorems = theorems,
                      .count = count,
                      .seed = seed,
                      .refine = refine,
                      .jobs = jobs};
    return spec;
}

static void validate_ranges(const RunConfig& c) {
    const auto commands = command_names();
    require(std::find(commands.begin(), commands.end(), c.command) != commands.end(),
            "run.command: unknown command '" + c.command + "'");
    require(c.jobs >= 1, "run.jobs must be at least 1");
    require(c.count >= 1, "run.members must be at least 1");
    require(!c.theorems.empty(), "run.theorems must name at least one check");
    for (const auto& id : c.theorems) {
        const auto& ids = theorem_ids();
        require(std::find(ids.begin(), ids.end(), id) != ids.end(),
                "run.theorems: unknown check '" + id + "' (expected one of " + join(ids) + ")");
    }

    const double s = c.kernel.order;
    require(c.kernel.dim == 1 || c.kernel.dim == 2, "kernel.dimension_n must be 1 or 2");
    require(s > 0.0 && s < 1.0, open_range("kernel.order_s", s, "s ∈ (0, 1)"));
    require(!c.kernel.lambda || *c.kernel.lambda >= 1.0, open_range("kernel.lambda", c.kernel.lambda.value_or(0.0), "Λ ≥ 1"));
    try {
        (void)c.kernel.build();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("kernel: ") + e.what());
    }

    const auto& d = c.discretization;
    require(d.half_width > 0.0, open_range("grid.half_width_L", d.half_width, "L > 0"));
    require(d.nodes >= 8, "grid.nodes_N must be at least 8");
    require(d.dt > 0.0, open_range("time.step_dt", d.dt, "dt > 0"));
    require(d.t_end > d.t_start, "time.time_end must exceed time.time_start");
    require((d.t_end - d.t_start) / d.dt <= 1e6, "time: more than 10^6 steps requested");

    require(initial_kinds.count(c.initial.kind) > 0, "initial.kind: unknown generator '" + c.initial.kind + "'");
    require(c.initial.width > 0.0, open_range("initial.width", c.initial.width, "width > 0"));
    require(c.initial.kind != "poisson" || c.initial.offset > 0.0,
            open_range("initial.time_offset", c.initial.offset, "offset > 0"));

    const auto& e = c.exterior;
    require(exterior_kinds.count(e.kind) > 0, "exterior.kind: unknown generator '" + e.kind + "'");
    if (e.kind == "decaying" || e.kind == "negative_annulus" || e.kind == "linear_in_time") {
        std::ostringstream range;
        range << "γ < 2s = " << num(2.0 * s) << " (the tail integral diverges otherwise)";
        require(e.gamma_max < 2.0 * s, open_range("exterior.gamma_max", e.gamma_max, range.str()));
        require(e.gamma_min <= e.gamma_max, "exterior.gamma_min must not exceed exterior.gamma_max");
        require(e.amplitude_min <= e.amplitude_max, "exterior.amplitude_min must not exceed exterior.amplitude_max");
    }
    if (e.kind == "annulus" || e.kind == "negative_annulus") {
        require(e.inner > d.half_width, "exterior.radius_inner must lie outside the grid box (> grid.half_width_L)");
        require(e.outer > e.inner, "exterior.radius_outer must exceed exterior.radius_inner");
        require(e.mass_min <= e.mass_max, "exterior.mass_min must not exceed exterior.mass_max");
    }
    require(e.kind != "poisson" || e.offset > 0.0, open_range("exterior.time_offset", e.offset, "offset > 0"));
    if (e.kind == "poisson" || c.initial.kind == "poisson") {
        require(std::abs(s - 0.5) < 1e-12, "poisson data are exact solutions only for kernel.order_s = 0.5");
    }

    const auto& g = c.geometry;
    require(g.r > 0.0, open_range("geometry.radius_r", g.r, "r > 0"));
    require(g.r < 0.5 * g.R, open_range("geometry.radius_r", g.r, "r < R/2 with R = " + num(g.R)));
    if (!std::isnan(g.alpha)) {
        std::ostringstream range;
        range << "α ∈ (1, 2^{2s}) = (1, " << num(std::pow(2.0, 2.0 * s)) << ")";
        require(g.alpha > 1.0 && g.alpha < std::pow(2.0, 2.0 * s), open_range("geometry.alpha", g.alpha, range.str()));
    }
    require(g.theta > 0.0 && g.theta < 1.0, open_range("geometry.theta", g.theta, "θ ∈ (0, 1)"));
    require(g.delta > 0.0 && g.delta < 1.0, open_range("geometry.delta", g.delta, "δ ∈ (0, 1)"));
    require(g.epsilon > 0.0 && g.epsilon <= 1.0, open_range("geometry.epsilon", g.epsilon, "ε ∈ (0, 1]"));
    require(std::isnan(c.tail.t1) == std::isnan(c.tail.t2), "tail.time_t1 and tail.time_t2 must be given together");
    require(std::isnan(c.tail.t1) || c.tail.t2 > c.tail.t1, "tail.time_t2 must exceed tail.time_t1");

    require(c.oracle.mode == "heat_kernel" || c.oracle.mode == "symbol",
            "oracle.mode: unknown mode '" + c.oracle.mode + "' (heat_kernel, symbol)");
    require(c.oracle.time_offset > 0.0, open_range("oracle.time_offset", c.oracle.time_offset, "offset > 0"));
    require(c.oracle.tolerance > 0.0, open_range("oracle.tolerance", c.oracle.tolerance, "tolerance > 0"));
    for (double xi : c.oracle.frequencies) {
        require(xi > 0.0, open_range("oracle.frequencies", xi, "ξ > 0"));
    }

    require(c.lemma.tuples >= 1, "lemma.tuples must be at least 1");
    for (double q : c.lemma.q_part_i) {
        require(q > 1.0, open_range("lemma.q_part_i", q, "q > 1"));
    }
    for (double q : c.lemma.q_part_ii) {
        require(q > 0.0 && q < 1.0, open_range("lemma.q_part_ii", q, "q ∈ (0, 1)"));
    }
    require(c.lemma.phi_radius > 0.0, open_range("lemma.phi_radius", c.lemma.phi_radius, "r > 0"));
    for (double x : c.lemma.phi_samples) {
        require(x >= 0.0 && std::abs(x - 1.0) > 0.05, open_range("lemma.phi_samples", x, "|x|/r ≥ 0 away from the plateau edge 1"));
    }
    require(c.output.binary || c.output.csv, "output.formats must name at least one format");
}

void validate(const RunConfig& c) {
    validate_ranges(c);
    const auto& d = c.discretization;
    const auto& g = c.geometry;
    const double s = c.kernel.order;
    if (c.command == "verify" || c.command == "estimate") {
        // Every ball and time window used by the selected checks must lie in the solved range.
        const double span = std::pow(g.r, 2.0 * s);
        const double alpha = std::isnan(g.alpha) ? 0.5 * (1.0 + std::pow(2.0, 2.0 * s)) : g.alpha;
        double radius = g.r;
        double lo = g.t0;
        double hi = g.t0;
        for (const auto& id : c.theorems) {
            if (id != "local_boundedness" && id != "tail_sup_by_tail" && id != "tail_sup_by_tail_minus") {
                radius = g.R;
            }
            if (id == "harnack") {
                lo = std::min(lo, g.t0 - span);
                hi = std::max(hi, g.t0 + 2.0 * span - alpha * std::pow(0.5 * g.r, 2.0 * s));
            } else if (id == "weak_harnack") {
                lo = std::min(lo, g.t0 - 2.0 * span);
                hi = std::max(hi, g.t0 + 2.0 * span);
            } else if (id == "local_boundedness" || id == "local_boundedness_signed") {
                lo = std::min(lo, g.t0 - span);
            } else if (id == "tail_plus_by_minus") {
                hi = std::max(hi, g.t0 + span);
            } else {
                lo = std::min(lo, g.t0 - g.epsilon * span);
                hi = std::max(hi, g.t0 + span);
            }
        }
        const double reach = std::max(std::abs(g.x0[0]), c.kernel.dim == 2 ? std::abs(g.x0[1]) : 0.0) + radius;
        require(reach <= d.half_width, "geometry: the ball of radius " + num(radius) + " around geometry.center_x0 reaches " +
                                           num(reach) + ", beyond grid.half_width_L = " + num(d.half_width));
        const double slack = 1e-9 * std::max(1.0, std::abs(d.t_end));
        require(lo >= d.t_start - slack && hi <= d.t_end + slack,
                "geometry.time_t0: the checks need times [" + num(lo) + ", " + num(hi) + "], outside [time_start, time_end] = [" +
                    num(d.t_start) + ", " + num(d.t_end) + "]");
    }
}

RunConfig parse_config(const std::string& text) {
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.message() + " (line " +
                          std::to_string(e.line()) + ")");
    }
    RunConfig config;
    auto table = fields(config);
    std::map<std::string, std::map<std::string, Field*>> index;
    for (auto& f : table) {
        index[f.section][f.key] = &f;
    }
    for (const auto& [section, keys] : tree) {
        const auto sec = index.find(section);
        if (sec == index.end()) {
            if (!keys.data().empty()) {
                throw ConfigError("key '" + section + "' outside any section");
            }
            throw ConfigError("unknown section [" + section + "]");
        }
        for (const auto& [key, value] : keys) {
            const auto it = sec->second.find(key);
            if (it == sec->second.end()) {
                throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
            }
            it->second->set(value.data());
        }
    }
    validate_ranges(config);
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read configuration file " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace nlpar
