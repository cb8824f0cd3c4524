#include "nlpar/field_io.hpp"

#include "nlpar/error.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace nlpar::io {

static_assert(std::endian::native == std::endian::little, "binary field format assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'N', 'L', 'P', 'F'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) {
        throw Error("truncated binary field");
    }
    return v;
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    while (begin < end && *begin == ' ') ++begin;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc()) {
        throw Error("malformed number '" + std::string(text) + "' in field file");
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_binary(std::ostream& out, const SpaceTimeField& field) {
    const Grid& g = field.grid();
    out.write(kMagic, 4);
    put<std::uint32_t>(out, kVersion);
    put<std::int32_t>(out, g.dim());
    put<double>(out, g.half_width());
    put<std::int32_t>(out, g.nodes_per_axis());
    put<std::int32_t>(out, static_cast<std::int32_t>(field.levels() - 1));
    put<double>(out, field.order());
    out.write(reinterpret_cast<const char*>(field.times().data()),
              static_cast<std::streamsize>(field.times().size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(field.values().data()),
              static_cast<std::streamsize>(field.values().size() * sizeof(double)));
}

SpaceTimeField read_binary(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw Error("not a binary field file (bad magic)");
    }
    if (get<std::uint32_t>(in) != kVersion) {
        throw Error("unsupported binary field version");
    }
    const auto n = get<std::int32_t>(in);
    const auto L = get<double>(in);
    const auto N = get<std::int32_t>(in);
    const auto M = get<std::int32_t>(in);
    const auto s = get<double>(in);
    if (M < 0) {
        throw Error("negative level count in binary field");
    }
    Grid grid(n, L, N);
    std::vector<double> times(static_cast<std::size_t>(M) + 1);
    in.read(reinterpret_cast<char*>(times.data()), static_cast<std::streamsize>(times.size() * sizeof(double)));
    std::vector<double> values(times.size() * grid.size());
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) {
        throw Error("truncated binary field");
    }
    return SpaceTimeField(grid, std::move(times), std::move(values), s);
}

void write_csv(std::ostream& out, const SpaceTimeField& field) {
    const Grid& g = field.grid();
    out << "# nlpar-field v1,n=" << g.dim() << ",L=" << format_double(g.half_width()) << ",N=" << g.nodes_per_axis()
        << ",M=" << field.levels() - 1 << ",s=" << format_double(field.order()) << "\n";
    out << "t";
    for (std::size_t k = 0; k < g.size(); ++k) {
        out << ",u_" << k;
    }
    out << "\n";
    for (std::size_t m = 0; m < field.levels(); ++m) {
        out << format_double(field.times()[m]);
        for (double v : field.level(m)) {
            out << ',' << format_double(v);
        }
        out << "\n";
    }
}

SpaceTimeField read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# nlpar-field v1,", 0) != 0) {
        throw Error("not a CSV field file (missing header)");
    }
    int n = 0;
    int N = 0;
    long M = -1;
    double L = 0.0;
    double s = 0.0;
    std::stringstream header(line.substr(std::string("# nlpar-field v1,").size()));
    std::string item;
    while (std::getline(header, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw Error("malformed CSV field header");
        }
        const std::string key = item.substr(0, eq);
        const std::string_view val(item.c_str() + eq + 1);
        if (key == "n") n = static_cast<int>(parse_double(val));
        else if (key == "L") L = parse_double(val);
        else if (key == "N") N = static_cast<int>(parse_double(val));
        else if (key == "M") M = static_cast<long>(parse_double(val));
        else if (key == "s") s = parse_double(val);
        else throw Error("unknown key '" + key + "' in CSV field header");
    }
    Grid grid(n, L, N);
    std::getline(in, line);  // column names
    std::vector<double> times;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t start = 0;
        bool first = true;
        std::size_t count = 0;
        while (start <= line.size()) {
            auto end = line.find(',', start);
            if (end == std::string::npos) end = line.size();
            const double v = parse_double(std::string_view(line).substr(start, end - start));
            if (first) {
                times.push_back(v);
                first = false;
            } else {
                values.push_back(v);
                ++count;
            }
            start = end + 1;
        }
        if (count != grid.size()) {
            throw Error("CSV field row has the wrong number of values");
        }
    }
    if (static_cast<long>(times.size()) != M + 1) {
        throw Error("CSV field level count does not match header");
    }
    return SpaceTimeField(grid, std::move(times), std::move(values), s);
}

void save(const std::filesystem::path& path, const SpaceTimeField& field) {
    const bool csv = path.extension() == ".csv";
    std::ofstream out(path, csv ? std::ios::out : std::ios::out | std::ios::binary);
    if (!out) {
        throw Error("cannot open '" + path.string() + "' for writing");
    }
    if (csv) {
        write_csv(out, field);
    } else {
        write_binary(out, field);
    }
}

SpaceTimeField load(const std::filesystem::path& path) {
    const bool csv = path.extension() == ".csv";
    std::ifstream in(path, csv ? std::ios::in : std::ios::in | std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    return csv ? read_csv(in) : read_binary(in);
}

}  // namespace nlpar::io
