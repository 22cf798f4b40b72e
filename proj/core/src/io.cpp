#include "lpkit/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lpkit/error.hpp"

namespace lpkit {

namespace {

using ordered_json = nlohmann::ordered_json;

static_assert(std::endian::native == std::endian::little, "binary grid files assume a little-endian host");

constexpr char kMagic[4] = {'L', 'P', 'G', 'F'};

template <class T>
void put(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

template <class T>
T take(std::string_view bytes, std::size_t& pos) {
    if (pos + sizeof(T) > bytes.size()) throw FormatError("binary grid function: truncated data");
    T v;
    std::memcpy(&v, bytes.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
}

GridSpec checked_spec(long long dim, long long n, double period) {
    if (dim != 1 && dim != 2) throw FormatError("grid function: dim must be 1 or 2");
    if (n < 2 || n > (1LL << 24) || (n & (n - 1)) != 0)
        throw FormatError("grid function: points_per_axis must be a power of two");
    if (!(period > 0.0) || !std::isfinite(period)) throw FormatError("grid function: period must be positive");
    try {
        return GridSpec(static_cast<int>(dim), static_cast<std::size_t>(n), period);
    } catch (const std::exception& e) {
        throw FormatError(std::string("grid function: ") + e.what());
    }
}

ordered_json cube_json(const DyadicCube& c) {
    ordered_json j;
    j["generation"] = c.generation;
    j["corner"] = c.dim == 2 ? ordered_json{c.corner[0], c.corner[1]} : ordered_json{c.corner[0]};
    return j;
}

ordered_json clauses_json(const std::vector<ClauseResult>& clauses) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : clauses)
        arr.push_back({{"name", c.name}, {"passed", c.passed}, {"measured", c.measured}, {"bound", c.bound},
                       {"detail", c.detail}});
    return arr;
}

}  // namespace

std::string grid_function_to_json(const GridFunction& f) {
    ordered_json j;
    j["schema_version"] = io_schema_version;
    j["kind"] = "grid_function";
    j["dim"] = f.spec().dim();
    j["points_per_axis"] = f.spec().points_per_axis();
    j["period"] = f.spec().period();
    j["is_real"] = f.is_real();
    ordered_json vals = ordered_json::array();
    for (const auto& v : f.values()) vals.push_back({v.real(), v.imag()});
    j["values"] = std::move(vals);
    return j.dump() + "\n";
}

GridFunction grid_function_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("schema_version").get<int>() != io_schema_version)
            throw FormatError("grid function: unsupported schema_version");
        if (j.contains("kind") && j.at("kind") != "grid_function") throw FormatError("grid function: wrong kind");
        const GridSpec spec =
            checked_spec(j.at("dim").get<long long>(), j.at("points_per_axis").get<long long>(), j.at("period").get<double>());
        const auto& vals = j.at("values");
        if (!vals.is_array() || vals.size() != spec.size()) throw FormatError("grid function: wrong number of values");
        std::vector<Complex> v;
        v.reserve(vals.size());
        for (const auto& e : vals) {
            if (e.is_number()) {
                v.emplace_back(e.get<double>(), 0.0);
            } else {
                if (!e.is_array() || e.size() != 2) throw FormatError("grid function: values must be [re, im] pairs");
                v.emplace_back(e[0].get<double>(), e[1].get<double>());
            }
        }
        const bool is_real = j.value("is_real", true);
        return GridFunction(spec, std::move(v), is_real);
    } catch (const FormatError&) {
        throw;
    } catch (const std::exception& e) {
        throw FormatError(std::string("grid function JSON: ") + e.what());
    }
}

std::string grid_function_to_binary(const GridFunction& f) {
    std::string out(kMagic, 4);
    put<std::uint32_t>(out, io_schema_version);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(f.spec().dim()));
    put<std::uint64_t>(out, f.spec().points_per_axis());
    put<double>(out, f.spec().period());
    put<std::uint8_t>(out, f.is_real() ? 1 : 0);
    for (const auto& v : f.values()) {
        put<double>(out, v.real());
        put<double>(out, v.imag());
    }
    return out;
}

GridFunction grid_function_from_binary(std::string_view bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("binary grid function: bad magic");
    std::size_t pos = 4;
    if (take<std::uint32_t>(bytes, pos) != io_schema_version)
        throw FormatError("binary grid function: unsupported schema_version");
    const auto dim = take<std::uint32_t>(bytes, pos);
    const auto n = take<std::uint64_t>(bytes, pos);
    const auto period = take<double>(bytes, pos);
    const bool is_real = take<std::uint8_t>(bytes, pos) != 0;
    const GridSpec spec = checked_spec(dim, static_cast<long long>(std::min<std::uint64_t>(n, 1ULL << 40)), period);
    if (bytes.size() - pos != spec.size() * 2 * sizeof(double))
        throw FormatError("binary grid function: payload size does not match the header");
    std::vector<Complex> v(spec.size());
    for (auto& c : v) {
        const double re = take<double>(bytes, pos);
        const double im = take<double>(bytes, pos);
        c = {re, im};
    }
    try {
        return GridFunction(spec, std::move(v), is_real);
    } catch (const std::exception& e) {
        throw FormatError(std::string("binary grid function: ") + e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

void write_grid_function(const std::filesystem::path& path, const GridFunction& f, GridFileFormat format) {
    write_file(path, format == GridFileFormat::json ? grid_function_to_json(f) : grid_function_to_binary(f));
}

GridFunction read_grid_function(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    if (data.size() >= 4 && std::memcmp(data.data(), kMagic, 4) == 0) return grid_function_from_binary(data);
    return grid_function_from_json(data);
}

std::string corpus_manifest_json(const TestCorpus& corpus) {
    ordered_json j;
    j["schema_version"] = io_schema_version;
    j["kind"] = "corpus";
    j["seed"] = corpus.seed();
    j["family"] = std::string(to_string(corpus.family()));
    j["grid"] = {{"dim", corpus.spec().dim()},
                 {"points_per_axis", corpus.spec().points_per_axis()},
                 {"period", corpus.spec().period()}};
    ordered_json entries = ordered_json::array();
    for (const auto& e : corpus.entries()) {
        ordered_json g;
        g["label"] = e.label;
        ordered_json modes = ordered_json::array();
        for (const auto& m : e.generator.modes)
            modes.push_back({{"k", {m.k[0], m.k[1]}}, {"amplitude", m.amplitude}, {"phase", m.phase}});
        ordered_json blobs = ordered_json::array();
        for (const auto& b : e.generator.blobs)
            blobs.push_back({{"center", {b.center[0], b.center[1]}}, {"width", b.width}, {"amplitude", b.amplitude}});
        if (!modes.empty()) g["modes"] = modes;
        if (!blobs.empty()) g["blobs"] = blobs;
        entries.push_back(g);
    }
    j["entries"] = entries;
    return j.dump(2) + "\n";
}

std::string whitney_json(const WhitneyDecomposition& d, const std::vector<ClauseResult>& clauses) {
    ordered_json j;
    j["schema_version"] = io_schema_version;
    j["kind"] = "whitney";
    j["dim"] = d.omega.dim();
    j["period"] = d.omega.period();
    j["periodic"] = d.omega.periodic();
    j["k_max"] = d.k_max;
    j["omega_volume"] = d.omega_volume;
    j["uncovered_volume"] = d.uncovered_volume;
    ordered_json cubes = ordered_json::array();
    for (std::size_t i = 0; i < d.cubes.size(); ++i) {
        ordered_json c = cube_json(d.cubes[i]);
        const double l = d.cubes[i].side();
        c["dist"] = d.dist[i];
        c["dist_over_sqrt_n_side"] = d.dist[i] / (std::sqrt(static_cast<double>(d.omega.dim())) * l);
        cubes.push_back(c);
    }
    j["cubes"] = cubes;
    ordered_json frontier = ordered_json::array();
    for (const auto& q : d.frontier) frontier.push_back(cube_json(q));
    j["frontier"] = frontier;
    j["clauses"] = clauses_json(clauses);
    j["all_passed"] = std::all_of(clauses.begin(), clauses.end(), [](const ClauseResult& c) { return c.passed; });
    return j.dump(2) + "\n";
}

std::string cz_json(const CZDecomposition& d) {
    ordered_json j;
    j["schema_version"] = io_schema_version;
    j["kind"] = "cz";
    j["p"] = d.p;
    j["alpha"] = d.alpha;
    j["grid"] = {{"dim", d.f.spec().dim()},
                 {"points_per_axis", d.f.spec().points_per_axis()},
                 {"period", d.f.spec().period()}};
    j["omega_volume"] = d.whitney.omega_volume;
    j["uncovered_volume"] = d.whitney.uncovered_volume;
    ordered_json cubes = ordered_json::array();
    const double hn = d.f.spec().cell_volume();
    for (const auto& b : d.bad_parts) {
        ordered_json c = cube_json(b.cube);
        double mean = 0.0, integral = 0.0;
        for (std::size_t k = 0; k < b.cells.size(); ++k) {
            mean += d.good[b.cells[k]].real();
            integral += b.values[k] * hn;
        }
        c["cells"] = b.cells.size();
        c["mean"] = b.cells.empty() ? 0.0 : mean / static_cast<double>(b.cells.size());
        c["bad_integral"] = integral;
        cubes.push_back(c);
    }
    j["cubes"] = cubes;
    ordered_json sub = ordered_json::array();
    for (const auto& q : d.whitney.cubes)
        if (q.side() < d.f.spec().cell_width()) sub.push_back(cube_json(q));
    j["subcell_cubes"] = sub;
    j["clauses"] = clauses_json(d.clauses);
    j["all_passed"] = d.all_passed();
    return j.dump(2) + "\n";
}

}  // namespace lpkit
