#include "nsch/io.hpp"

#include "nsch/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>

namespace nsch {

std::uint64_t fnv1a64(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_real(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ensure_directory(const std::string& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

// ============================================================================
// CSV
// ============================================================================
CsvWriter::CsvWriter(const std::string& path, const std::string& fingerprint, std::vector<std::string> header)
    : path_(path), out_(path, std::ios::out | std::ios::trunc), columns_(header.size())
{
    if (!out_)
        throw IoError("cannot open '" + path + "' for writing");
    out_ << "# config_fingerprint=" << fingerprint << '\n';
    for (std::size_t i = 0; i < header.size(); ++i)
        out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(std::span<const double> values)
{
    if (values.size() != columns_)
        throw ShapeError("CsvWriter: row width does not match the header");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << (i ? "," : "") << format_real(values[i]);
    out_ << '\n';
    if (!out_)
        throw IoError("write to '" + path_ + "' failed");
}

void CsvWriter::row(const DiagnosticsRecord& r)
{
    const auto c = r.columns();
    row(std::span<const double>(c));
}

void CsvWriter::flush()
{
    out_.flush();
    if (!out_)
        throw IoError("flush of '" + path_ + "' failed");
}

std::vector<std::string> diagnostics_header()
{
    std::vector<std::string> h;
    for (auto n : DiagnosticsRecord::column_names())
        h.emplace_back(n);
    return h;
}

// ============================================================================
// Snapshots
// ============================================================================
namespace {

constexpr char kMagic[5] = {'N', 'S', 'C', 'H', '1'};

template <class T>
void put(std::ostream& out, T v)
{
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(b, b + sizeof(T));
    out.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(std::istream& in, const std::string& path)
{
    unsigned char b[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(b), sizeof(T)))
        throw IoError("snapshot '" + path + "' is truncated");
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(b, b + sizeof(T));
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

} // namespace

const std::vector<double>* Snapshot::find(std::string_view name) const
{
    for (const auto& [n, v] : fields)
        if (n == name)
            return &v;
    return nullptr;
}

void write_snapshot(const std::string& path, const State& s)
{
    const Grid& g = s.phi.grid();
    std::vector<std::pair<std::string, const ScalarField*>> fields{{"phi", &s.phi}, {"sigma", &s.sigma}};
    if (!s.mu.empty())
        fields.emplace_back("mu", &s.mu);
    if (s.has_velocity()) {
        fields.emplace_back("vx", &s.v.x);
        fields.emplace_back("vy", &s.v.y);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.nx()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.ny()));
    put<double>(out, g.lx());
    put<double>(out, g.ly());
    put<double>(out, s.t);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(fields.size()));
    for (const auto& [name, f] : fields) {
        put<std::uint8_t>(out, static_cast<std::uint8_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        for (double v : f->values())
            put<double>(out, v);
    }
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

Snapshot read_snapshot(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open snapshot '" + path + "'");
    char magic[5];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw IoError("'" + path + "' is not an NSCH1 snapshot");
    Snapshot s;
    s.nx = get<std::uint32_t>(in, path);
    s.ny = get<std::uint32_t>(in, path);
    s.lx = get<double>(in, path);
    s.ly = get<double>(in, path);
    s.t = get<double>(in, path);
    if (s.nx == 0 || s.ny == 0 || s.nx > (1u << 16) || s.ny > (1u << 16))
        throw IoError("snapshot '" + path + "' has an implausible size");
    const int count = get<std::uint8_t>(in, path);
    const std::size_t n = static_cast<std::size_t>(s.nx) * s.ny;
    for (int k = 0; k < count; ++k) {
        const std::size_t len = get<std::uint8_t>(in, path);
        std::string name(len, '\0');
        if (!in.read(name.data(), static_cast<std::streamsize>(len)))
            throw IoError("snapshot '" + path + "' is truncated");
        std::vector<double> values(n);
        for (double& v : values)
            v = get<double>(in, path);
        s.fields.emplace_back(std::move(name), std::move(values));
    }
    return s;
}

State state_from_snapshot(const Snapshot& snap, const GridPtr& g)
{
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
    if (snap.nx != static_cast<std::uint32_t>(g->nx()) || snap.ny != static_cast<std::uint32_t>(g->ny())
        || !close(snap.lx, g->lx()) || !close(snap.ly, g->ly()))
        throw ShapeError("snapshot grid does not match the configured grid");
    auto field = [&](const char* name) -> ScalarField {
        const auto* v = snap.find(name);
        return v ? ScalarField(g, *v) : ScalarField();
    };
    State s;
    s.t = snap.t;
    s.phi = field("phi");
    s.sigma = field("sigma");
    if (s.phi.empty() || s.sigma.empty())
        throw DataError("snapshot lacks phi or sigma");
    s.mu = field("mu");
    ScalarField vx = field("vx"), vy = field("vy");
    if (!vx.empty() && !vy.empty())
        s.v = VectorField(std::move(vx), std::move(vy));
    return s;
}

} // namespace nsch
