// ============================================================================
// nsch/io.hpp - diagnostics CSV and binary snapshots
// ============================================================================
#pragma once

#include "nsch/diagnostics.hpp"

#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nsch {

std::uint64_t fnv1a64(std::string_view data);
/// Shortest round-trip-safe text of a double (17 significant digits).
std::string format_real(double v);

/// CSV file whose first line is `# config_fingerprint=<hex>`, then a header.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& fingerprint, std::vector<std::string> header);
    void row(std::span<const double> values);
    void row(const DiagnosticsRecord& r);
    void flush();
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
    std::ofstream out_;
    std::size_t columns_;
};

std::vector<std::string> diagnostics_header();

/// Snapshot layout (little-endian): "NSCH1", u32 Nx, u32 Ny, f64 Lx, f64 Ly,
/// f64 t, u8 field count, then per field a u8-length-prefixed ASCII name and
/// Nx*Ny row-major f64 samples.
struct Snapshot {
    std::uint32_t nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0, t = 0.0;
    std::vector<std::pair<std::string, std::vector<double>>> fields;

    const std::vector<double>* find(std::string_view name) const;
};

/// Fields phi, sigma, mu (when present) and vx, vy (torus runs).
void write_snapshot(const std::string& path, const State& s);
Snapshot read_snapshot(const std::string& path);
/// Rebuilds a State on g; ShapeError if the snapshot does not match the grid.
State state_from_snapshot(const Snapshot& snap, const GridPtr& g);

/// Creates the directory (and parents); IoError on failure.
void ensure_directory(const std::string& dir);

} // namespace nsch
