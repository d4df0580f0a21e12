// ============================================================================
// nsch/config.hpp - flat `section.key = value` run configuration
// ============================================================================
#pragma once

#include "nsch/timestepper.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nsch {

struct GridSpec {
    std::string mode = "periodic_torus"; ///< periodic_torus | neumann_rectangle
    int nx = 64;
    int ny = 64;
    double lx = 6.283185307179586;
    double ly = 6.283185307179586;
};

struct PotentialSpec {
    std::string kind = "regularized"; ///< regularized | quartic | singular
    double theta = 1.0;
    double theta_c = 2.0;
    double eps = 0.05;                ///< regularization width
};

struct InitSpec {
    double gamma = 0.25;   ///< elliptic smoothing; 0 disables
    int n_mollify = 0;     ///< heat mollification index; 0 disables
    std::string phi = "random"; ///< random | stripe | droplet | constant | cosine | snapshot
    double phi_mean = 0.0;
    double phi_amp = 0.5;
    double phi_width = 0.1;
    double phi_radius = 1.0;
    double phi_kcut = 3.0;
    int phi_mode = 1;
    std::string sigma = "constant"; ///< constant | gaussian | cosine
    double sigma_base = 1.0;
    double sigma_amp = 0.0;
    double sigma_width = 0.3;
    int sigma_mode = 1;
    std::string velocity = "zero"; ///< zero | taylor_green | random
    double velocity_amp = 0.5;
    double velocity_kcut = 3.0;
    std::string snapshot; ///< file read when phi = snapshot
};

struct OutputSpec {
    std::string dir = "nsch_out";
    long diag_interval = 1;
    long snapshot_interval = 0;
};

struct CheckSpec {
    std::vector<double> eps{0.01, 0.05, 0.1};
    std::vector<double> chi{0.0, 0.5, -0.5, 2.0, -2.0};
};

struct TwinSpec {
    std::vector<double> delta_ladder{1e-3, 1e-4, 1e-5};
    long record_interval = 1;
};

struct RunConfig {
    GridSpec grid;
    PotentialSpec potential;
    ModelParams model;
    InitSpec init;
    SchemeConfig scheme;
    OutputSpec output;
    CheckSpec check;
    TwinSpec twin;
    std::uint64_t seed = 0;

    /// Throws ConfigError naming the offending key or hypothesis.
    void validate() const;

    GridPtr make_grid() const;
    /// Phase potential for the configured kind (the regularized one uses model.chi).
    PhasePotential make_potential() const;
    Model make_model() const;
    /// Raw (unprepared) initial data from the generators or a snapshot.
    InitialData make_initial_data(const GridPtr& g) const;
    /// Galerkin cutoff requested from prepare(): scheme.K or the dealiasing radius.
    double requested_K(const Grid& g) const;

    /// Every key with its resolved value, one `key = value` per line, sorted.
    std::string canonical() const;
    /// FNV-1a hash of canonical() without output.dir, as 16 hex digits.
    std::string fingerprint() const;
};

/// Parses `key = value` lines (# comments, dotted sections). Unknown or
/// repeated keys and malformed lines are ConfigErrors carrying the line number.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
/// Reads and parses a file; IoError if it cannot be opened.
RunConfig load_config(const std::string& path);

/// Comma-separated list of reals.
std::vector<double> parse_real_list(const std::string& text);

} // namespace nsch
