// ============================================================================
// nsch/grid.hpp - uniform 2-D grids with Fourier (periodic torus) or cosine
// (Neumann rectangle) spectral bases
// ============================================================================
#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace nsch {

enum class DomainMode { periodic_torus, neumann_rectangle };

std::string to_string(DomainMode mode);
DomainMode domain_mode_from_string(const std::string& s);

using cplx = std::complex<double>;

/// Immutable grid descriptor plus cached transform plans. Shared between
/// fields through std::shared_ptr<const Grid>.
///
/// Physical samples are stored row-major with x fastest: index j*nx + i.
/// Torus points sit at x_i = i Lx/Nx; rectangle points at cell centres
/// x_i = (i + 1/2) Lx/Nx so that the DCT-II basis is the Neumann eigenbasis.
///
/// Spectral layout: torus uses the half-complex r2c layout (Ny rows of
/// Nx/2+1 columns); rectangle uses Ny x Nx real cosine amplitudes stored with
/// zero imaginary part. Both are normalized so the zero mode is the mean.
class Grid {
public:
    static std::shared_ptr<const Grid> create(DomainMode mode, double lx, double ly, int nx, int ny);
    ~Grid();
    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    DomainMode mode() const noexcept { return mode_; }
    bool periodic() const noexcept { return mode_ == DomainMode::periodic_torus; }
    double lx() const noexcept { return lx_; }
    double ly() const noexcept { return ly_; }
    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }
    double area() const noexcept { return lx_ * ly_; }
    double dx() const noexcept { return lx_ / nx_; }
    double dy() const noexcept { return ly_ / ny_; }
    double x(int i) const noexcept;
    double y(int j) const noexcept;

    // --- spectral layout ------------------------------------------------
    int spec_nx() const noexcept { return spec_nx_; }
    int spec_ny() const noexcept { return ny_; }
    std::size_t spec_size() const noexcept { return static_cast<std::size_t>(spec_nx_) * ny_; }

    /// Wavenumbers used by first derivatives (torus Nyquist entries are zero).
    double kx(int i) const { return kx_[i]; }
    double ky(int j) const { return ky_[j]; }
    /// |k|^2 including Nyquist entries.
    double k2(std::size_t idx) const { return k2_[idx]; }
    /// Parseval weight: mean(f^2) = sum_idx weight(idx) |c_idx|^2.
    double weight(std::size_t idx) const { return weight_[idx]; }
    /// 2/3-rule dealiasing mask.
    bool in_mask(std::size_t idx) const { return mask_[idx] != 0; }

    /// Largest resolvable wavenumber along the shorter resolution axis.
    double nyquist_radius() const noexcept;
    /// Radius of the disc of physical wavenumbers fully inside the dealiasing mask.
    double dealias_radius() const noexcept;

    // --- transforms -----------------------------------------------------
    void forward(std::span<const double> in, std::span<cplx> out) const;
    void inverse(std::span<const cplx> in, std::span<double> out) const;

    /// Physical samples of the gradient of the field with spectrum `in`.
    /// Valid in both modes; in rectangle mode the components are sine-type
    /// in their derivative direction.
    void gradient(std::span<const cplx> in, std::span<double> gx, std::span<double> gy) const;

    /// Spectrum of div(F) for F given by physical samples of the same parity
    /// that gradient() produces.
    void divergence(std::span<const double> fx, std::span<const double> fy, std::span<cplx> out) const;

private:
    Grid(DomainMode mode, double lx, double ly, int nx, int ny);

    struct Plans;

    DomainMode mode_;
    double lx_, ly_;
    int nx_, ny_, spec_nx_;
    std::vector<double> kx_, ky_, k2_, weight_;
    std::vector<unsigned char> mask_;
    std::unique_ptr<Plans> plans_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Caps the number of threads the transform library uses for plans created
/// afterwards. Initialized from the NSCH_THREADS environment variable.
void set_transform_threads(int n);
int transform_threads();

} // namespace nsch
