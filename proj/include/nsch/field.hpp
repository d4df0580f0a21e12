// ============================================================================
// nsch/field.hpp - grid-bound scalar/vector fields and their spectra
// ============================================================================
#pragma once

#include "nsch/grid.hpp"

#include <functional>
#include <span>
#include <vector>

namespace nsch {

/// Real samples of a scalar function on a grid.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(GridPtr grid, double fill = 0.0);
    ScalarField(GridPtr grid, std::vector<double> values);

    static ScalarField from_function(GridPtr grid, const std::function<double(double, double)>& f);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    bool empty() const noexcept { return !grid_; }

    std::span<const double> values() const noexcept { return data_; }
    std::span<double> values() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * grid_->nx() + i]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(j) * grid_->nx() + i]; }

    double min() const;
    double max() const;
    double max_abs() const;
    /// Grid-quadrature mean (exact for band-limited fields).
    double mean() const;
    /// Grid quadrature of the samples over the domain.
    double integral() const;
    bool all_finite() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);

private:
    GridPtr grid_;
    std::vector<double> data_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Two-component field (d = 2).
struct VectorField {
    ScalarField x;
    ScalarField y;

    VectorField() = default;
    explicit VectorField(GridPtr grid) : x(grid), y(grid) {}
    VectorField(ScalarField fx, ScalarField fy);

    const Grid& grid() const { return x.grid(); }
    const GridPtr& grid_ptr() const { return x.grid_ptr(); }
};

/// Spectral coefficients in the grid's layout (see Grid).
class Spectrum {
public:
    Spectrum() = default;
    explicit Spectrum(GridPtr grid);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    std::span<const cplx> values() const noexcept { return data_; }
    std::span<cplx> values() noexcept { return data_; }
    std::size_t size() const noexcept { return data_.size(); }
    cplx& operator[](std::size_t i) { return data_[i]; }
    const cplx& operator[](std::size_t i) const { return data_[i]; }
    cplx& at(int i, int j) { return data_[static_cast<std::size_t>(j) * grid_->spec_nx() + i]; }
    const cplx& at(int i, int j) const { return data_[static_cast<std::size_t>(j) * grid_->spec_nx() + i]; }

    /// Zero-mode coefficient (equals the spatial mean).
    double mean() const { return data_.empty() ? 0.0 : data_[0].real(); }

    Spectrum& operator+=(const Spectrum& o);
    Spectrum& operator-=(const Spectrum& o);
    Spectrum& operator*=(double s);

private:
    GridPtr grid_;
    std::vector<cplx> data_;
};

Spectrum operator+(Spectrum a, const Spectrum& b);
Spectrum operator-(Spectrum a, const Spectrum& b);
Spectrum operator*(double s, Spectrum a);

/// Throws ShapeError unless both grids are the same object or describe the
/// same discretization.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

} // namespace nsch
