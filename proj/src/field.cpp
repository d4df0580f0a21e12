#include "nsch/field.hpp"

#include "nsch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace nsch {

void require_same_grid(const Grid& a, const Grid& b, const char* what)
{
    if (&a == &b)
        return;
    if (a.mode() != b.mode() || a.nx() != b.nx() || a.ny() != b.ny() || a.lx() != b.lx() || a.ly() != b.ly()) {
        std::ostringstream os;
        os << what << ": grid mismatch (" << a.nx() << "x" << a.ny() << " vs " << b.nx() << "x" << b.ny() << ")";
        throw ShapeError(os.str());
    }
}

// ============================================================================
// ScalarField
// ============================================================================
ScalarField::ScalarField(GridPtr grid, double fill) : grid_(std::move(grid))
{
    if (!grid_)
        throw ShapeError("ScalarField: null grid");
    data_.assign(grid_->size(), fill);
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), data_(std::move(values))
{
    if (!grid_)
        throw ShapeError("ScalarField: null grid");
    if (data_.size() != grid_->size()) {
        std::ostringstream os;
        os << "ScalarField: " << data_.size() << " samples for a grid of " << grid_->size();
        throw ShapeError(os.str());
    }
}

ScalarField ScalarField::from_function(GridPtr grid, const std::function<double(double, double)>& f)
{
    ScalarField out(grid);
    for (int j = 0; j < grid->ny(); ++j)
        for (int i = 0; i < grid->nx(); ++i)
            out(i, j) = f(grid->x(i), grid->y(j));
    return out;
}

double ScalarField::min() const { return *std::min_element(data_.begin(), data_.end()); }
double ScalarField::max() const { return *std::max_element(data_.begin(), data_.end()); }

double ScalarField::max_abs() const
{
    double m = 0.0;
    for (double v : data_)
        m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::mean() const
{
    return std::accumulate(data_.begin(), data_.end(), 0.0) / static_cast<double>(data_.size());
}

double ScalarField::integral() const { return mean() * grid_->area(); }

bool ScalarField::all_finite() const
{
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o)
{
    require_same_grid(*grid_, *o.grid_, "ScalarField +=");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += o.data_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o)
{
    require_same_grid(*grid_, *o.grid_, "ScalarField -=");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= o.data_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s)
{
    for (double& v : data_)
        v *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

VectorField::VectorField(ScalarField fx, ScalarField fy) : x(std::move(fx)), y(std::move(fy))
{
    require_same_grid(x.grid(), y.grid(), "VectorField");
}

// ============================================================================
// Spectrum
// ============================================================================
Spectrum::Spectrum(GridPtr grid) : grid_(std::move(grid))
{
    if (!grid_)
        throw ShapeError("Spectrum: null grid");
    data_.assign(grid_->spec_size(), cplx(0.0, 0.0));
}

Spectrum& Spectrum::operator+=(const Spectrum& o)
{
    require_same_grid(*grid_, *o.grid_, "Spectrum +=");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += o.data_[i];
    return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& o)
{
    require_same_grid(*grid_, *o.grid_, "Spectrum -=");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= o.data_[i];
    return *this;
}

Spectrum& Spectrum::operator*=(double s)
{
    for (auto& c : data_)
        c *= s;
    return *this;
}

Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
Spectrum operator-(Spectrum a, const Spectrum& b) { return a -= b; }
Spectrum operator*(double s, Spectrum a) { return a *= s; }

} // namespace nsch
