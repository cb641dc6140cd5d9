#include "nlcl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nlcl {

Grid::Grid(int nx_, int ny_, double dx_, double dy_, double x0_, double y0_)
    : nx(nx_), ny(ny_), dx(dx_), dy(dy_), x0(x0_), y0(y0_)
{
    // The scheme itself needs three cells per direction; that is checked by
    // scenario validation so that small grids remain usable for I/O.
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("grid needs at least one cell per direction");
    if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy))
        throw std::invalid_argument("grid spacing must be positive and finite");
    if (!std::isfinite(x0) || !std::isfinite(y0))
        throw std::invalid_argument("grid origin must be finite");
}

Vec2 cell_center(const Grid& grid, int i, int j)
{
    if (!grid.contains_cell(i, j)) {
        std::ostringstream msg;
        msg << "cell index (" << i << ", " << j << ") outside " << grid.nx << "x" << grid.ny << " grid";
        throw IndexError(msg.str());
    }
    return {grid.x_center(i), grid.y_center(j)};
}

void require_same_grid(const Grid& a, const Grid& b, const char* what)
{
    if (!(a == b))
        throw StructuralError(std::string("mismatched grids: ") + what);
}

Field2D::Field2D(const Grid& grid, double fill) : grid_(grid), values_(grid.cell_count(), fill) {}

Field2D::Field2D(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.cell_count())
        throw StructuralError("field value count does not match nx*ny");
}

double Field2D::at(int i, int j) const
{
    if (!grid_.contains_cell(i, j))
        throw IndexError("field index out of range");
    return (*this)(i, j);
}

double Field2D::min() const
{
    return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double Field2D::max() const
{
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

bool Field2D::all_finite() const
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field2D& Field2D::operator+=(const Field2D& other)
{
    require_same_grid(grid_, other.grid_, "field addition");
    for (std::size_t k = 0; k < values_.size(); ++k)
        values_[k] += other.values_[k];
    return *this;
}

Field2D& Field2D::operator-=(const Field2D& other)
{
    require_same_grid(grid_, other.grid_, "field subtraction");
    for (std::size_t k = 0; k < values_.size(); ++k)
        values_[k] -= other.values_[k];
    return *this;
}

Field2D& Field2D::operator*=(double s)
{
    for (auto& v : values_)
        v *= s;
    return *this;
}

Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }
Field2D operator*(double s, Field2D a) { return a *= s; }

InterfaceField::InterfaceField(const Grid& grid, Axis axis, double fill) : grid_(grid), axis_(axis)
{
    values_.assign(static_cast<std::size_t>(count_x()) * count_y(), fill);
}

Vec2 InterfaceField::position(int a, int b) const
{
    if (axis_ == Axis::x)
        return {grid_.x_face(a), grid_.y_center(b)};
    return {grid_.x_center(a), grid_.y_face(b)};
}

double InterfaceField::max_abs() const
{
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

double l1_norm(const Field2D& f)
{
    double sum = 0.0;
    for (double v : f.values())
        sum += std::abs(v);
    return f.grid().cell_area() * sum;
}

double l1_distance(const Field2D& f, const Field2D& g)
{
    require_same_grid(f.grid(), g.grid(), "l1 distance");
    double sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
        sum += std::abs(f.values()[k] - g.values()[k]);
    return f.grid().cell_area() * sum;
}

double total_mass(const Field2D& f)
{
    double sum = 0.0;
    for (double v : f.values())
        sum += v;
    return f.grid().cell_area() * sum;
}

} // namespace nlcl
