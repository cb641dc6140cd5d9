#pragma once

#include <cstddef>
#include <vector>

#include "nlcl/errors.hpp"

namespace nlcl {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

enum class Axis { x, y };

/**
 * Uniform Cartesian mesh.
 *
 * Cell (i, j) covers [x0 + i dx, x0 + (i+1) dx) x [y0 + j dy, y0 + (j+1) dy).
 * x-interface k (0 <= k <= nx) sits at x0 + k dx; interface k separates cells
 * k-1 and k, so interface k = i+1 is the right face of cell i.
 */
struct Grid {
    int nx = 0;
    int ny = 0;
    double dx = 0.0;
    double dy = 0.0;
    double x0 = 0.0;
    double y0 = 0.0;

    Grid() = default;
    Grid(int nx, int ny, double dx, double dy, double x0 = 0.0, double y0 = 0.0);

    std::size_t cell_count() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    double cell_area() const { return dx * dy; }
    double x_min() const { return x0; }
    double x_max() const { return x0 + nx * dx; }
    double y_min() const { return y0; }
    double y_max() const { return y0 + ny * dy; }

    double x_center(int i) const { return x0 + (i + 0.5) * dx; }
    double y_center(int j) const { return y0 + (j + 0.5) * dy; }
    double x_face(int k) const { return x0 + k * dx; }
    double y_face(int k) const { return y0 + k * dy; }

    bool contains_cell(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }

    // Row-major by j, then i.
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }

    bool operator==(const Grid&) const = default;
};

/// Center of cell (i, j); throws IndexError outside the mesh.
Vec2 cell_center(const Grid& grid, int i, int j);

void require_same_grid(const Grid& a, const Grid& b, const char* what);

/// Cell-averaged scalar on a Grid.
class Field2D {
public:
    Field2D() = default;
    explicit Field2D(const Grid& grid, double fill = 0.0);
    Field2D(const Grid& grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
    double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
    double at(int i, int j) const;

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double min() const;
    double max() const;
    bool all_finite() const;

    Field2D& operator+=(const Field2D& other);
    Field2D& operator-=(const Field2D& other);
    Field2D& operator*=(double s);

private:
    Grid grid_;
    std::vector<double> values_;
};

Field2D operator+(Field2D a, const Field2D& b);
Field2D operator-(Field2D a, const Field2D& b);
Field2D operator*(double s, Field2D a);

/**
 * One value per interface along an axis.
 *
 * x-axis: (nx+1) * ny values, face k of row j stored at j*(nx+1) + k.
 * y-axis: nx * (ny+1) values, face k of column i stored at k*nx + i.
 */
class InterfaceField {
public:
    InterfaceField() = default;
    InterfaceField(const Grid& grid, Axis axis, double fill = 0.0);

    const Grid& grid() const { return grid_; }
    Axis axis() const { return axis_; }
    std::size_t size() const { return values_.size(); }

    // Extent of the face lattice: faces along the axis, and the transverse count.
    int count_x() const { return axis_ == Axis::x ? grid_.nx + 1 : grid_.nx; }
    int count_y() const { return axis_ == Axis::y ? grid_.ny + 1 : grid_.ny; }

    /// (a, b) are lattice coordinates: for x-faces a is the face index k and b the row j;
    /// for y-faces a is the column i and b the face index k.
    double& operator()(int a, int b) { return values_[static_cast<std::size_t>(b) * count_x() + a]; }
    double operator()(int a, int b) const { return values_[static_cast<std::size_t>(b) * count_x() + a]; }

    Vec2 position(int a, int b) const;

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double max_abs() const;

private:
    Grid grid_;
    Axis axis_ = Axis::x;
    std::vector<double> values_;
};

/// dx * dy * sum |f_ij|
double l1_norm(const Field2D& f);

/// dx * dy * sum |f_ij - g_ij|
double l1_distance(const Field2D& f, const Field2D& g);

double total_mass(const Field2D& f);

} // namespace nlcl
