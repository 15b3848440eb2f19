#pragma once

#include <cstddef>
#include <vector>

namespace collab {

/// Uniform lattice on [0, (nx-1)*step] x [0, (ny-1)*step], origin (0,0).
struct Grid2D {
    double step = 0.0;
    std::size_t nx = 0;  // node count along x
    std::size_t ny = 0;  // node count along y

    double x_max() const { return step * static_cast<double>(nx - 1); }
    double y_max() const { return step * static_cast<double>(ny - 1); }
    double x(std::size_t i) const { return step * static_cast<double>(i); }
    double y(std::size_t j) const { return step * static_cast<double>(j); }
    std::size_t nodes() const { return nx * ny; }
    bool operator==(const Grid2D&) const = default;
};

/// Bivariate function sampled on a Grid2D, bilinear between nodes.
/// Exact at lattice nodes; evaluation clamps to the domain.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(Grid2D grid, double fill = 0.0);

    const Grid2D& grid() const { return grid_; }
    double& at(std::size_t i, std::size_t j) { return samples_[j * grid_.nx + i]; }
    double at(std::size_t i, std::size_t j) const { return samples_[j * grid_.nx + i]; }

    /// Bilinear interpolation; arguments clamped into the domain.
    double operator()(double x, double y) const;

    /// Partial derivatives by central differences, one-sided at edges.
    double dx(std::size_t i, std::size_t j) const;
    double dy(std::size_t i, std::size_t j) const;

    double sup_abs() const;
    /// max node |this - other|; grids must match.
    double sup_diff(const GridFunction& other) const;

    const std::vector<double>& samples() const { return samples_; }
    std::vector<double>& samples() { return samples_; }

private:
    Grid2D grid_;
    std::vector<double> samples_;
};

}  // namespace collab
