#include "collab/grid.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace collab {

GridFunction::GridFunction(Grid2D grid, double fill) : grid_(grid) {
    if (grid.step <= 0.0 || grid.nx < 2 || grid.ny < 2)
        throw std::invalid_argument("GridFunction: degenerate grid");
    samples_.assign(grid.nodes(), fill);
}

double GridFunction::operator()(double x, double y) const {
    const double h = grid_.step;
    double tx = std::clamp(x / h, 0.0, static_cast<double>(grid_.nx - 1));
    double ty = std::clamp(y / h, 0.0, static_cast<double>(grid_.ny - 1));
    std::size_t i = std::min(static_cast<std::size_t>(tx), grid_.nx - 2);
    std::size_t j = std::min(static_cast<std::size_t>(ty), grid_.ny - 2);
    double fx = tx - static_cast<double>(i);
    double fy = ty - static_cast<double>(j);
    double v00 = at(i, j), v10 = at(i + 1, j), v01 = at(i, j + 1), v11 = at(i + 1, j + 1);
    return (1.0 - fy) * ((1.0 - fx) * v00 + fx * v10) + fy * ((1.0 - fx) * v01 + fx * v11);
}

double GridFunction::dx(std::size_t i, std::size_t j) const {
    const double h = grid_.step;
    if (i == 0) return (at(1, j) - at(0, j)) / h;
    if (i == grid_.nx - 1) return (at(i, j) - at(i - 1, j)) / h;
    return (at(i + 1, j) - at(i - 1, j)) / (2.0 * h);
}

double GridFunction::dy(std::size_t i, std::size_t j) const {
    const double h = grid_.step;
    if (j == 0) return (at(i, 1) - at(i, 0)) / h;
    if (j == grid_.ny - 1) return (at(i, j) - at(i, j - 1)) / h;
    return (at(i, j + 1) - at(i, j - 1)) / (2.0 * h);
}

double GridFunction::sup_abs() const {
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
}

double GridFunction::sup_diff(const GridFunction& other) const {
    assert(grid_ == other.grid_);
    double m = 0.0;
    for (std::size_t k = 0; k < samples_.size(); ++k)
        m = std::max(m, std::abs(samples_[k] - other.samples_[k]));
    return m;
}

}  // namespace collab
