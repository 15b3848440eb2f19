#include "collab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace collab {

EnvelopeReport check_envelope(const GridFunction& value, const ModelParams& params) {
    const Grid2D& g = value.grid();
    EnvelopeReport r;
    r.tol = 1e-6 * (1.0 + value.sup_abs());
    const double lo_c = params.weighted_premium() / (params.delta + params.lambda());
    const double hi_c = params.weighted_premium() / params.delta;
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double affine = params.a1 * g.x(i) + params.a2() * g.y(j);
            const double v = value.at(i, j);
            const double low_gap = (affine + lo_c) - v;   // > 0 breaks the lower bound
            const double high_gap = v - (affine + hi_c);  // > 0 breaks the upper bound
            if (low_gap > r.worst_lower || high_gap > r.worst_upper) {
                r.worst_i = i;
                r.worst_j = j;
            }
            r.worst_lower = std::max(r.worst_lower, low_gap);
            r.worst_upper = std::max(r.worst_upper, high_gap);
        }
    }
    r.pass = r.worst_lower <= r.tol && r.worst_upper <= r.tol;
    return r;
}

LipschitzReport check_lipschitz(const GridFunction& value, const ModelParams& params) {
    const Grid2D& g = value.grid();
    LipschitzReport r;
    r.tol = 1e-6 * (1.0 + value.sup_abs());
    const double h = g.step;
    const double dl = params.delta + params.lambda();
    const double up1 = std::expm1(dl * h / params.p1);
    const double up2 = std::expm1(dl * h / params.p2);
    auto track = [&](double low_gap, double high_gap, std::size_t i, std::size_t j) {
        if (low_gap > r.worst_lower || high_gap > r.worst_upper) {
            r.worst_i = i;
            r.worst_j = j;
        }
        r.worst_lower = std::max(r.worst_lower, low_gap);
        r.worst_upper = std::max(r.worst_upper, high_gap);
    };
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i + 1 < g.nx; ++i) {
            const double d = value.at(i + 1, j) - value.at(i, j);
            track(params.a1 * h - d, d - up1 * value.at(i, j), i, j);
        }
    }
    for (std::size_t j = 0; j + 1 < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double d = value.at(i, j + 1) - value.at(i, j);
            track(params.a2() * h - d, d - up2 * value.at(i, j), i, j);
        }
    }
    r.pass = r.worst_lower <= r.tol && r.worst_upper <= r.tol;
    return r;
}

double supersolution_tol(const GridFunction& value, const ModelParams& params) {
    return 5.0 * value.grid().step * (1.0 + value.sup_abs()) * params.delta;
}

ResidualReport check_supersolution(const GridFunction& value, const ModelParams& params,
                                   const BoundaryPayoffs& payoffs, double tol,
                                   const CurveSpec* spec) {
    const Grid2D& g = value.grid();
    ResidualReport r;
    r.tol = tol;
    r.max_l_residual = r.max_dx_residual = r.max_dy_residual =
        -std::numeric_limits<double>::infinity();

    GridFunction h_grid = build_integral_grid(params, value);
    {
        GridFunction u = build_overflow_grid(params, payoffs, g);
        for (std::size_t k = 0; k < h_grid.samples().size(); ++k)
            h_grid.samples()[k] += u.samples()[k];
    }

    std::vector<RegionLabel> labels;
    if (spec) {
        labels.resize(g.nodes());
        for (std::size_t j = 0; j < g.ny; ++j)
            for (std::size_t i = 0; i < g.nx; ++i)
                labels[j * g.nx + i] = classify(*spec, params, g.x(i), g.y(j), 0.5 * g.step);
    }
    auto label_at = [&](std::size_t i, std::size_t j) { return labels[j * g.nx + i]; };

    const double dl = params.delta + params.lambda();
    const double step = g.step;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j + 1 < g.ny; ++j) {
        for (std::size_t i = 1; i + 1 < g.nx; ++i) {
            double vx = value.dx(i, j);
            double vy = value.dy(i, j);
            if (spec) {
                // Use a one-sided difference from the node's own region when
                // the opposite neighbor lies in a different region.
                RegionLabel me = label_at(i, j);
                bool right_diff = label_at(i + 1, j) != me;
                bool left_diff = label_at(i - 1, j) != me;
                if (right_diff && !left_diff)
                    vx = (value.at(i, j) - value.at(i - 1, j)) / step;
                else if (left_diff && !right_diff)
                    vx = (value.at(i + 1, j) - value.at(i, j)) / step;
                bool up_diff = label_at(i, j + 1) != me;
                bool down_diff = label_at(i, j - 1) != me;
                if (up_diff && !down_diff)
                    vy = (value.at(i, j) - value.at(i, j - 1)) / step;
                else if (down_diff && !up_diff)
                    vy = (value.at(i, j + 1) - value.at(i, j)) / step;
            }
            const double l_part = params.p1 * vx + params.p2 * vy - dl * value.at(i, j) +
                                  h_grid.at(i, j);
            const double dx_part = params.a1 - vx;
            const double dy_part = params.a2() - vy;
            r.max_l_residual = std::max(r.max_l_residual, l_part);
            r.max_dx_residual = std::max(r.max_dx_residual, dx_part);
            r.max_dy_residual = std::max(r.max_dy_residual, dy_part);
            const double m = std::max(l_part, std::max(dx_part, dy_part));
            if (m > worst) {
                worst = m;
                r.worst_i = i;
                r.worst_j = j;
                if (spec) r.worst_region = region_name(label_at(i, j));
            }
        }
    }
    r.pass = r.max_l_residual <= tol && r.max_dx_residual <= tol && r.max_dy_residual <= tol;
    return r;
}

TripleComparison compare_triple(const GridFunction& value, const ModelParams& params,
                                const BoundaryPayoffs& payoffs) {
    const Grid2D& g = value.grid();
    TripleComparison t;
    t.stand_alone = GridFunction(g);
    t.merger_half = GridFunction(g);
    UnivariateValue vm = merger_value(params);
    t.min_gap_merger = std::numeric_limits<double>::infinity();
    t.min_gap_stand_alone = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double vs =
                params.a1 * payoffs.v1.value(g.x(i)) + params.a2() * payoffs.v2.value(g.y(j));
            const double vmh = 0.5 * vm.value(g.x(i) + g.y(j));
            t.stand_alone.at(i, j) = vs;
            t.merger_half.at(i, j) = vmh;
            t.min_gap_merger = std::min(t.min_gap_merger, value.at(i, j) - vmh);
            t.min_gap_stand_alone = std::min(t.min_gap_stand_alone, value.at(i, j) - vs);
        }
    }
    t.merger_dominated = t.min_gap_merger > 0.0;
    t.stand_alone_dominated = t.min_gap_stand_alone >= 0.0;
    return t;
}

}  // namespace collab
