#pragma once

#include <functional>
#include <vector>

#include "collab/curve.hpp"
#include "collab/field.hpp"
#include "collab/grid.hpp"

namespace collab {

/// Claim-jump expectation of a continuation value plus the overflow term,
/// H = I(W0) + U, with central-difference partials.
struct HField {
    GridFunction h;
    GridFunction hx;
    GridFunction hy;
};

HField build_hfield(const ModelParams& params, const BoundaryPayoffs& payoffs,
                    const GridFunction& w0);

/// Value of the one-step curve strategy along the lower branch, sampled at
/// the branch curve's own abscissae; linear between samples.
/// k(u) is the strategy value at the curve point (u + (p1/p2) xi1(u), xi1(u)).
struct KProfile {
    std::vector<double> u;
    std::vector<double> k;
    double operator()(double uu) const;
};

/// k along xi1 built from the recursion
///   k(ubar) = (p + H(vertex)) / (delta + lambda),
///   k(u) = k(u-) e^{beta (xi1(u) - xi1(u-))}
///          + int [a1 - H(on curve) xi1'/p2] e^{beta (xi1(u)-xi1(w))} dw,
/// beta = (delta+lambda)/p2; every exponent is <= 0 so the accumulation is
/// stable. h is evaluated as h(x, y).
KProfile k_profile(const CurveSpec& spec, const ModelParams& params,
                   const std::function<double(double, double)>& h);

KProfile k_profile(const CurveSpec& spec, const ModelParams& params, const HField& h);

/// Mirrored profile along xi2 (roles of the companies swapped); k_tilde(v)
/// is the value at (xi2(v), v + (p2/p1) xi2(v)).
KProfile k_tilde_profile(const CurveSpec& spec, const ModelParams& params,
                         const std::function<double(double, double)>& h);

/// One-step curve-strategy value W on the whole grid, assembled from the
/// explicit region formulas:
///   payment regions: weighted lump plus the curve value k / k_tilde;
///   no-action region: discounted H along the premium characteristic up to
///   the curve, via a per-cell semigroup recursion.
/// Throws if the curve leaves the grid domain.
GridFunction one_step_value(const CurveSpec& spec, const ModelParams& params,
                            const BoundaryPayoffs& payoffs, const GridFunction& w0);

/// Same, with H = I(w0) + U supplied directly (grid of one_step's output).
GridFunction one_step_with_h(const CurveSpec& spec, const ModelParams& params,
                             const GridFunction& h_grid);

struct FixedPointResult {
    GridFunction value;
    std::size_t sweeps = 0;
    std::vector<double> sup_deltas;  // per-sweep sup |w_{n+1} - w_n|
    bool converged = false;
};

/// Value of the full curve strategy: fixed point of the one-step operator
/// on the given grid, starting from w0(x,y) = a1 x + a2 y. Converges
/// geometrically with ratio lambda/(delta+lambda); a ratio monitor flags
/// numeric instability. Convergence when sup-delta <= tol * (1 + sup |w|).
FixedPointResult fixed_point_value(const CurveSpec& spec, const ModelParams& params,
                                   const BoundaryPayoffs& payoffs, const Grid2D& grid,
                                   double tol = 1e-6, std::size_t max_sweeps = 5000);

/// Affine seed a1 x + a2 y on the grid.
GridFunction affine_seed(const ModelParams& params, const Grid2D& grid);

}  // namespace collab
