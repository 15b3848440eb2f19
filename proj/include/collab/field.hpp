#pragma once

#include <functional>

#include "collab/claims.hpp"
#include "collab/grid.hpp"
#include "collab/univariate.hpp"

namespace collab {

/// Single-company continuation values used when one company is ruined.
/// payoff() already applies the zero-on-negative convention.
struct BoundaryPayoffs {
    UnivariateValue v1;  // surviving Company One value
    UnivariateValue v2;  // surviving Company Two value
};

BoundaryPayoffs make_boundary_payoffs(const ModelParams& params);

/// integral over [lo, hi] of g(alpha) dF(alpha), with g piecewise linear on
/// subintervals of width at most max_sub and exact per-subinterval
/// distribution moments. Exact for linear g under exponential laws.
double integrate_dF(const ClaimLaw& law, double lo, double hi, double max_sub,
                    const std::function<double(double)>& g);

/// Overflow term: lambda1 a2 V2(y) tail1(x+y) + lambda2 a1 V1(x) tail2(x+y).
double overflow_term_U(const ModelParams& params, const BoundaryPayoffs& payoffs, double x,
                       double y);

/// Claim-jump expectation operator applied to w at a single point:
///   lambda1 [int_0^x w(x-a,y) dF1 + int_x^{x+y} w(0,x+y-a) dF1]
/// + lambda2 [int_0^y w(x,y-a) dF2 + int_y^{x+y} w(x+y-a,0) dF2]
/// Quadrature subintervals are lattice-aligned so lattice-node values agree
/// with build_integral_grid exactly.
double integral_operator_I(const ModelParams& params, const GridFunction& w, double x, double y);

/// The same operator evaluated at every lattice node. Exponential laws use
/// O(n^2) exponential-kernel recursions; numeric laws fall back to the
/// direct quadrature per node.
GridFunction build_integral_grid(const ModelParams& params, const GridFunction& w);

/// overflow_term_U at every node.
GridFunction build_overflow_grid(const ModelParams& params, const BoundaryPayoffs& payoffs,
                                 const Grid2D& grid);

/// Infinitesimal generator with claim and overflow terms:
///   p1 wx + p2 wy - (delta+lambda) w(x,y) + I(w)(x,y) + U(x,y).
/// wx, wy are caller-supplied partial derivatives.
double generator_L(const ModelParams& params, const BoundaryPayoffs& payoffs,
                   const GridFunction& w, double x, double y, double wx, double wy);

struct HjbResidual {
    double l_part = 0.0;   // generator component
    double dx_part = 0.0;  // a1 - w_x
    double dy_part = 0.0;  // a2 - w_y
    double max_part = 0.0;
};

/// Dynamic-programming residual max{L(w), a1 - w_x, a2 - w_y} at an
/// interior lattice node, derivatives by central differences.
HjbResidual hjb_residual(const ModelParams& params, const BoundaryPayoffs& payoffs,
                         const GridFunction& w, std::size_t i, std::size_t j);

}  // namespace collab
