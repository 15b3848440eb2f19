#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "collab/curve.hpp"
#include "collab/evaluate.hpp"
#include "collab/field.hpp"

namespace collab {

/// Weight pairing used in the base-case value (see take_run_value).
/// payoff: a first claim to Company One ruins it, so the surviving Company
/// Two value carries weight a2 (consistent with the terminal payoff of the
/// objective). paper_display: the transposed pairing (a1 with V2, a2 with
/// V1). Both are computed and logged; payoff is the default.
enum class V0Convention { payoff, paper_display };

/// Base case: pay the whole surplus immediately, then stream premiums until
/// the first claim ruins the company that faces it.
/// V0(x,y) = a1 x + a2 y + p/(delta+lambda)
///           + [lambda1 w21 V2(0) + lambda2 w12 V1(0)] / (delta+lambda)
/// with (w21, w12) = (a2, a1) for payoff, (a1, a2) for paper_display.
/// With no claims at all: a1 x + a2 y + p/delta.
GridFunction take_run_value(const ModelParams& params, const BoundaryPayoffs& payoffs,
                            const Grid2D& grid, V0Convention convention = V0Convention::payoff);

/// H from the previous iterate: I(prev) + U, with partials.
HField build_H(const ModelParams& params, const BoundaryPayoffs& payoffs,
               const GridFunction& prev);

struct VertexResult {
    double x = 0.0;
    double y = 0.0;
    bool interior = false;  // lattice argmax away from the domain boundary
    bool refined = false;   // critical-point refinement succeeded
};

/// Optimal vertex: lattice argmax of H/(delta+lambda) - a1 x - a2 y
/// (ties broken toward the lexicographically smallest node), refined by the
/// critical-point system Hx = a1 (delta+lambda), Hy = a2 (delta+lambda).
/// Symmetric models refine along the diagonal.
VertexResult find_vertex(const HField& h, const ModelParams& params);

struct CurveBuildResult {
    bool ok = false;
    CurveSpec spec;
    std::string message;
    std::size_t multiple_root_events = 0;  // u-samples with several candidate roots
};

/// Branch curves from the first-order optimality condition:
/// z1(u) solves Hx(u + (p1/p2) z, z) = a1 (delta+lambda), largest root
/// below the previous sample, by bisection; mirrored for z2 with Hy.
/// Reports failure (no bracket, monotonicity violation, grid exit) instead
/// of repairing the curve.
CurveBuildResult solve_euler_lagrange(const HField& h, const ModelParams& params,
                                      const VertexResult& vertex);

struct IterationState {
    std::size_t n = 0;
    double vertex_x = 0.0;
    double vertex_y = 0.0;
    double m1 = 0.0;  // right end of xi1's domain
    double m2 = 0.0;  // right end of xi2's domain
    double sup_delta = 0.0;       // sup |Vn - Vn-1|
    double min_gap = 0.0;         // min node (Vn - Vn-1); monotone scheme => >= -eps
    double curve_delta = 0.0;     // sup distance between successive branch curves
    double max_l_residual = 0.0;  // max generator residual of Vn against H_{n-1}
    double env_lower = 0.0;  // worst violation of the affine lower envelope (positive = broken)
    double env_upper = 0.0;  // worst violation of the affine upper envelope
    bool curve_ok = true;
    std::string note;
};

struct IterateResult {
    std::vector<IterationState> states;
    CurveSpec final_spec;
    GridFunction last_iterate;     // V^{n_max}
    FixedPointResult final_value;  // full curve-strategy value of final_spec
};

/// The full iterative scheme: starting from the base case, each step builds
/// H from the previous iterate, finds the optimal vertex and branch curves,
/// and evaluates the one-step value. The returned final value is the fixed
/// point of the final curve strategy. Optional JSON-lines log, one object
/// per iteration.
IterateResult run(const ModelParams& params, const BoundaryPayoffs& payoffs, const Grid2D& grid,
                  std::size_t n_max, double fixed_point_tol = 1e-6,
                  V0Convention convention = V0Convention::payoff, std::ostream* log = nullptr);

}  // namespace collab
