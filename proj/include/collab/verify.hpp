#pragma once

#include <cstddef>
#include <string>

#include "collab/curve.hpp"
#include "collab/evaluate.hpp"
#include "collab/field.hpp"
#include "collab/univariate.hpp"

namespace collab {

struct EnvelopeReport {
    bool pass = true;
    // Worst signed violations (positive = broken) of
    // a1 x + a2 y + p/(delta+lambda) <= V <= a1 x + a2 y + p/delta.
    double worst_lower = 0.0;
    double worst_upper = 0.0;
    std::size_t worst_i = 0, worst_j = 0;
    double tol = 0.0;
};

/// Affine growth envelope at every node; tolerance 1e-6 * (1 + sup |V|).
EnvelopeReport check_envelope(const GridFunction& value, const ModelParams& params);

struct LipschitzReport {
    bool pass = true;
    double worst_lower = 0.0;  // violation of the slope lower bound (a_k h)
    double worst_upper = 0.0;  // violation of the exponential upper bound
    std::size_t worst_i = 0, worst_j = 0;
    double tol = 0.0;
};

/// Directional difference bounds at lattice step h in both coordinates:
/// a1 h <= V(x+h,y) - V(x,y) <= (e^{(delta+lambda) h / p1} - 1) V(x,y),
/// mirrored in y with a2, p2.
LipschitzReport check_lipschitz(const GridFunction& value, const ModelParams& params);

struct ResidualReport {
    double max_l_residual = 0.0;
    double max_dx_residual = 0.0;
    double max_dy_residual = 0.0;
    std::size_t worst_i = 0, worst_j = 0;
    std::string worst_region;  // label of the worst node when a spec is given
    bool pass = false;
    double tol = 0.0;
};

/// Default supersolution tolerance: 5 * step * (1 + sup |V|) * delta.
double supersolution_tol(const GridFunction& value, const ModelParams& params);

/// Numeric supersolution check: all three dynamic-programming components
/// <= tol at interior nodes. When a spec is given, nodes bordering a region
/// change use one-sided differences from their own region's side.
ResidualReport check_supersolution(const GridFunction& value, const ModelParams& params,
                                   const BoundaryPayoffs& payoffs, double tol,
                                   const CurveSpec* spec = nullptr);

struct TripleComparison {
    GridFunction stand_alone;   // a1 V1(x) + a2 V2(y)
    GridFunction merger_half;   // V_M(x+y) / 2
    double min_gap_merger = 0.0;      // min node (V - V_M/2)
    double min_gap_stand_alone = 0.0; // min node (V - V_S)
    bool merger_dominated = false;    // V > V_M/2 everywhere
    bool stand_alone_dominated = false;
};

/// Collaboration vs stand-alone vs half-merger value surfaces; the merger
/// half is meaningful for the symmetric equally-weighted setting.
TripleComparison compare_triple(const GridFunction& value, const ModelParams& params,
                                const BoundaryPayoffs& payoffs);

}  // namespace collab
