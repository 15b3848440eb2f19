#pragma once

#include <cstdint>
#include <variant>

#include "collab/curve.hpp"
#include "collab/field.hpp"

namespace collab {

/// Stationary dividend policies the simulator can follow.
struct CurvePolicy {
    CurveSpec spec;
};
/// Single company k alone under a barrier strategy; the payoff is its own
/// undiscounted-weight dividend stream (cross-checks the univariate solver).
struct UnivariateBarrierPolicy {
    double level = 0.0;
    int company = 1;  // 1 or 2
};
struct PayNothingPolicy {};
struct TakeRunPolicy {};

using StrategyPolicy =
    std::variant<CurvePolicy, UnivariateBarrierPolicy, PayNothingPolicy, TakeRunPolicy>;

struct SimEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t paths = 0;
    std::uint64_t seed = 0;
    std::uint64_t capped_paths = 0;  // paths stopped by the event cap
};

/// One path of the controlled bivariate surplus under the policy, with
/// deficit transfers and the weighted discounted-dividend payoff plus the
/// survivor's continuation value at ruin. Deterministic in (seed).
/// Continuous-rate segments are discounted in closed form; only claim
/// arrivals are discrete events (capped at 10^6 per path).
double simulate_path(const ModelParams& params, const BoundaryPayoffs& payoffs,
                     const StrategyPolicy& policy, double x0, double y0, std::uint64_t seed,
                     bool* capped = nullptr);

/// Mean and standard error over independent paths; per-path seeds derive
/// deterministically from (seed, path index), and the reduction order is
/// fixed, so reruns are bit-identical regardless of thread count.
SimEstimate estimate(const ModelParams& params, const BoundaryPayoffs& payoffs,
                     const StrategyPolicy& policy, double x0, double y0, std::uint64_t paths,
                     std::uint64_t seed);

/// Direct single-company barrier-strategy oracle (no weights).
SimEstimate simulate_univariate_barrier(double premium, double intensity, const ClaimLaw& law,
                                        double discount, double barrier, double x0,
                                        std::uint64_t paths, std::uint64_t seed);

}  // namespace collab
