#pragma once

#include <vector>

#include "collab/claims.hpp"

namespace collab {

/// Value function of the single-company dividend problem under the optimal
/// barrier strategy: pay all surplus above the barrier.
///
/// Exponential claims use the exact two-exponential closed form; numeric
/// laws carry a sampled solution. Either way value() is strictly
/// increasing, has slope 1 above the barrier, and satisfies
/// x <= value(x) <= x + premium/discount.
class UnivariateValue {
public:
    double barrier() const { return barrier_; }
    /// Value at surplus x >= 0; linear slope-1 extension above the barrier.
    double value(double x) const;
    /// Boundary-payoff convention: 0 for x < 0, value(x) otherwise.
    double payoff(double x) const { return x < 0.0 ? 0.0 : value(x); }

    double premium() const { return premium_; }
    double intensity() const { return intensity_; }
    double discount() const { return discount_; }

    // Representation; populated by the solvers.
    enum class Kind { no_claims, closed_exponential, sampled };
    Kind kind_ = Kind::no_claims;
    double barrier_ = 0.0;
    double premium_ = 0.0;
    double intensity_ = 0.0;
    double discount_ = 0.0;
    // closed_exponential: h(x) = (t1+mu) e^{t1 x} - (t2+mu) e^{t2 x}, scaled
    // by 1/h'(barrier).
    double theta1_ = 0.0, theta2_ = 0.0, mu_ = 0.0, scale_ = 1.0;
    // sampled: uniform step on [0, barrier].
    double step_ = 0.0;
    std::vector<double> samples_;
};

/// Solves the one-company problem. Requires the net profit condition
/// premium > intensity * mean; throws otherwise.
UnivariateValue solve_standalone(double premium, double intensity, const ClaimLaw& law,
                                 double discount);

/// Merged-company value: both premiums pooled, claims arrive at
/// lambda1 + lambda2 with the intensity-weighted mixture law.
UnivariateValue merger_value(const ModelParams& params);

/// The intensity-weighted mixture (lambda1 F1 + lambda2 F2) / lambda.
ClaimLaw mixture_law(const ModelParams& params);

}  // namespace collab
