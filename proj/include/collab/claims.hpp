#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace collab {

/// Claim-size distribution: analytic exponential or a sampled CDF.
///
/// Numeric CDFs are piecewise linear between samples; beyond the last
/// sample the tail is hard-clamped to its last value (no extrapolation),
/// so numeric laws stay conservative.
class ClaimLaw {
public:
    static ClaimLaw exponential(double rate);
    /// `s` must start at 0 with cdf(0)=0, strictly increasing s, cdf
    /// non-decreasing in [0,1].
    static ClaimLaw numeric(std::vector<double> s, std::vector<double> cdf);

    bool is_exponential() const { return exponential_; }
    double rate() const { return rate_; }
    double mean() const { return mean_; }

    double cdf(double s) const;
    /// tail(s) = 1 - F(s); s >= 0 required.
    double tail(double s) const;

    /// Generalized inverse CDF for u in [0,1); numeric laws clamp into the
    /// sampled range (consistent with the hard tail clamp).
    double quantile(double u) const;

    /// Mass F(b) - F(a) on [a, b], 0 <= a <= b.
    double prob_mass(double a, double b) const;
    /// First partial moment: integral of (s - a) dF(s) over [a, b].
    /// Exact for exponential laws; for numeric laws the density is taken
    /// constant within [a, b] (intended for lattice-sized subintervals).
    double partial_moment(double a, double b) const;

    bool same_as(const ClaimLaw& other) const;

private:
    ClaimLaw() = default;
    bool exponential_ = true;
    double rate_ = 1.0;
    double mean_ = 1.0;
    std::vector<double> s_;
    std::vector<double> cdf_;
};

struct ModelParams {
    double p1 = 1.0;          // premium rate, Company One
    double p2 = 1.0;          // premium rate, Company Two
    double lambda1 = 1.0;     // claim intensity, Company One
    double lambda2 = 1.0;     // claim intensity, Company Two
    ClaimLaw law1 = ClaimLaw::exponential(1.0);
    ClaimLaw law2 = ClaimLaw::exponential(1.0);
    double delta = 0.1;       // discount rate
    double a1 = 0.5;          // weight of Company One dividends

    double a2() const { return 1.0 - a1; }
    double lambda() const { return lambda1 + lambda2; }
    /// Weighted premium p = a1 p1 + a2 p2.
    double weighted_premium() const { return a1 * p1 + a2() * p2; }

    /// Symmetric setting: identical companies, equal weights.
    bool symmetric() const;
};

/// Returns every violated invariant; empty means ok. Never throws.
std::vector<std::string> validate(const ModelParams& params);

/// Throwing convenience used at construction boundaries (CLI, tests).
ModelParams make_validated(ModelParams params);

}  // namespace collab
