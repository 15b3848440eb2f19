#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "collab/claims.hpp"

namespace collab {

/// Strictly decreasing piecewise-linear curve hitting 0 at the right end of
/// its domain. Derivatives are segment slopes, so geometry, closed-form
/// evaluation and simulation all see the same curve.
class MonotoneCurve {
public:
    MonotoneCurve() = default;
    /// u strictly increasing, z strictly decreasing with z.back() == 0.
    MonotoneCurve(std::vector<double> u, std::vector<double> z);

    double domain_lo() const { return u_.front(); }
    /// M: the abscissa where the curve reaches 0.
    double domain_hi() const { return u_.back(); }
    std::size_t size() const { return u_.size(); }
    double u_at(std::size_t k) const { return u_[k]; }
    double z_at(std::size_t k) const { return z_[k]; }

    /// Curve value; clamps below domain_lo, 0 beyond domain_hi.
    double value(double u) const;
    /// Segment slope at u (negative everywhere on the domain interior).
    double derivative(double u) const;
    /// inverse(value(u)) == u for z in [0, value(domain_lo)].
    double inverse(double z) const;

private:
    std::size_t segment(double u) const;
    std::vector<double> u_;
    std::vector<double> z_;
};

/// A curve strategy: vertex plus the two branch curves.
/// xi1 lives on [ubar, M1] with xi1(ubar) = ybar and parametrizes the
/// branch below the vertex as (u + (p1/p2) xi1(u), xi1(u)); xi2 mirrors it
/// above the vertex as (xi2(v), v + (p2/p1) xi2(v)).
struct CurveSpec {
    double xbar = 0.0;
    double ybar = 0.0;
    MonotoneCurve xi1;
    MonotoneCurve xi2;

    double ubar(const ModelParams& p) const { return xbar - (p.p1 / p.p2) * ybar; }
    double vbar(const ModelParams& p) const { return ybar - (p.p2 / p.p1) * xbar; }
};

/// Checks the structural invariants (monotone branches, endpoints matching
/// the vertex); returns violations, empty when valid.
std::vector<std::string> validate(const CurveSpec& spec, const ModelParams& params);

enum class RegionLabel { C, A0, A1, A2, B0, B1, B2 };

const char* region_name(RegionLabel label);

/// Region of a first-quadrant state under the curve strategy. Boundary ties
/// resolve by precedence A0 > A1 > A2 > B0 > B1 > B2 > C; curve membership
/// is tested within +-tol (default: half the xi1 sample spacing).
RegionLabel classify(const CurveSpec& spec, const ModelParams& params, double x, double y,
                     double tol = -1.0);

/// Dividend rate keeping the state on the lower branch: -p2 / xi1'.
double rate_on_A1(const CurveSpec& spec, const ModelParams& params, double x, double y);
/// Mirrored rate on the upper branch: -p1 / xi2'.
double rate_on_A2(const CurveSpec& spec, const ModelParams& params, double x, double y);

/// Immediate payments from a payment-region state back onto the curve:
/// (company one lump, company two lump).
std::pair<double, double> lump_sum(const CurveSpec& spec, const ModelParams& params, double x,
                                   double y);

/// Builds the mirror image (x and y roles swapped) of a spec; for a
/// symmetric model a self-mirrored spec satisfies mirror(spec) == spec.
CurveSpec mirror(const CurveSpec& spec);

}  // namespace collab
