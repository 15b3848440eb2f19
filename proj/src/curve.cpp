#include "collab/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace collab {

MonotoneCurve::MonotoneCurve(std::vector<double> u, std::vector<double> z)
    : u_(std::move(u)), z_(std::move(z)) {
    if (u_.size() != z_.size() || u_.size() < 2)
        throw std::invalid_argument("MonotoneCurve: need matched samples, length >= 2");
    for (std::size_t k = 1; k < u_.size(); ++k) {
        if (!(u_[k] > u_[k - 1]))
            throw std::invalid_argument("MonotoneCurve: abscissae must strictly increase");
        if (!(z_[k] < z_[k - 1]))
            throw std::invalid_argument("MonotoneCurve: values must strictly decrease");
    }
    if (std::abs(z_.back()) > 1e-12)
        throw std::invalid_argument("MonotoneCurve: curve must reach 0 at the right endpoint");
    z_.back() = 0.0;
}

std::size_t MonotoneCurve::segment(double u) const {
    auto it = std::upper_bound(u_.begin(), u_.end(), u);
    std::size_t k = static_cast<std::size_t>(it - u_.begin());
    if (k == 0) return 0;
    return std::min(k - 1, u_.size() - 2);
}

double MonotoneCurve::value(double u) const {
    if (u <= u_.front()) return z_.front();
    if (u >= u_.back()) return 0.0;
    std::size_t k = segment(u);
    double t = (u - u_[k]) / (u_[k + 1] - u_[k]);
    return z_[k] + t * (z_[k + 1] - z_[k]);
}

double MonotoneCurve::derivative(double u) const {
    std::size_t k = segment(std::clamp(u, u_.front(), u_.back()));
    return (z_[k + 1] - z_[k]) / (u_[k + 1] - u_[k]);
}

double MonotoneCurve::inverse(double z) const {
    if (z <= 0.0) return u_.back();
    if (z >= z_.front()) return u_.front();
    // z_ strictly decreasing: binary search for the containing segment.
    std::size_t lo = 0, hi = z_.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (z_[mid] >= z) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double t = (z_[lo] - z) / (z_[lo] - z_[hi]);
    return u_[lo] + t * (u_[hi] - u_[lo]);
}

std::vector<std::string> validate(const CurveSpec& spec, const ModelParams& params) {
    std::vector<std::string> bad;
    if (spec.xbar < 0.0 || spec.ybar < 0.0) bad.push_back("vertex outside the first quadrant");
    if (spec.xi1.size() < 2 || spec.xi2.size() < 2) {
        bad.push_back("branch curves missing samples");
        return bad;
    }
    if (std::abs(spec.xi1.domain_lo() - spec.ubar(params)) > 1e-9)
        bad.push_back("xi1 domain does not start at ubar");
    if (std::abs(spec.xi1.value(spec.xi1.domain_lo()) - spec.ybar) > 1e-9)
        bad.push_back("xi1(ubar) != ybar");
    if (std::abs(spec.xi2.domain_lo() - spec.vbar(params)) > 1e-9)
        bad.push_back("xi2 domain does not start at vbar");
    if (std::abs(spec.xi2.value(spec.xi2.domain_lo()) - spec.xbar) > 1e-9)
        bad.push_back("xi2(vbar) != xbar");
    return bad;
}

const char* region_name(RegionLabel label) {
    switch (label) {
        case RegionLabel::C: return "C";
        case RegionLabel::A0: return "A0";
        case RegionLabel::A1: return "A1";
        case RegionLabel::A2: return "A2";
        case RegionLabel::B0: return "B0";
        case RegionLabel::B1: return "B1";
        case RegionLabel::B2: return "B2";
    }
    return "?";
}

RegionLabel classify(const CurveSpec& spec, const ModelParams& params, double x, double y,
                     double tol) {
    if (tol < 0.0) {
        tol = 0.5 * (spec.xi1.domain_hi() - spec.xi1.domain_lo()) /
              static_cast<double>(spec.xi1.size() - 1);
    }
    if (std::abs(x - spec.xbar) <= tol && std::abs(y - spec.ybar) <= tol) return RegionLabel::A0;

    const double u = x - (params.p1 / params.p2) * y;
    const double v = y - (params.p2 / params.p1) * x;
    if (y <= spec.ybar + tol && u >= spec.ubar(params) - tol && u <= spec.xi1.domain_hi() + tol &&
        std::abs(spec.xi1.value(u) - y) <= tol)
        return RegionLabel::A1;
    if (x <= spec.xbar + tol && v >= spec.vbar(params) - tol && v <= spec.xi2.domain_hi() + tol &&
        std::abs(spec.xi2.value(v) - x) <= tol)
        return RegionLabel::A2;
    if (x >= spec.xbar && y >= spec.ybar) return RegionLabel::B0;
    if (y <= spec.ybar && (u > spec.xi1.domain_hi() || spec.xi1.value(u) < y))
        return RegionLabel::B1;
    if (x <= spec.xbar && (v > spec.xi2.domain_hi() || spec.xi2.value(v) < x))
        return RegionLabel::B2;
    return RegionLabel::C;
}

double rate_on_A1(const CurveSpec& spec, const ModelParams& params, double x, double y) {
    const double u = x - (params.p1 / params.p2) * y;
    const double d = spec.xi1.derivative(u);
    if (d >= 0.0) throw std::runtime_error("rate_on_A1: curve derivative not negative");
    return -params.p2 / d;
}

double rate_on_A2(const CurveSpec& spec, const ModelParams& params, double x, double y) {
    const double v = y - (params.p2 / params.p1) * x;
    const double d = spec.xi2.derivative(v);
    if (d >= 0.0) throw std::runtime_error("rate_on_A2: curve derivative not negative");
    return -params.p1 / d;
}

std::pair<double, double> lump_sum(const CurveSpec& spec, const ModelParams& params, double x,
                                   double y) {
    switch (classify(spec, params, x, y)) {
        case RegionLabel::B0:
            return {x - spec.xbar, y - spec.ybar};
        case RegionLabel::B1:
            return {x - (params.p1 / params.p2) * y - spec.xi1.inverse(y), 0.0};
        case RegionLabel::B2:
            return {0.0, y - (params.p2 / params.p1) * x - spec.xi2.inverse(x)};
        default:
            throw std::logic_error("lump_sum: state is not in a payment region");
    }
}

CurveSpec mirror(const CurveSpec& spec) {
    CurveSpec m;
    m.xbar = spec.ybar;
    m.ybar = spec.xbar;
    m.xi1 = spec.xi2;
    m.xi2 = spec.xi1;
    return m;
}

}  // namespace collab
