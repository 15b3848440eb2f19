#include "collab/claims.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace collab {

ClaimLaw ClaimLaw::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential rate must be positive");
    ClaimLaw law;
    law.exponential_ = true;
    law.rate_ = rate;
    law.mean_ = 1.0 / rate;
    return law;
}

ClaimLaw ClaimLaw::numeric(std::vector<double> s, std::vector<double> cdf) {
    if (s.size() != cdf.size() || s.size() < 2)
        throw std::invalid_argument("numeric law needs matching sample vectors, length >= 2");
    if (s.front() != 0.0 || cdf.front() != 0.0)
        throw std::invalid_argument("numeric law must start at s=0 with cdf=0");
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (!(s[i] > s[i - 1])) throw std::invalid_argument("numeric law abscissae must increase");
        if (cdf[i] < cdf[i - 1]) throw std::invalid_argument("numeric cdf must be non-decreasing");
    }
    if (cdf.back() > 1.0 + 1e-12) throw std::invalid_argument("numeric cdf must stay within [0,1]");
    ClaimLaw law;
    law.exponential_ = false;
    law.s_ = std::move(s);
    law.cdf_ = std::move(cdf);
    // Mean by trapezoid on the tail: E U = integral of (1 - F).
    double m = 0.0;
    for (std::size_t i = 1; i < law.s_.size(); ++i) {
        double t0 = 1.0 - law.cdf_[i - 1];
        double t1 = 1.0 - law.cdf_[i];
        m += 0.5 * (t0 + t1) * (law.s_[i] - law.s_[i - 1]);
    }
    law.mean_ = m;
    law.rate_ = m > 0.0 ? 1.0 / m : 0.0;
    return law;
}

double ClaimLaw::cdf(double s) const {
    if (s < 0.0) return 0.0;
    if (exponential_) return -std::expm1(-rate_ * s);
    if (s >= s_.back()) return cdf_.back();  // hard clamp beyond the sampled grid
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    std::size_t i = static_cast<std::size_t>(it - s_.begin());
    double t = (s - s_[i - 1]) / (s_[i] - s_[i - 1]);
    return cdf_[i - 1] + t * (cdf_[i] - cdf_[i - 1]);
}

double ClaimLaw::tail(double s) const {
    if (s < 0.0) throw std::domain_error("tail: negative argument");
    if (exponential_) return std::exp(-rate_ * s);
    return 1.0 - cdf(s);
}

double ClaimLaw::quantile(double u) const {
    if (u < 0.0 || u >= 1.0) throw std::domain_error("quantile: u must be in [0,1)");
    if (exponential_) return -std::log1p(-u) / rate_;
    if (u >= cdf_.back()) return s_.back();
    if (u <= cdf_.front()) return s_.front();
    std::size_t lo = 0, hi = cdf_.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (cdf_[mid] <= u) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (cdf_[hi] == cdf_[lo]) return s_[lo];
    double t = (u - cdf_[lo]) / (cdf_[hi] - cdf_[lo]);
    return s_[lo] + t * (s_[hi] - s_[lo]);
}

double ClaimLaw::prob_mass(double a, double b) const {
    assert(a <= b);
    if (b <= 0.0) return 0.0;
    a = std::max(a, 0.0);
    if (exponential_) return std::exp(-rate_ * a) - std::exp(-rate_ * b);
    return cdf(b) - cdf(a);
}

double ClaimLaw::partial_moment(double a, double b) const {
    assert(a <= b);
    if (b <= 0.0) return 0.0;
    a = std::max(a, 0.0);
    if (exponential_) {
        // integral_a^b (s - a) rate e^{-rate s} ds
        double d = b - a;
        return std::exp(-rate_ * a) * (1.0 - std::exp(-rate_ * d) * (1.0 + rate_ * d)) / rate_;
    }
    // Exact for the piecewise-linear CDF via integration by parts:
    //   int_a^b (s - a) dF = (b - a) F(b) - int_a^b F(s) ds,
    // with the CDF integral computed segment by segment (trapezoid is exact
    // on a piecewise-linear function).
    double cdf_int = 0.0;
    double lo = a;
    auto it = std::upper_bound(s_.begin(), s_.end(), a);
    std::size_t i = static_cast<std::size_t>(it - s_.begin());
    while (lo < b) {
        double hi = (i < s_.size()) ? std::min(s_[i], b) : b;
        cdf_int += 0.5 * (cdf(lo) + cdf(hi)) * (hi - lo);
        lo = hi;
        ++i;
    }
    return (b - a) * cdf(b) - cdf_int;
}

bool ClaimLaw::same_as(const ClaimLaw& other) const {
    if (exponential_ != other.exponential_) return false;
    if (exponential_) return rate_ == other.rate_;
    return s_ == other.s_ && cdf_ == other.cdf_;
}

bool ModelParams::symmetric() const {
    return p1 == p2 && lambda1 == lambda2 && a1 == 0.5 && law1.same_as(law2);
}

std::vector<std::string> validate(const ModelParams& params) {
    std::vector<std::string> bad;
    auto fail = [&](const std::string& msg) { bad.push_back(msg); };
    if (!(params.p1 > 0.0)) fail("premium p1 must be positive");
    if (!(params.p2 > 0.0)) fail("premium p2 must be positive");
    if (params.lambda1 < 0.0) fail("intensity lambda1 must be nonnegative");
    if (params.lambda2 < 0.0) fail("intensity lambda2 must be nonnegative");
    if (!(params.delta > 0.0)) fail("discount delta must be positive");
    if (params.a1 < 0.0 || params.a1 > 1.0) fail("weight a1 must lie in [0,1]");
    if (params.lambda1 > 0.0 && !(params.p1 > params.lambda1 * params.law1.mean())) {
        std::ostringstream os;
        os << "net profit company 1: p1=" << params.p1 << " <= lambda1*mean="
           << params.lambda1 * params.law1.mean();
        fail(os.str());
    }
    if (params.lambda2 > 0.0 && !(params.p2 > params.lambda2 * params.law2.mean())) {
        std::ostringstream os;
        os << "net profit company 2: p2=" << params.p2 << " <= lambda2*mean="
           << params.lambda2 * params.law2.mean();
        fail(os.str());
    }
    return bad;
}

ModelParams make_validated(ModelParams params) {
    auto bad = validate(params);
    if (!bad.empty()) {
        std::string msg = "invalid model parameters:";
        for (const auto& b : bad) msg += "\n  " + b;
        throw std::invalid_argument(msg);
    }
    return params;
}

}  // namespace collab
