#include "collab/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace collab {

double UnivariateValue::value(double x) const {
    if (x < 0.0) throw std::domain_error("UnivariateValue::value: negative surplus");
    switch (kind_) {
        case Kind::no_claims:
            return x + premium_ / discount_;
        case Kind::closed_exponential: {
            double xc = std::min(x, barrier_);
            double h = (theta1_ + mu_) * std::exp(theta1_ * xc) -
                       (theta2_ + mu_) * std::exp(theta2_ * xc);
            return scale_ * h + std::max(0.0, x - barrier_);
        }
        case Kind::sampled: {
            double xc = std::min(x, barrier_);
            double t = step_ > 0.0 ? xc / step_ : 0.0;
            std::size_t i = std::min(static_cast<std::size_t>(t), samples_.size() - 2);
            double frac = t - static_cast<double>(i);
            double v = samples_[i] + frac * (samples_[i + 1] - samples_[i]);
            return v + std::max(0.0, x - barrier_);
        }
    }
    return 0.0;
}

namespace {

UnivariateValue solve_numeric_law(double premium, double intensity, const ClaimLaw& law,
                                  double discount) {
    // Integrate p h' = (lambda+delta) h - lambda * (h*F)(x) with h(0)=1,
    // then place the barrier at the minimum of h' (equivalently h''=0).
    const double mean = law.mean();
    const double step = std::max(mean, premium / (intensity + discount)) / 500.0;
    const double span = 40.0 * std::max(mean, premium / (intensity + discount));
    const std::size_t n = static_cast<std::size_t>(span / step) + 2;

    // Subinterval masses and first moments, reused across convolutions.
    std::vector<double> m0(n), m1(n);
    for (std::size_t j = 0; j < n; ++j) {
        double a = static_cast<double>(j) * step;
        m0[j] = law.prob_mass(a, a + step);
        m1[j] = law.partial_moment(a, a + step);
    }

    std::vector<double> h(n), hp(n);
    h[0] = 1.0;
    auto convolve = [&](std::size_t i) {
        // integral_0^{x_i} h(x_i - a) dF(a); h linear between samples:
        // h(x_i - alpha) = h_{i-j} - (alpha - a)/step * (h_{i-j} - h_{i-j-1})
        double acc = 0.0;
        for (std::size_t j = 0; j < i; ++j)
            acc += m0[j] * h[i - j] - (m1[j] / step) * (h[i - j] - h[i - j - 1]);
        return acc;
    };
    hp[0] = ((intensity + discount) * h[0]) / premium;
    for (std::size_t i = 1; i < n; ++i) {
        // Predictor-corrector Euler step; the convolution is evaluated once
        // at the predictor (its h[i]-coefficient is the first-cell mass,
        // already O(step)).
        h[i] = h[i - 1] + step * hp[i - 1];
        double conv = convolve(i);
        double hp_i = ((intensity + discount) * h[i] - intensity * conv) / premium;
        h[i] = h[i - 1] + 0.5 * step * (hp[i - 1] + hp_i);
        hp[i] = ((intensity + discount) * h[i] - intensity * conv) / premium;
    }

    std::size_t imin = 0;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (hp[i] < hp[imin]) imin = i;
    if (imin + 2 >= n)
        throw std::runtime_error("solve_standalone: barrier search not bracketed within span");

    double barrier;
    if (imin == 0) {
        barrier = 0.0;
    } else {
        // Golden-section refinement of min h' on the bracketing samples.
        auto hp_at = [&](double x) {
            double t = x / step;
            std::size_t i = std::min(static_cast<std::size_t>(t), n - 2);
            double frac = t - static_cast<double>(i);
            return hp[i] + frac * (hp[i + 1] - hp[i]);
        };
        double lo = static_cast<double>(imin - 1) * step;
        double hi = static_cast<double>(imin + 1) * step;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        while (hi - lo > 1e-4) {
            if (hp_at(c) < hp_at(d)) {
                hi = d;
            } else {
                lo = c;
            }
            c = hi - gr * (hi - lo);
            d = lo + gr * (hi - lo);
        }
        barrier = 0.5 * (lo + hi);
    }

    UnivariateValue v;
    v.kind_ = UnivariateValue::Kind::sampled;
    v.premium_ = premium;
    v.intensity_ = intensity;
    v.discount_ = discount;
    v.barrier_ = barrier;
    v.step_ = step;
    std::size_t nb = std::max<std::size_t>(2, static_cast<std::size_t>(barrier / step) + 2);
    double tb = barrier / step;
    std::size_t ib = std::min(static_cast<std::size_t>(tb), n - 2);
    double hpb = hp[ib] + (tb - static_cast<double>(ib)) * (hp[ib + 1] - hp[ib]);
    v.samples_.resize(nb);
    for (std::size_t i = 0; i < nb; ++i) v.samples_[i] = h[std::min(i, n - 1)] / hpb;
    return v;
}

}  // namespace

UnivariateValue solve_standalone(double premium, double intensity, const ClaimLaw& law,
                                 double discount) {
    if (!(premium > 0.0) || !(discount > 0.0) || intensity < 0.0)
        throw std::invalid_argument("solve_standalone: bad rates");
    UnivariateValue v;
    v.premium_ = premium;
    v.intensity_ = intensity;
    v.discount_ = discount;
    if (intensity == 0.0) {
        v.kind_ = UnivariateValue::Kind::no_claims;
        v.barrier_ = 0.0;
        return v;
    }
    if (!(premium > intensity * law.mean()))
        throw std::invalid_argument("solve_standalone: net profit condition violated");
    if (!law.is_exponential()) return solve_numeric_law(premium, intensity, law, discount);

    const double mu = law.rate();
    const double p = premium, lam = intensity, del = discount;
    // p t^2 + (p mu - lam - del) t - del mu = 0; roots t1 > 0 > t2 > -mu.
    const double b = p * mu - lam - del;
    const double disc = std::sqrt(b * b + 4.0 * p * del * mu);
    const double t1 = (-b + disc) / (2.0 * p);
    const double t2 = (-b - disc) / (2.0 * p);
    double barrier =
        std::log((t2 * t2 * (t2 + mu)) / (t1 * t1 * (t1 + mu))) / (t1 - t2);
    barrier = std::max(barrier, 0.0);

    v.kind_ = UnivariateValue::Kind::closed_exponential;
    v.theta1_ = t1;
    v.theta2_ = t2;
    v.mu_ = mu;
    v.barrier_ = barrier;
    double hp = t1 * (t1 + mu) * std::exp(t1 * barrier) - t2 * (t2 + mu) * std::exp(t2 * barrier);
    v.scale_ = 1.0 / hp;
    return v;
}

ClaimLaw mixture_law(const ModelParams& params) {
    if (params.lambda1 == 0.0 && params.lambda2 == 0.0) return params.law1;
    if (params.lambda1 == 0.0) return params.law2;
    if (params.lambda2 == 0.0) return params.law1;
    if (params.law1.same_as(params.law2)) return params.law1;
    const double w1 = params.lambda1 / params.lambda();
    const double w2 = params.lambda2 / params.lambda();
    // Sampled mixture on a grid reaching far into both tails.
    double span = 0.0;
    for (const ClaimLaw* law : {&params.law1, &params.law2}) {
        double s = law->is_exponential() ? 30.0 / law->rate() : 40.0 * law->mean();
        span = std::max(span, s);
    }
    const std::size_t n = 4001;
    std::vector<double> s(n), cdf(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = span * static_cast<double>(i) / static_cast<double>(n - 1);
        cdf[i] = w1 * params.law1.cdf(s[i]) + w2 * params.law2.cdf(s[i]);
    }
    return ClaimLaw::numeric(std::move(s), std::move(cdf));
}

UnivariateValue merger_value(const ModelParams& params) {
    return solve_standalone(params.p1 + params.p2, params.lambda(), mixture_law(params),
                            params.delta);
}

}  // namespace collab
