#include "collab/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "collab/parallel.hpp"

namespace collab {

namespace {

constexpr std::uint64_t kEventCap = 1'000'000;

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic generator with hand-rolled transforms so results do not
// depend on any library's distribution implementation.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    double uniform() {  // [0, 1)
        return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    }
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }
    double claim(const ClaimLaw& law) { return law.quantile(uniform()); }
};

// integral over [t, t+dt] of e^{-delta s} ds.
double disc_int(double delta, double t, double dt) {
    if (dt <= 0.0) return 0.0;
    return (std::exp(-delta * t) - std::exp(-delta * (t + dt))) / delta;
}

struct ClaimOutcome {
    bool ruined = false;
    double terminal = 0.0;  // undiscounted survivor continuation value
};

// Applies a claim of size alpha to the given company, with the deficit
// transfer rule; on ruin returns the weighted survivor payoff.
ClaimOutcome apply_claim(const ModelParams& params, const BoundaryPayoffs& payoffs, double& x,
                         double& y, int company, double alpha) {
    if (company == 1) {
        x -= alpha;
        if (x < 0.0) {
            if (x + y >= 0.0) {
                y += x;  // partner covers the exact deficit
                x = 0.0;
            } else {
                return {true, params.a1 * payoffs.v1.payoff(x) + params.a2() * payoffs.v2.payoff(y)};
            }
        }
    } else {
        y -= alpha;
        if (y < 0.0) {
            if (x + y >= 0.0) {
                x += y;
                y = 0.0;
            } else {
                return {true, params.a1 * payoffs.v1.payoff(x) + params.a2() * payoffs.v2.payoff(y)};
            }
        }
    }
    return {};
}

enum class Mode { free, on_a1, on_a2, at_vertex };

double run_curve_path(const ModelParams& params, const BoundaryPayoffs& payoffs,
                      const CurveSpec& spec, double x, double y, Rng& rng, bool* capped) {
    const double a1 = params.a1, a2 = params.a2();
    const double r12 = params.p1 / params.p2;
    const double r21 = params.p2 / params.p1;
    const double ub = spec.ubar(params);
    const double vb = spec.vbar(params);
    const double lam = params.lambda();
    const double delta = params.delta;
    const double wrate = a1 * params.p1 + a2 * params.p2;
    const double tiny = 1e-12;

    double t = 0.0;
    double payoff = 0.0;
    Mode mode = Mode::free;
    double u = 0.0;  // curve parameter while on a branch

    auto sync_from_branch = [&] {
        if (mode == Mode::on_a1) {
            y = spec.xi1.value(u);
            x = u + r12 * y;
        } else if (mode == Mode::on_a2) {
            x = spec.xi2.value(u);
            y = u + r21 * x;
        } else if (mode == Mode::at_vertex) {
            x = spec.xbar;
            y = spec.ybar;
        }
    };

    auto apply_lumps = [&] {
        if (x >= spec.xbar - tiny && y >= spec.ybar - tiny) {
            double l1 = std::max(0.0, x - spec.xbar);
            double l2 = std::max(0.0, y - spec.ybar);
            if (l1 > 0.0 || l2 > 0.0) payoff += std::exp(-delta * t) * (a1 * l1 + a2 * l2);
            mode = Mode::at_vertex;
            x = spec.xbar;
            y = spec.ybar;
            return;
        }
        double uu = x - r12 * y;
        if (uu >= ub) {
            double uinv = spec.xi1.inverse(y);
            double l1 = x - r12 * y - uinv;
            if (l1 > tiny) {
                payoff += std::exp(-delta * t) * a1 * l1;
                x -= l1;
            }
            if (l1 > -tiny) {
                mode = Mode::on_a1;
                u = uinv;
                sync_from_branch();
            } else {
                mode = Mode::free;
            }
        } else {
            double vv = y - r21 * x;
            double vinv = spec.xi2.inverse(x);
            double l2 = y - r21 * x - vinv;
            if (l2 > tiny) {
                payoff += std::exp(-delta * t) * a2 * l2;
                y -= l2;
            }
            if (l2 > -tiny) {
                mode = Mode::on_a2;
                u = vinv;
                sync_from_branch();
            } else {
                mode = Mode::free;
            }
            (void)vv;
        }
    };

    // Moves along a branch toward the vertex for at most rem time units,
    // paying the rate that keeps the state on the curve. Exact per linear
    // segment. Returns unused time.
    auto advance_branch = [&](const MonotoneCurve& xi, double lo, double p_perp, double weight,
                              double rem) {
        while (rem > 0.0 && u > lo + tiny) {
            // Segment containing u, approached from above (binary search for
            // the largest sample strictly below u).
            std::size_t klo = 0, khi = xi.size() - 1;
            while (khi - klo > 1) {
                std::size_t mid = (klo + khi) / 2;
                if (xi.u_at(mid) >= u - 1e-15) {
                    khi = mid;
                } else {
                    klo = mid;
                }
            }
            std::size_t k = klo;
            double useg = std::max(lo, xi.u_at(k));
            double slope = (xi.z_at(k + 1) - xi.z_at(k)) / (xi.u_at(k + 1) - xi.u_at(k));
            double speed = p_perp / (-slope);  // du/dt = -speed < 0
            double dt_seg = (u - useg) / speed;
            double dt = std::min(rem, dt_seg);
            payoff += weight * speed * disc_int(delta, t, dt);  // rate = speed
            u -= speed * dt;
            t += dt;
            rem -= dt;
        }
        if (u <= lo + tiny) u = lo;
        return rem;
    };

    for (std::uint64_t ev = 0; ev < kEventCap; ++ev) {
        apply_lumps();
        if (std::exp(-delta * t) < 1e-300) return payoff;
        double big_t = lam > 0.0 ? rng.exponential(lam) : 1e308;
        double rem = big_t;
        while (rem > tiny) {
            if (mode == Mode::at_vertex) {
                payoff += wrate * disc_int(delta, t, rem);
                t += rem;
                rem = 0.0;
            } else if (mode == Mode::on_a1) {
                rem = advance_branch(spec.xi1, ub, params.p2, a1, rem);
                sync_from_branch();
                if (u <= ub + tiny && rem > 0.0) mode = Mode::at_vertex;
            } else if (mode == Mode::on_a2) {
                rem = advance_branch(spec.xi2, vb, params.p1, a2, rem);
                sync_from_branch();
                if (u <= vb + tiny && rem > 0.0) mode = Mode::at_vertex;
            } else {
                // Free drift toward the curve; no dividends.
                double uu = x - r12 * y;
                double s_hit;
                if (uu >= ub) {
                    s_hit = (spec.xi1.value(uu) - y) / params.p2;
                } else {
                    s_hit = (spec.xi2.value(y - r21 * x) - x) / params.p1;
                }
                s_hit = std::max(s_hit, 0.0);
                double dt = std::min(rem, s_hit);
                x += params.p1 * dt;
                y += params.p2 * dt;
                t += dt;
                rem -= dt;
                if (rem > tiny) {
                    if (uu >= ub) {
                        if (uu <= ub + tiny) {
                            mode = Mode::at_vertex;
                        } else {
                            mode = Mode::on_a1;
                            u = uu;
                        }
                    } else {
                        mode = Mode::on_a2;
                        u = y - r21 * x;
                    }
                    sync_from_branch();
                }
            }
        }
        if (lam == 0.0) return payoff;
        sync_from_branch();
        int company = rng.uniform() < params.lambda1 / lam ? 1 : 2;
        double alpha = rng.claim(company == 1 ? params.law1 : params.law2);
        auto outcome = apply_claim(params, payoffs, x, y, company, alpha);
        if (outcome.ruined) return payoff + std::exp(-delta * t) * outcome.terminal;
        mode = Mode::free;
    }
    if (capped) *capped = true;
    return payoff;
}

double run_take_run_path(const ModelParams& params, const BoundaryPayoffs& payoffs, double x,
                         double y, Rng& rng) {
    const double lam = params.lambda();
    const double wrate = params.a1 * params.p1 + params.a2() * params.p2;
    double payoff = params.a1 * x + params.a2() * y;
    if (lam == 0.0) return payoff + wrate / params.delta;
    double big_t = rng.exponential(lam);
    payoff += wrate * disc_int(params.delta, 0.0, big_t);
    int company = rng.uniform() < params.lambda1 / lam ? 1 : 2;
    double survivor = company == 1 ? params.a2() * payoffs.v2.value(0.0)
                                   : params.a1 * payoffs.v1.value(0.0);
    return payoff + std::exp(-params.delta * big_t) * survivor;
}

}  // namespace

double simulate_path(const ModelParams& params, const BoundaryPayoffs& payoffs,
                     const StrategyPolicy& policy, double x0, double y0, std::uint64_t seed,
                     bool* capped) {
    if (x0 < 0.0 || y0 < 0.0) throw std::domain_error("simulate_path: negative initial surplus");
    Rng rng(seed);
    if (const auto* cp = std::get_if<CurvePolicy>(&policy))
        return run_curve_path(params, payoffs, cp->spec, x0, y0, rng, capped);
    if (const auto* up = std::get_if<UnivariateBarrierPolicy>(&policy)) {
        const bool one = up->company == 1;
        const double premium = one ? params.p1 : params.p2;
        const double intensity = one ? params.lambda1 : params.lambda2;
        const ClaimLaw& law = one ? params.law1 : params.law2;
        const double x_init = one ? x0 : y0;
        // Inline single-company barrier path:
        double x = x_init, t = 0.0, payoff = 0.0;
        const double b = up->level;
        if (x > b) {
            payoff += x - b;
            x = b;
        }
        if (intensity == 0.0) {
            double s_hit = (b - x) / premium;
            return payoff + premium * disc_int(params.delta, s_hit, 1e308 - s_hit);
        }
        for (std::uint64_t ev = 0; ev < kEventCap; ++ev) {
            double big_t = rng.exponential(intensity);
            double s_hit = (b - x) / premium;
            if (big_t > s_hit) {
                payoff += premium * disc_int(params.delta, t + s_hit, big_t - s_hit);
                x = b;
            } else {
                x += premium * big_t;
            }
            t += big_t;
            if (std::exp(-params.delta * t) < 1e-300) return payoff;
            x -= rng.claim(law);
            if (x < 0.0) return payoff;
        }
        if (capped) *capped = true;
        return payoff;
    }
    if (std::holds_alternative<PayNothingPolicy>(policy)) {
        // No dividends; terminal payoff at ruin only.
        const double lam = params.lambda();
        if (lam == 0.0) return 0.0;
        double x = x0, y = y0, t = 0.0;
        for (std::uint64_t ev = 0; ev < kEventCap; ++ev) {
            double big_t = rng.exponential(lam);
            x += params.p1 * big_t;
            y += params.p2 * big_t;
            t += big_t;
            if (std::exp(-params.delta * t) < 1e-300) return 0.0;
            int company = rng.uniform() < params.lambda1 / lam ? 1 : 2;
            double alpha = rng.claim(company == 1 ? params.law1 : params.law2);
            auto outcome = apply_claim(params, payoffs, x, y, company, alpha);
            if (outcome.ruined) return std::exp(-params.delta * t) * outcome.terminal;
        }
        if (capped) *capped = true;
        return 0.0;
    }
    return run_take_run_path(params, payoffs, x0, y0, rng);
}

SimEstimate estimate(const ModelParams& params, const BoundaryPayoffs& payoffs,
                     const StrategyPolicy& policy, double x0, double y0, std::uint64_t paths,
                     std::uint64_t seed) {
    if (paths < 100) throw std::invalid_argument("estimate: need at least 100 paths");
    std::vector<double> vals(paths);
    std::vector<unsigned char> caps(paths, 0);
    parallel_for(0, paths, [&](std::size_t i) {
        std::uint64_t s = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(i) + 1);
        std::uint64_t mixed = s;
        mixed = splitmix64(mixed);
        bool capped = false;
        vals[i] = simulate_path(params, payoffs, policy, x0, y0, mixed, &capped);
        caps[i] = capped ? 1 : 0;
    });
    SimEstimate e;
    e.paths = paths;
    e.seed = seed;
    double sum = 0.0;
    for (double v : vals) sum += v;
    e.mean = sum / static_cast<double>(paths);
    double ss = 0.0;
    for (double v : vals) ss += (v - e.mean) * (v - e.mean);
    double var = ss / static_cast<double>(paths - 1);
    e.std_error = std::sqrt(var / static_cast<double>(paths));
    for (auto c : caps) e.capped_paths += c;
    return e;
}

SimEstimate simulate_univariate_barrier(double premium, double intensity, const ClaimLaw& law,
                                        double discount, double barrier, double x0,
                                        std::uint64_t paths, std::uint64_t seed) {
    ModelParams p;
    p.p1 = premium;
    p.lambda1 = intensity;
    p.law1 = law;
    p.p2 = premium;
    p.lambda2 = 0.0;
    p.law2 = law;
    p.delta = discount;
    p.a1 = 1.0;
    BoundaryPayoffs bp;  // unused by the barrier policy
    StrategyPolicy policy = UnivariateBarrierPolicy{barrier, 1};
    return estimate(p, bp, policy, x0, 0.0, paths, seed);
}

}  // namespace collab
