#include <cmath>
#include <vector>

#include "collab/evaluate.hpp"
#include "collab/simulate.hpp"
#include "collab/univariate.hpp"
#include "doctest.h"

using namespace collab;

namespace {

ModelParams ref_params() {
    ModelParams p;
    p.p1 = p.p2 = 1.0;
    p.lambda1 = p.lambda2 = 20.0 / 9.0;
    p.law1 = p.law2 = ClaimLaw::exponential(3.0);
    p.delta = 0.1;
    p.a1 = 0.5;
    return p;
}

CurveSpec symmetric_spec() {
    CurveSpec s;
    s.xbar = s.ybar = 1.0;
    int n = 2000;
    std::vector<double> u(n + 1), z(n + 1);
    for (int i = 0; i <= n; ++i) {
        u[i] = 2.0 * i / n;
        z[i] = 1.0 - static_cast<double>(i) / n;
    }
    z[n] = 0.0;
    s.xi1 = MonotoneCurve(u, z);
    s.xi2 = MonotoneCurve(u, z);
    return s;
}

}  // namespace

TEST_CASE("no claims: the run-and-stream payoff is deterministic") {
    ModelParams p = ref_params();
    p.lambda1 = p.lambda2 = 0.0;
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    double payoff = simulate_path(p, bp, TakeRunPolicy{}, 1.5, 2.5, 42);
    CHECK(payoff == doctest::Approx(0.5 * 1.5 + 0.5 * 2.5 + 1.0 / 0.1).epsilon(1e-9));
    SimEstimate e = estimate(p, bp, TakeRunPolicy{}, 1.5, 2.5, 200, 7);
    CHECK(e.mean == doctest::Approx(payoff).epsilon(1e-12));
    CHECK(e.std_error == doctest::Approx(0.0));
}

TEST_CASE("pay-nothing payoff stays below the affine upper envelope") {
    ModelParams p = ref_params();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        double payoff = simulate_path(p, bp, PayNothingPolicy{}, 1.0, 2.0, seed);
        CHECK(payoff <= 0.5 * 1.0 + 0.5 * 2.0 + 10.0 + 1e-9);
        CHECK(payoff >= 0.0);
    }
}

TEST_CASE("identical seeds give bit-identical estimates") {
    ModelParams p = ref_params();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    CurvePolicy pol{symmetric_spec()};
    SimEstimate a = estimate(p, bp, pol, 1.0, 1.0, 2000, 99);
    SimEstimate b = estimate(p, bp, pol, 1.0, 1.0, 2000, 99);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    SimEstimate c = estimate(p, bp, pol, 1.0, 1.0, 2000, 100);
    CHECK(a.mean != c.mean);
}

TEST_CASE("doubling paths shrinks the standard error like CLT") {
    ModelParams p = ref_params();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    CurvePolicy pol{symmetric_spec()};
    SimEstimate small = estimate(p, bp, pol, 1.0, 1.0, 4000, 3);
    SimEstimate big = estimate(p, bp, pol, 1.0, 1.0, 16000, 3);
    // Quadrupling paths should halve the SE within stochastic slack.
    CHECK(big.std_error < small.std_error * 0.65);
    CHECK(big.std_error > small.std_error * 0.35);
}

TEST_CASE("univariate barrier MC reproduces the closed-form value") {
    UnivariateValue v = solve_standalone(1.0, 20.0 / 9.0, ClaimLaw::exponential(3.0), 0.1);
    for (double x0 : {0.0, 1.0}) {
        SimEstimate e = simulate_univariate_barrier(1.0, 20.0 / 9.0, ClaimLaw::exponential(3.0),
                                                    0.1, v.barrier(), x0, 40000, 11);
        CHECK(std::abs(e.mean - v.value(x0)) <= 3.0 * e.std_error);
    }
}

TEST_CASE("curve-policy MC agrees with the analytic fixed-point value") {
    ModelParams p = ref_params();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    CurveSpec s = symmetric_spec();
    Grid2D g{0.05, 121, 121};  // [0,6]^2 at coarse-but-fine-enough resolution
    FixedPointResult fp = fixed_point_value(s, p, bp, g, 1e-6);
    REQUIRE(fp.converged);
    CurvePolicy pol{s};
    double states[][2] = {{1.0, 1.0}, {2.0, 2.0}, {0.5, 0.2}};
    for (auto& q : states) {
        SimEstimate e = estimate(p, bp, pol, q[0], q[1], 40000, 17);
        INFO("state (", q[0], ",", q[1], "): analytic ", fp.value(q[0], q[1]), " mc ", e.mean,
             " se ", e.std_error);
        CHECK(std::abs(e.mean - fp.value(q[0], q[1])) <= 3.0 * e.std_error);
        CHECK(e.capped_paths == 0);
    }
}

TEST_CASE("take-the-run estimate matches the base-case formula") {
    ModelParams p = ref_params();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    double dl = p.delta + p.lambda();
    double c = p.lambda1 / dl * (1.0 / p.lambda() + p.a2() * bp.v2.payoff(0.0)) +
               p.lambda2 / dl * (1.0 / p.lambda() + p.a1 * bp.v1.payoff(0.0));
    SimEstimate e = estimate(p, bp, TakeRunPolicy{}, 1.0, 2.0, 40000, 5);
    CHECK(std::abs(e.mean - (0.5 * 1.0 + 0.5 * 2.0 + c)) <= 3.0 * e.std_error);
}
