#include <cmath>

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

// Frozen oracle values for the merged company (premium 2, intensity 40/9,
// exponential(3), discount 0.1), computed independently from the roots of
// p t^2 + (p mu - lambda - delta) t - delta mu = 0 and the barrier condition
// h''(b) = 0.
constexpr double kMergerBarrier = 2.7690869851845504;
constexpr double kMergerValueAt0 = 1.0608600996111863;
// Single company (premium 1, intensity 20/9): same construction.
constexpr double kSingleValueAt0 = 0.62934183974112174;

}  // namespace

TEST_CASE("merged-company barrier matches the closed-form oracle") {
    UnivariateValue v = solve_standalone(2.0, 40.0 / 9.0, ClaimLaw::exponential(3.0), 0.1);
    CHECK(v.barrier() == doctest::Approx(kMergerBarrier).epsilon(1e-8));
    CHECK(v.barrier() == doctest::Approx(2.77).epsilon(0.02 / 2.77));
    CHECK(v.value(0.0) == doctest::Approx(kMergerValueAt0).epsilon(1e-8));
}

TEST_CASE("single-company value at zero matches the closed-form oracle") {
    UnivariateValue v = solve_standalone(1.0, 20.0 / 9.0, ClaimLaw::exponential(3.0), 0.1);
    CHECK(v.value(0.0) == doctest::Approx(kSingleValueAt0).epsilon(1e-8));
}

TEST_CASE("no claims: value is surplus plus perpetuity, barrier zero") {
    UnivariateValue v = solve_standalone(1.5, 0.0, ClaimLaw::exponential(1.0), 0.1);
    CHECK(v.barrier() == doctest::Approx(0.0));
    for (double x : {0.0, 1.0, 3.7}) CHECK(v.value(x) == doctest::Approx(x + 15.0));
}

TEST_CASE("value is strictly increasing with slope >= 1 and envelope bounds") {
    UnivariateValue v = solve_standalone(1.0, 20.0 / 9.0, ClaimLaw::exponential(3.0), 0.1);
    double prev = v.value(0.0);
    for (int i = 1; i <= 600; ++i) {
        double x = 0.01 * i;
        double cur = v.value(x);
        CHECK(cur - prev >= 0.01 - 1e-9);  // slope >= 1
        CHECK(cur >= x);
        CHECK(cur <= x + 1.0 / 0.1 + 1e-9);
        prev = cur;
    }
}

TEST_CASE("slope is exactly one above the barrier") {
    UnivariateValue v = solve_standalone(2.0, 40.0 / 9.0, ClaimLaw::exponential(3.0), 0.1);
    double b = v.barrier();
    CHECK(v.value(b + 2.0) - v.value(b + 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v.value(b + 1.0) - v.value(b) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("payoff convention zeroes negative surplus") {
    UnivariateValue v = solve_standalone(1.0, 20.0 / 9.0, ClaimLaw::exponential(3.0), 0.1);
    CHECK(v.payoff(-0.001) == 0.0);
    CHECK(v.payoff(1.0) == v.value(1.0));
}

TEST_CASE("net profit violation throws") {
    CHECK_THROWS(solve_standalone(0.5, 20.0 / 9.0, ClaimLaw::exponential(3.0), 0.1));
}

TEST_CASE("merger value equals the pooled stand-alone solve for identical laws") {
    ModelParams p = ref_params();
    UnivariateValue m = merger_value(p);
    UnivariateValue direct = solve_standalone(2.0, 40.0 / 9.0, ClaimLaw::exponential(3.0), 0.1);
    CHECK(m.barrier() == doctest::Approx(direct.barrier()).epsilon(1e-10));
    for (double x : {0.0, 1.0, 2.5, 4.0})
        CHECK(m.value(x) == doctest::Approx(direct.value(x)).epsilon(1e-10));
}

TEST_CASE("mixture law degenerate cases") {
    ModelParams p = ref_params();
    SUBCASE("lambda2 = 0 gives law1") {
        p.lambda2 = 0.0;
        p.law2 = ClaimLaw::exponential(7.0);
        ClaimLaw mix = mixture_law(p);
        CHECK(mix.is_exponential());
        CHECK(mix.rate() == doctest::Approx(3.0));
    }
    SUBCASE("asymmetric intensities with the same law give that law") {
        p.lambda1 = 1.0;
        p.lambda2 = 3.0;
        ClaimLaw mix = mixture_law(p);
        CHECK(mix.is_exponential());
        CHECK(mix.rate() == doctest::Approx(3.0));
    }
}

TEST_CASE("numeric-law solver agrees with the exponential closed form") {
    // A finely sampled exponential(3) CDF fed through the numeric path must
    // reproduce the closed-form solution.
    std::vector<double> s, c;
    for (int i = 0; i <= 60000; ++i) {
        double x = 6.0 * i / 60000.0;
        s.push_back(x);
        c.push_back(1.0 - std::exp(-3.0 * x));
    }
    ClaimLaw num = ClaimLaw::numeric(s, c);
    UnivariateValue vn = solve_standalone(1.0, 20.0 / 9.0, num, 0.1);
    UnivariateValue ve = solve_standalone(1.0, 20.0 / 9.0, ClaimLaw::exponential(3.0), 0.1);
    CHECK(vn.barrier() == doctest::Approx(ve.barrier()).epsilon(0.03));
    for (double x : {0.0, 0.5, 1.0, 2.0})
        CHECK(vn.value(x) == doctest::Approx(ve.value(x)).epsilon(5e-3));
}
