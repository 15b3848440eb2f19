#include <cmath>

#include "collab/field.hpp"
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

Grid2D small_grid() { return Grid2D{0.05, 81, 81}; }  // [0,4]^2

GridFunction fill(const Grid2D& g, double (*f)(double, double)) {
    GridFunction w(g);
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) w.at(i, j) = f(g.x(i), g.y(j));
    return w;
}

}  // namespace

TEST_CASE("grid function is exact at nodes and bilinear between them") {
    Grid2D g{0.5, 5, 5};
    GridFunction w = fill(g, [](double x, double y) { return 2.0 * x - y + 1.0; });
    CHECK(w(1.0, 1.5) == doctest::Approx(2.0 * 1.0 - 1.5 + 1.0).epsilon(1e-14));
    CHECK(w(0.75, 0.25) == doctest::Approx(2.0 * 0.75 - 0.25 + 1.0).epsilon(1e-14));
    // clamping outside the domain
    CHECK(w(-1.0, 0.0) == doctest::Approx(w(0.0, 0.0)));
    CHECK(w(10.0, 10.0) == doctest::Approx(w(2.0, 2.0)));
}

TEST_CASE("overflow term at the origin reduces to the weighted zero-values") {
    ModelParams p = ref_params();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    double expect = p.lambda1 * p.a2() * bp.v2.payoff(0.0) + p.lambda2 * p.a1 * bp.v1.payoff(0.0);
    CHECK(overflow_term_U(p, bp, 0.0, 0.0) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("overflow term decays monotonically in x+y") {
    ModelParams p = ref_params();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    // Fix the payoff arguments by moving along x with y fixed: the payoff
    // factor V1(x) grows but the exponential tail dominates; instead check
    // directly with fixed V-arguments via the scalar formula.
    double v2 = bp.v2.payoff(1.0);
    double v1 = bp.v1.payoff(1.0);
    double prev = 1e300;
    for (double s = 2.0; s < 10.0; s += 0.5) {
        double val = p.lambda1 * p.a2() * v2 * p.law1.tail(s) +
                     p.lambda2 * p.a1 * v1 * p.law2.tail(s);
        CHECK(val < prev);
        prev = val;
    }
    // And the full function at a specific point against direct arithmetic.
    double direct = p.lambda1 * p.a2() * bp.v2.payoff(1.0) * std::exp(-3.0 * 2.0) +
                    p.lambda2 * p.a1 * bp.v1.payoff(1.0) * std::exp(-3.0 * 2.0);
    CHECK(overflow_term_U(p, bp, 1.0, 1.0) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("claim operator on constants equals c times the arrival-weighted mass") {
    ModelParams p = ref_params();
    Grid2D g = small_grid();
    GridFunction w = fill(g, [](double, double) { return 3.25; });
    double pts[][2] = {{0.5, 0.5}, {1.0, 2.0}, {3.0, 0.2}, {0.0, 0.0}};
    for (auto& q : pts) {
        double s = q[0] + q[1];
        double expect = 3.25 * (p.lambda1 * p.law1.cdf(s) + p.lambda2 * p.law2.cdf(s));
        CHECK(integral_operator_I(p, w, q[0], q[1]) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("claim operator vanishes without claims") {
    ModelParams p = ref_params();
    p.lambda1 = p.lambda2 = 0.0;
    Grid2D g = small_grid();
    GridFunction w = fill(g, [](double x, double y) { return x * y + 1.0; });
    CHECK(integral_operator_I(p, w, 1.0, 2.0) == 0.0);
}

TEST_CASE("claim operator on w = x + y matches the analytic closed form") {
    // For w(x,y) = x + y every integrand collapses to (s - alpha) with
    // s = x + y, so the operator equals
    // (lambda1 + lambda2) * (s - (1 - e^{-mu s}) / mu) for exponential(mu).
    ModelParams p = ref_params();
    Grid2D g = small_grid();
    GridFunction w = fill(g, [](double x, double y) { return x + y; });
    double x = 1.0, y = 2.0, s = x + y, mu = 3.0;
    double expect = (p.lambda1 + p.lambda2) * (s - (1.0 - std::exp(-mu * s)) / mu);
    CHECK(integral_operator_I(p, w, x, y) == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("fast integral grid matches the pointwise operator at every node") {
    ModelParams p = ref_params();
    p.lambda1 = 2.0;  // asymmetric to exercise both kernels
    p.lambda2 = 0.7;
    p.law2 = ClaimLaw::exponential(1.5);
    Grid2D g{0.1, 31, 26};
    GridFunction w = fill(g, [](double x, double y) {
        return 0.5 * x + 0.4 * y + 0.1 * std::sin(x * 1.7) * std::cos(y);
    });
    GridFunction fast = build_integral_grid(p, w);
    for (std::size_t j = 0; j < g.ny; j += 5)
        for (std::size_t i = 0; i < g.nx; i += 5)
            CHECK(fast.at(i, j) ==
                  doctest::Approx(integral_operator_I(p, w, g.x(i), g.y(j))).epsilon(1e-10));
}

TEST_CASE("numeric-law integral grid agrees with a sampled exponential") {
    ModelParams p = ref_params();
    std::vector<double> s, c;
    for (int i = 0; i <= 30000; ++i) {
        double x = 8.0 * i / 30000.0;
        s.push_back(x);
        c.push_back(1.0 - std::exp(-3.0 * x));
    }
    p.law1 = p.law2 = ClaimLaw::numeric(s, c);
    ModelParams pe = ref_params();
    Grid2D g{0.1, 21, 21};
    GridFunction w = fill(g, [](double x, double y) { return x + 0.5 * y; });
    GridFunction num = build_integral_grid(p, w);
    GridFunction exact = build_integral_grid(pe, w);
    CHECK(num.sup_diff(exact) < 2e-4);
}

TEST_CASE("generator on the zero function with zero payoffs is zero") {
    ModelParams p = ref_params();
    p.lambda1 = p.lambda2 = 0.0;  // also kills the overflow term
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    Grid2D g = small_grid();
    GridFunction w(g, 0.0);
    CHECK(generator_L(p, bp, w, 1.0, 1.0, 0.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("generator on a constant with zero claims is minus discount times it") {
    ModelParams p = ref_params();
    p.lambda1 = p.lambda2 = 0.0;
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    Grid2D g = small_grid();
    GridFunction w(g, 4.0);
    CHECK(generator_L(p, bp, w, 1.0, 2.0, 0.0, 0.0) == doctest::Approx(-0.1 * 4.0));
}

TEST_CASE("residual components on the affine upper envelope") {
    // w = a1 x + a2 y + p/delta has dx = dy = 0 components and a generator
    // component that stays nonpositive when claims are present.
    ModelParams p = ref_params();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    Grid2D g = small_grid();
    GridFunction w = fill(g, [](double x, double y) { return 0.5 * x + 0.5 * y + 10.0; });
    for (std::size_t j = 1; j + 1 < g.ny; j += 7) {
        for (std::size_t i = 1; i + 1 < g.nx; i += 7) {
            HjbResidual r = hjb_residual(p, bp, w, i, j);
            CHECK(r.dx_part == doctest::Approx(0.0).epsilon(1e-10));
            CHECK(r.dy_part == doctest::Approx(0.0).epsilon(1e-10));
            CHECK(r.l_part < 1e-9);
            CHECK(r.max_part == doctest::Approx(std::max({r.l_part, r.dx_part, r.dy_part})));
        }
    }
}
