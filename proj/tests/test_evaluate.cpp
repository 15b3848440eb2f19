#include <cmath>
#include <vector>

#include "collab/evaluate.hpp"
#include "collab/iterate.hpp"
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

MonotoneCurve line_curve(double lo, double hi, double z_lo, int n = 2000) {
    std::vector<double> u(n + 1), z(n + 1);
    for (int i = 0; i <= n; ++i) {
        u[i] = lo + (hi - lo) * i / n;
        z[i] = z_lo * (1.0 - static_cast<double>(i) / n);
    }
    z[n] = 0.0;
    return MonotoneCurve(u, z);
}

// A symmetric spec with vertex (1,1) and straight branches.
CurveSpec symmetric_spec() {
    CurveSpec s;
    s.xbar = s.ybar = 1.0;
    s.xi1 = line_curve(0.0, 2.0, 1.0);
    s.xi2 = line_curve(0.0, 2.0, 1.0);
    return s;
}

}  // namespace

TEST_CASE("k at the vertex abscissa is the premium-plus-H perpetuity") {
    ModelParams p = ref_params();
    CurveSpec s = symmetric_spec();
    auto h = [](double x, double y) { return 0.3 * x + 0.1 * y + 0.2; };
    KProfile k = k_profile(s, p, h);
    double dl = p.delta + p.lambda();
    double expect = (p.weighted_premium() + h(1.0, 1.0)) / dl;
    CHECK(k(s.ubar(p)) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("k with zero H matches the explicit exponential formula") {
    ModelParams p = ref_params();
    CurveSpec s = symmetric_spec();
    auto zero = [](double, double) { return 0.0; };
    KProfile k = k_profile(s, p, zero);
    double beta = (p.delta + p.lambda()) / p.p2;
    auto oracle = [&](double u) {
        // k(u) = e^{beta (xi(u)-xi(ubar))} p/(dl) + a1 e^{beta xi(u)}
        //        * int_ubar^u e^{-beta xi(w)} dw  (fine Simpson quadrature)
        double ubar = s.ubar(p);
        double integral = 0.0;
        int n = 20000;
        double hstep = (u - ubar) / n;
        for (int i = 0; i <= n; ++i) {
            double w = ubar + i * hstep;
            double f = std::exp(-beta * s.xi1.value(w));
            double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            integral += wgt * f;
        }
        integral *= hstep / 3.0;
        double xu = s.xi1.value(u);
        return std::exp(beta * (xu - s.xi1.value(ubar))) * p.weighted_premium() /
                   (p.delta + p.lambda()) +
               p.a1 * std::exp(beta * xu) * integral;
    };
    for (double u : {0.3, 0.9, 1.5, 2.0})
        CHECK(k(u) == doctest::Approx(oracle(u)).epsilon(1e-6));
}

TEST_CASE("k with nonzero H matches a fine quadrature oracle") {
    // Independent oracle: integrate the full recursion
    //   k(u) = e^{beta(xi(u)-xi(ubar))} k(ubar)
    //        + int_ubar^u [a1 - H(curve(w)) xi'(w)/p2] e^{beta(xi(u)-xi(w))} dw
    // by fine Simpson quadrature with the analytic branch line xi = 1 - u/2.
    ModelParams p = ref_params();
    CurveSpec s = symmetric_spec();
    auto h = [](double x, double y) { return 0.5 * x + 0.25 * y + 1.0 + 0.1 * x * y; };
    KProfile k = k_profile(s, p, h);
    double beta = (p.delta + p.lambda()) / p.p2;
    auto xi = [](double u) { return u < 2.0 ? 1.0 - 0.5 * u : 0.0; };
    auto xip = [](double u) { return u < 2.0 ? -0.5 : 0.0; };
    auto curve_x = [&](double u) { return u + xi(u); };
    double k0 = (p.weighted_premium() + h(1.0, 1.0)) / (p.delta + p.lambda());
    auto oracle = [&](double u) {
        int n = 40000;
        double ubar = s.ubar(p);
        double hstep = (u - ubar) / n;
        double integral = 0.0;
        for (int i = 0; i <= n; ++i) {
            double w = ubar + i * hstep;
            double f = (p.a1 - h(curve_x(w), xi(w)) * xip(w) / p.p2) *
                       std::exp(beta * (xi(u) - xi(w)));
            double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            integral += wgt * f;
        }
        integral *= hstep / 3.0;
        return std::exp(beta * (xi(u) - xi(ubar))) * k0 + integral;
    };
    for (double u : {0.5, 1.0, 1.7}) CHECK(k(u) == doctest::Approx(oracle(u)).epsilon(1e-6));
}

TEST_CASE("mirrored profile of a symmetric spec equals the direct profile") {
    ModelParams p = ref_params();
    CurveSpec s = symmetric_spec();
    auto h = [](double x, double y) { return 0.2 * (x + y) + 0.05 * x * y; };  // symmetric H
    KProfile k = k_profile(s, p, h);
    KProfile kt = k_tilde_profile(s, p, h);
    for (double u : {0.0, 0.5, 1.2, 1.9})
        CHECK(k(u) == doctest::Approx(kt(u)).epsilon(1e-10));
}

TEST_CASE("one-step value region formulas") {
    ModelParams p = ref_params();
    CurveSpec s = symmetric_spec();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    Grid2D g{0.05, 81, 81};
    GridFunction w0 = affine_seed(p, g);
    GridFunction w = one_step_value(s, p, bp, w0);

    HField hf = build_H(p, bp, w0);
    KProfile k = k_profile(s, p, hf);
    KProfile kt = k_tilde_profile(s, p, [&](double x, double y) { return hf.h(x, y); });

    SUBCASE("top payment region is affine plus the vertex value") {
        double expect = p.a1 * (3.0 - 1.0) + p.a2() * (2.5 - 1.0) + k(s.ubar(p));
        CHECK(w(3.0, 2.5) == doctest::Approx(expect).epsilon(1e-9));
    }
    SUBCASE("company-one payment region pays the lump onto the branch") {
        // (3.0, 0.5): u-lump to inverse(0.5) = 1.0 (line 1 - u/2).
        double inv = s.xi1.inverse(0.5);
        double lump = 3.0 - (p.p1 / p.p2) * 0.5 - inv;
        double expect = p.a1 * lump + k(inv);
        CHECK(w(3.0, 0.5) == doctest::Approx(expect).epsilon(1e-9));
    }
    SUBCASE("symmetry of the assembled surface") {
        double worst = 0.0;
        for (std::size_t j = 0; j < g.ny; ++j)
            for (std::size_t i = 0; i < g.nx; ++i)
                worst = std::max(worst, std::abs(w.at(i, j) - w.at(j, i)));
        CHECK(worst <= 1e-9);
    }
    SUBCASE("points on the branch take the profile value") {
        double u = 0.6, z = s.xi1.value(u);
        CHECK(w(u + z, z) == doctest::Approx(k(u)).epsilon(5e-3));
        CHECK(w(z, u + z) == doctest::Approx(kt(u)).epsilon(5e-3));
    }
}

TEST_CASE("fixed point: no claims converges immediately to the no-claim value") {
    ModelParams p = ref_params();
    p.lambda1 = p.lambda2 = 0.0;
    CurveSpec s;
    s.xbar = s.ybar = 0.0;  // pay everything: vertex at the origin
    s.xi1 = MonotoneCurve({0.0, 1e-9}, {5e-10, 0.0});
    s.xi2 = MonotoneCurve({0.0, 1e-9}, {5e-10, 0.0});
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    Grid2D g{0.1, 21, 21};
    FixedPointResult r = fixed_point_value(s, p, bp, g);
    CHECK(r.converged);
    CHECK(r.sweeps <= 3);
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i)
            CHECK(r.value.at(i, j) ==
                  doctest::Approx(0.5 * g.x(i) + 0.5 * g.y(j) + 1.0 / 0.1).epsilon(1e-8));
}

TEST_CASE("fixed point converges with geometric sup-differences") {
    ModelParams p = ref_params();
    CurveSpec s = symmetric_spec();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    Grid2D g{0.1, 41, 41};
    FixedPointResult r = fixed_point_value(s, p, bp, g, 1e-7);
    CHECK(r.converged);
    // Ratio bound lambda/(delta+lambda) ~ 0.978 plus slack, after burn-in.
    double bound = p.lambda() / (p.delta + p.lambda()) + 0.02;
    for (std::size_t n = 10; n + 1 < r.sup_deltas.size(); ++n)
        CHECK(r.sup_deltas[n + 1] <= bound * r.sup_deltas[n] + 1e-12);
    // Fixed-point property: one more application moves nothing beyond tol.
    GridFunction again = one_step_value(s, p, bp, r.value);
    CHECK(again.sup_diff(r.value) <= 1e-6 * (1.0 + r.value.sup_abs()) * 1.5);
}

TEST_CASE("fixed-point value respects the growth envelope upper bound") {
    ModelParams p = ref_params();
    CurveSpec s = symmetric_spec();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    Grid2D g{0.1, 41, 41};
    FixedPointResult r = fixed_point_value(s, p, bp, g, 1e-6);
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            double affine = 0.5 * g.x(i) + 0.5 * g.y(j);
            CHECK(r.value.at(i, j) <= affine + 1.0 / 0.1 + 1e-6);
            CHECK(r.value.at(i, j) >= affine - 1e-9);  // admissible-strategy value
        }
}
