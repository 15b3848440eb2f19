#include "collab/field.hpp"

#include <cmath>
#include <stdexcept>

#include "collab/parallel.hpp"

namespace collab {

BoundaryPayoffs make_boundary_payoffs(const ModelParams& params) {
    BoundaryPayoffs bp;
    bp.v1 = solve_standalone(params.p1, params.lambda1, params.law1, params.delta);
    bp.v2 = solve_standalone(params.p2, params.lambda2, params.law2, params.delta);
    return bp;
}

double integrate_dF(const ClaimLaw& law, double lo, double hi, double max_sub,
                    const std::function<double(double)>& g) {
    if (hi <= lo) return 0.0;
    const double span = hi - lo;
    const std::size_t m =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / max_sub - 1e-12)));
    const double w = span / static_cast<double>(m);
    double acc = 0.0;
    double ga = g(lo);
    for (std::size_t k = 0; k < m; ++k) {
        double a = lo + w * static_cast<double>(k);
        double b = k + 1 == m ? hi : a + w;
        double gb = g(b);
        acc += ga * law.prob_mass(a, b) + (gb - ga) * law.partial_moment(a, b) / (b - a);
        ga = gb;
    }
    return acc;
}

double overflow_term_U(const ModelParams& params, const BoundaryPayoffs& payoffs, double x,
                       double y) {
    double u = 0.0;
    if (params.lambda1 > 0.0)
        u += params.lambda1 * params.a2() * payoffs.v2.payoff(y) * params.law1.tail(x + y);
    if (params.lambda2 > 0.0)
        u += params.lambda2 * params.a1 * payoffs.v1.payoff(x) * params.law2.tail(x + y);
    return u;
}

double integral_operator_I(const ModelParams& params, const GridFunction& w, double x, double y) {
    const double h = w.grid().step;
    double acc = 0.0;
    if (params.lambda1 > 0.0) {
        acc += params.lambda1 *
               (integrate_dF(params.law1, 0.0, x, h, [&](double a) { return w(x - a, y); }) +
                integrate_dF(params.law1, x, x + y, h,
                             [&](double a) { return w(0.0, x + y - a); }));
    }
    if (params.lambda2 > 0.0) {
        acc += params.lambda2 *
               (integrate_dF(params.law2, 0.0, y, h, [&](double a) { return w(x, y - a); }) +
                integrate_dF(params.law2, y, x + y, h,
                             [&](double a) { return w(x + y - a, 0.0); }));
    }
    return acc;
}

namespace {

// Per-subinterval weights of the exponential kernel on a lattice of step h:
// integral over [kh,(k+1)h] of a linear g against mu e^{-mu a} da equals
// e^{-mu k h} (g(kh) a0 + g((k+1)h) a1).
struct ExpKernel {
    double q;   // e^{-mu h}
    double a0;  // weight of the left sample
    double a1;  // weight of the right sample
    ExpKernel(double mu, double h) {
        q = std::exp(-mu * h);
        double m0 = 1.0 - q;
        double c1 = (1.0 - q * (1.0 + mu * h)) / mu;  // first moment over [0,h]
        a1 = c1 / h;
        a0 = m0 - a1;
    }
};

}  // namespace

GridFunction build_integral_grid(const ModelParams& params, const GridFunction& w) {
    const Grid2D g = w.grid();
    GridFunction out(g, 0.0);
    const bool fast = (params.lambda1 == 0.0 || params.law1.is_exponential()) &&
                      (params.lambda2 == 0.0 || params.law2.is_exponential());
    if (!fast) {
        parallel_for(0, g.ny, [&](std::size_t j) {
            for (std::size_t i = 0; i < g.nx; ++i)
                out.at(i, j) = integral_operator_I(params, w, g.x(i), g.y(j));
        });
        return out;
    }

    const double h = g.step;
    if (params.lambda1 > 0.0) {
        const ExpKernel k1(params.law1.rate(), h);
        // Boundary column w(0, .) drives the overflow-to-Company-Two part.
        std::vector<double> b1(g.ny, 0.0);
        for (std::size_t j = 1; j < g.ny; ++j)
            b1[j] = k1.q * b1[j - 1] + w.at(0, j) * k1.a0 + w.at(0, j - 1) * k1.a1;
        parallel_for(0, g.ny, [&](std::size_t j) {
            double a = 0.0;  // running integral along the row
            out.at(0, j) += params.lambda1 * b1[j];
            for (std::size_t i = 1; i < g.nx; ++i) {
                a = k1.q * a + w.at(i, j) * k1.a0 + w.at(i - 1, j) * k1.a1;
                out.at(i, j) +=
                    params.lambda1 * (a + std::exp(-params.law1.rate() * g.x(i)) * b1[j]);
            }
        });
    }
    if (params.lambda2 > 0.0) {
        const ExpKernel k2(params.law2.rate(), h);
        std::vector<double> b2(g.nx, 0.0);
        for (std::size_t i = 1; i < g.nx; ++i)
            b2[i] = k2.q * b2[i - 1] + w.at(i, 0) * k2.a0 + w.at(i - 1, 0) * k2.a1;
        parallel_for(0, g.nx, [&](std::size_t i) {
            double c = 0.0;  // running integral along the column
            out.at(i, 0) += params.lambda2 * b2[i];
            for (std::size_t j = 1; j < g.ny; ++j) {
                c = k2.q * c + w.at(i, j) * k2.a0 + w.at(i, j - 1) * k2.a1;
                out.at(i, j) +=
                    params.lambda2 * (c + std::exp(-params.law2.rate() * g.y(j)) * b2[i]);
            }
        });
    }
    return out;
}

GridFunction build_overflow_grid(const ModelParams& params, const BoundaryPayoffs& payoffs,
                                 const Grid2D& grid) {
    GridFunction out(grid, 0.0);
    parallel_for(0, grid.ny, [&](std::size_t j) {
        for (std::size_t i = 0; i < grid.nx; ++i)
            out.at(i, j) = overflow_term_U(params, payoffs, grid.x(i), grid.y(j));
    });
    return out;
}

double generator_L(const ModelParams& params, const BoundaryPayoffs& payoffs,
                   const GridFunction& w, double x, double y, double wx, double wy) {
    return params.p1 * wx + params.p2 * wy - (params.delta + params.lambda()) * w(x, y) +
           integral_operator_I(params, w, x, y) + overflow_term_U(params, payoffs, x, y);
}

HjbResidual hjb_residual(const ModelParams& params, const BoundaryPayoffs& payoffs,
                         const GridFunction& w, std::size_t i, std::size_t j) {
    const Grid2D& g = w.grid();
    if (i >= g.nx || j >= g.ny) throw std::out_of_range("hjb_residual: node outside grid");
    HjbResidual r;
    double wx = w.dx(i, j);
    double wy = w.dy(i, j);
    r.l_part = generator_L(params, payoffs, w, g.x(i), g.y(j), wx, wy);
    r.dx_part = params.a1 - wx;
    r.dy_part = params.a2() - wy;
    r.max_part = std::max(r.l_part, std::max(r.dx_part, r.dy_part));
    return r;
}

}  // namespace collab
