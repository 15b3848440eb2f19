#include "collab/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "collab/parallel.hpp"

namespace collab {

namespace {

// integral over [0, dt] of g(r) e^{-gamma r} dr for g linear with g(0)=g0,
// g(dt)=g1; gamma >= 0. Series branch guards the small-exponent regime.
double exp_lin_integral(double g0, double g1, double gamma, double dt) {
    if (dt <= 0.0) return 0.0;
    const double x = gamma * dt;
    double w0, w1;  // weights of g0 and (g1 - g0)
    if (x < 1e-5) {
        w0 = dt * (1.0 - 0.5 * x + x * x / 6.0);
        w1 = dt * (0.5 - x / 3.0 + x * x / 8.0);
    } else {
        const double e = std::exp(-x);
        w0 = (1.0 - e) / gamma;
        w1 = (1.0 - e * (1.0 + x)) / (gamma * gamma * dt);
    }
    return g0 * w0 + (g1 - g0) * w1;
}

ModelParams mirrored_params(const ModelParams& p) {
    ModelParams m = p;
    std::swap(m.p1, m.p2);
    std::swap(m.lambda1, m.lambda2);
    std::swap(m.law1, m.law2);
    m.a1 = p.a2();
    return m;
}

bool spec_self_mirrored(const CurveSpec& spec) {
    if (spec.xbar != spec.ybar) return false;
    if (spec.xi1.size() != spec.xi2.size()) return false;
    for (std::size_t k = 0; k < spec.xi1.size(); ++k)
        if (spec.xi1.u_at(k) != spec.xi2.u_at(k) || spec.xi1.z_at(k) != spec.xi2.z_at(k))
            return false;
    return true;
}

}  // namespace

HField build_hfield(const ModelParams& params, const BoundaryPayoffs& payoffs,
                    const GridFunction& w0) {
    HField f;
    f.h = build_integral_grid(params, w0);
    GridFunction u = build_overflow_grid(params, payoffs, w0.grid());
    for (std::size_t k = 0; k < f.h.samples().size(); ++k) f.h.samples()[k] += u.samples()[k];
    f.hx = GridFunction(f.h.grid());
    f.hy = GridFunction(f.h.grid());
    const Grid2D& g = f.h.grid();
    parallel_for(0, g.ny, [&](std::size_t j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            f.hx.at(i, j) = f.h.dx(i, j);
            f.hy.at(i, j) = f.h.dy(i, j);
        }
    });
    return f;
}

double KProfile::operator()(double uu) const {
    if (uu <= u.front()) return k.front();
    if (uu >= u.back()) return k.back();
    auto it = std::upper_bound(u.begin(), u.end(), uu);
    std::size_t m = static_cast<std::size_t>(it - u.begin()) - 1;
    m = std::min(m, u.size() - 2);
    double t = (uu - u[m]) / (u[m + 1] - u[m]);
    return k[m] + t * (k[m + 1] - k[m]);
}

KProfile k_profile(const CurveSpec& spec, const ModelParams& params,
                   const std::function<double(double, double)>& h) {
    const MonotoneCurve& xi = spec.xi1;
    const double r12 = params.p1 / params.p2;
    const double dl = params.delta + params.lambda();
    const double beta = dl / params.p2;
    const std::size_t n = xi.size();
    KProfile out;
    out.u.resize(n);
    out.k.resize(n);
    for (std::size_t m = 0; m < n; ++m) out.u[m] = xi.u_at(m);

    auto h_on_curve = [&](std::size_t m) {
        return h(xi.u_at(m) + r12 * xi.z_at(m), xi.z_at(m));
    };
    out.k[0] = (params.weighted_premium() + h_on_curve(0)) / dl;
    for (std::size_t m = 1; m < n; ++m) {
        const double du = xi.u_at(m) - xi.u_at(m - 1);
        const double slope = (xi.z_at(m) - xi.z_at(m - 1)) / du;  // negative
        const double gamma = -beta * slope;
        const double f_hi = params.a1 - h_on_curve(m) * slope / params.p2;
        const double f_lo = params.a1 - h_on_curve(m - 1) * slope / params.p2;
        // integrate f(w) e^{beta (xi(u_m) - xi(w))} over [u_{m-1}, u_m];
        // with r = u_m - w the kernel is e^{-gamma r}.
        out.k[m] = out.k[m - 1] * std::exp(-gamma * du) +
                   exp_lin_integral(f_hi, f_lo, gamma, du);
    }
    return out;
}

KProfile k_profile(const CurveSpec& spec, const ModelParams& params, const HField& h) {
    return k_profile(spec, params, [&](double x, double y) { return h.h(x, y); });
}

KProfile k_tilde_profile(const CurveSpec& spec, const ModelParams& params,
                         const std::function<double(double, double)>& h) {
    return k_profile(mirror(spec), mirrored_params(params),
                     [&](double x, double y) { return h(y, x); });
}

GridFunction one_step_with_h(const CurveSpec& spec, const ModelParams& params,
                             const GridFunction& h_grid) {
    const Grid2D g = h_grid.grid();
    const double step = g.step;
    const double dl = params.delta + params.lambda();
    const double r12 = params.p1 / params.p2;
    const double r21 = params.p2 / params.p1;
    const double a1 = params.a1, a2 = params.a2();
    const double ub = spec.ubar(params);
    const double h_sub = step / std::max(params.p1, params.p2);
    const double e_sub = std::exp(-dl * h_sub);
    const bool sym = params.symmetric() && spec_self_mirrored(spec);

    auto kprof = k_profile(spec, params, [&](double x, double y) { return h_grid(x, y); });
    auto ktprof = sym ? kprof
                      : k_tilde_profile(spec, params,
                                        [&](double x, double y) { return h_grid(x, y); });
    const double k_vertex = kprof.k.front();

    GridFunction out(g);
    auto domain_fail = [] {
        return std::domain_error(
            "one_step_value: curve strategy leaves the grid; enlarge the grid domain");
    };

    // Descending sweep: the no-action recursion reads up-and-right nodes
    // that are already final.
    for (std::size_t jj = g.ny; jj-- > 0;) {
        const double y = g.y(jj);
        for (std::size_t ii = g.nx; ii-- > 0;) {
            if (sym && ii < jj) continue;  // mirrored afterwards
            const double x = g.x(ii);
            double w;
            if (x >= spec.xbar && y >= spec.ybar) {
                // Both companies pay down to the vertex.
                w = a1 * (x - spec.xbar) + a2 * (y - spec.ybar) + k_vertex;
            } else {
                const double u = x - r12 * y;
                const double v = y - r21 * x;
                double s_hit, k_hit;
                if (u >= ub) {
                    const double zc = spec.xi1.value(u);
                    if (y >= zc) {
                        // Right of the lower branch: Company One lump.
                        const double uinv = spec.xi1.inverse(y);
                        out.at(ii, jj) = a1 * (x - r12 * y - uinv) + kprof(uinv);
                        continue;
                    }
                    s_hit = (zc - y) / params.p2;
                    k_hit = kprof(u);
                } else {
                    const double zc = spec.xi2.value(v);
                    if (x >= zc) {
                        const double vinv = spec.xi2.inverse(x);
                        out.at(ii, jj) = a2 * (y - r21 * x - vinv) + ktprof(vinv);
                        continue;
                    }
                    s_hit = (zc - x) / params.p1;
                    k_hit = ktprof(v);
                }
                const double h0 = h_grid(x, y);
                if (s_hit <= h_sub * (1.0 + 1e-12)) {
                    const double xh = x + params.p1 * s_hit;
                    const double yh = y + params.p2 * s_hit;
                    if (xh > g.x_max() * (1.0 + 1e-12) || yh > g.y_max() * (1.0 + 1e-12))
                        throw domain_fail();
                    w = exp_lin_integral(h0, h_grid(xh, yh), dl, s_hit) +
                        std::exp(-dl * s_hit) * k_hit;
                } else {
                    const double xt = x + params.p1 * h_sub;
                    const double yt = y + params.p2 * h_sub;
                    double wt;
                    if (params.p1 >= params.p2) {
                        // Target sits on the lattice line x = x_{i+1}.
                        if (ii + 1 >= g.nx) throw domain_fail();
                        const double fy = (yt - y) / step;
                        if (fy > 1e-15 && jj + 1 >= g.ny) throw domain_fail();
                        wt = fy > 1e-15 ? (1.0 - fy) * out.at(ii + 1, jj) +
                                              fy * out.at(ii + 1, jj + 1)
                                        : out.at(ii + 1, jj);
                    } else {
                        if (jj + 1 >= g.ny) throw domain_fail();
                        const double fx = (xt - x) / step;
                        if (fx > 1e-15 && ii + 1 >= g.nx) throw domain_fail();
                        wt = fx > 1e-15 ? (1.0 - fx) * out.at(ii, jj + 1) +
                                              fx * out.at(ii + 1, jj + 1)
                                        : out.at(ii, jj + 1);
                    }
                    w = exp_lin_integral(h0, h_grid(xt, yt), dl, h_sub) + e_sub * wt;
                }
            }
            out.at(ii, jj) = w;
        }
    }
    if (sym) {
        for (std::size_t jj = 0; jj < g.ny; ++jj)
            for (std::size_t ii = 0; ii < jj; ++ii) out.at(ii, jj) = out.at(jj, ii);
    }
    return out;
}

GridFunction one_step_value(const CurveSpec& spec, const ModelParams& params,
                            const BoundaryPayoffs& payoffs, const GridFunction& w0) {
    GridFunction h = build_integral_grid(params, w0);
    GridFunction u = build_overflow_grid(params, payoffs, w0.grid());
    for (std::size_t k = 0; k < h.samples().size(); ++k) h.samples()[k] += u.samples()[k];
    return one_step_with_h(spec, params, h);
}

GridFunction affine_seed(const ModelParams& params, const Grid2D& grid) {
    GridFunction w(grid);
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i)
            w.at(i, j) = params.a1 * grid.x(i) + params.a2() * grid.y(j);
    return w;
}

FixedPointResult fixed_point_value(const CurveSpec& spec, const ModelParams& params,
                                   const BoundaryPayoffs& payoffs, const Grid2D& grid,
                                   double tol, std::size_t max_sweeps) {
    if (!(tol > 0.0)) throw std::invalid_argument("fixed_point_value: tol must be positive");
    const GridFunction u_grid = build_overflow_grid(params, payoffs, grid);
    const double ratio_bound = params.lambda() / (params.delta + params.lambda()) + 0.05;

    FixedPointResult res;
    GridFunction w = affine_seed(params, grid);
    std::size_t bad_ratio = 0;
    for (std::size_t n = 0; n < max_sweeps; ++n) {
        GridFunction h = build_integral_grid(params, w);
        for (std::size_t k = 0; k < h.samples().size(); ++k)
            h.samples()[k] += u_grid.samples()[k];
        GridFunction next = one_step_with_h(spec, params, h);
        double d = next.sup_diff(w);
        res.sup_deltas.push_back(d);
        w = std::move(next);
        res.sweeps = n + 1;
        if (d <= tol * (1.0 + w.sup_abs())) {
            res.converged = true;
            break;
        }
        const auto& ds = res.sup_deltas;
        if (ds.size() >= 4 && ds[ds.size() - 2] > 0.0) {
            bad_ratio = d / ds[ds.size() - 2] > ratio_bound ? bad_ratio + 1 : 0;
            if (bad_ratio >= 3)
                throw std::runtime_error(
                    "fixed_point_value: contraction ratio exceeded the theoretical bound; "
                    "numeric instability");
        }
    }
    res.value = std::move(w);
    return res;
}

}  // namespace collab
