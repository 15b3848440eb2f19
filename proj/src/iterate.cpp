#include "collab/iterate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace collab {

namespace {

// Placeholder branch for a vertex sitting on an axis: that branch is never
// consulted (the payment region covers its side), but CurveSpec still needs
// a structurally valid curve.
MonotoneCurve placeholder_branch(double ubar) {
    return MonotoneCurve({ubar, ubar + 1e-9}, {5e-10, 0.0});
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double flo,
              double tol) {
    // f(lo) and f(hi) have opposite signs; returns the root.
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct BranchInput {
    double r12;      // ratio of own premium to the other premium
    double target;   // a_own * (delta + lambda)
    double ubar;
    double zbar;
    double du;       // sample spacing (lattice step)
    double x_cap;    // own-coordinate extent of the grid
    double z_cap;    // other-coordinate extent
};

// Solves target = Hx(u + r12 z, z) for z at each u-sample, taking the
// largest root below the previous sample.
bool el_branch(const BranchInput& in, const std::function<double(double, double)>& hx,
               MonotoneCurve& out, std::string& message, std::size_t& multi_events) {
    std::vector<double> us{in.ubar}, zs{in.zbar};
    double z_prev = in.zbar;
    const double eps_g = 1e-9 * (1.0 + std::abs(in.target));
    auto g = [&](double u, double z) { return hx(u + in.r12 * z, z) - in.target; };

    for (std::size_t m = 1;; ++m) {
        const double u = in.ubar + static_cast<double>(m) * in.du;
        if (u > in.x_cap) {
            message = "euler-lagrange: branch curve exits the grid before reaching zero";
            return false;
        }
        const std::size_t steps =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(z_prev / in.du)));
        const double dz = z_prev / static_cast<double>(steps);
        double za = z_prev, ga = g(u, za);
        if (ga > eps_g) {
            message = "euler-lagrange: root above the previous sample (branch not decreasing)";
            return false;
        }
        bool found = false;
        std::size_t crossings = 0;
        double zroot = 0.0;
        for (std::size_t k = 1; k <= steps; ++k) {
            double zb = k == steps ? 0.0 : z_prev - static_cast<double>(k) * dz;
            double gb = g(u, zb);
            if ((ga < 0.0) != (gb < 0.0)) {
                ++crossings;
                if (!found) {
                    double hi = za, lo = zb;
                    double r = bisect([&](double z) { return g(u, z); }, lo, hi, gb, 1e-8);
                    zroot = r;
                    found = true;
                }
            }
            za = zb;
            ga = gb;
        }
        if (crossings > 1) ++multi_events;
        if (found && zroot > 1e-6 * in.du) {
            if (zroot >= z_prev * (1.0 - 1e-12)) {
                message = "euler-lagrange: branch not strictly decreasing";
                return false;
            }
            if (u + in.r12 * zroot > in.x_cap || zroot > in.z_cap) {
                message = "euler-lagrange: branch point outside the grid";
                return false;
            }
            us.push_back(u);
            zs.push_back(zroot);
            z_prev = zroot;
            continue;
        }
        // The root crossed zero inside (u - du, u]; locate the endpoint M
        // from Hx(M, 0) = target.
        auto q = [&](double uu) { return g(uu, 0.0); };
        double ua = u - in.du, ub = u;
        double qa = q(ua), qb = q(ub);
        double big_m;
        if ((qa < 0.0) != (qb < 0.0)) {
            big_m = bisect(q, ua, ub, qa, 1e-8);
        } else if (zs.size() < 2) {
            // No interior root was ever bracketed and the endpoint equation
            // does not bracket either: there is no evidence of a decreasing
            // branch, so report failure instead of inventing an endpoint.
            message = "euler-lagrange: no root bracketed below the vertex height";
            return false;
        } else {
            // Fall back to linear extrapolation of the last segment.
            double slope = zs.size() >= 2
                               ? (zs.back() - zs[zs.size() - 2]) / (us.back() - us[us.size() - 2])
                               : -1.0;
            big_m = slope < 0.0 ? us.back() - zs.back() / slope : us.back() + in.du;
            big_m = std::clamp(big_m, us.back() + 1e-9, us.back() + 2.0 * in.du);
        }
        if (big_m <= us.back()) big_m = us.back() + 1e-9;
        us.push_back(big_m);
        zs.push_back(0.0);
        break;
    }
    if (us.size() < 2) {
        message = "euler-lagrange: branch degenerated to a point";
        return false;
    }
    out = MonotoneCurve(std::move(us), std::move(zs));
    return true;
}

}  // namespace

GridFunction take_run_value(const ModelParams& params, const BoundaryPayoffs& payoffs,
                            const Grid2D& grid, V0Convention convention) {
    const double lam = params.lambda();
    const double p = params.weighted_premium();
    double c;
    if (lam == 0.0) {
        c = p / params.delta;
    } else {
        const double dl = params.delta + lam;
        const double w21 = convention == V0Convention::payoff ? params.a2() : params.a1;
        const double w12 = convention == V0Convention::payoff ? params.a1 : params.a2();
        c = params.lambda1 / dl * (p / lam + w21 * payoffs.v2.value(0.0)) +
            params.lambda2 / dl * (p / lam + w12 * payoffs.v1.value(0.0));
    }
    GridFunction v(grid);
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i)
            v.at(i, j) = params.a1 * grid.x(i) + params.a2() * grid.y(j) + c;
    return v;
}

HField build_H(const ModelParams& params, const BoundaryPayoffs& payoffs,
               const GridFunction& prev) {
    return build_hfield(params, payoffs, prev);
}

VertexResult find_vertex(const HField& h, const ModelParams& params) {
    const Grid2D& g = h.h.grid();
    const double dl = params.delta + params.lambda();
    VertexResult best;
    double best_g = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            double val = h.h.at(i, j) / dl - params.a1 * g.x(i) - params.a2() * g.y(j);
            // Strict improvement keeps the lexicographically smallest tie.
            if (val > best_g + 1e-15) {
                best_g = val;
                best.x = g.x(i);
                best.y = g.y(j);
            }
        }
    }
    best.interior = best.x > 0.0 && best.y > 0.0 && best.x < g.x_max() && best.y < g.y_max();
    if (!best.interior) return best;

    const double c1 = params.a1 * dl, c2 = params.a2() * dl;
    if (params.symmetric()) {
        // Restrict the critical-point system to the diagonal.
        auto f = [&](double t) { return h.hx(t, t) - c1; };
        double lo = std::max(0.0, best.x - 2.0 * g.step);
        double hi = std::min(g.x_max(), best.x + 2.0 * g.step);
        const int scan = 64;
        double ta = lo, fa = f(ta);
        for (int k = 1; k <= scan; ++k) {
            double tb = lo + (hi - lo) * static_cast<double>(k) / scan;
            double fb = f(tb);
            if ((fa < 0.0) != (fb < 0.0)) {
                double t = bisect(f, ta, tb, fa, 1e-10);
                best.x = best.y = t;
                best.refined = true;
                break;
            }
            ta = tb;
            fa = fb;
        }
        return best;
    }

    // Damped Newton on (Hx - c1, Hy - c2) with finite-difference Jacobian.
    double x = best.x, y = best.y;
    const double d = 0.5 * g.step;
    bool ok = false;
    for (int it = 0; it < 40; ++it) {
        double f1 = h.hx(x, y) - c1;
        double f2 = h.hy(x, y) - c2;
        if (std::abs(f1) < 1e-10 * dl && std::abs(f2) < 1e-10 * dl) {
            ok = true;
            break;
        }
        double j11 = (h.hx(x + d, y) - h.hx(x - d, y)) / (2.0 * d);
        double j12 = (h.hx(x, y + d) - h.hx(x, y - d)) / (2.0 * d);
        double j21 = (h.hy(x + d, y) - h.hy(x - d, y)) / (2.0 * d);
        double j22 = (h.hy(x, y + d) - h.hy(x, y - d)) / (2.0 * d);
        double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-14) break;
        double sx = (f1 * j22 - f2 * j12) / det;
        double sy = (f2 * j11 - f1 * j21) / det;
        double norm = std::hypot(sx, sy);
        double cap = 2.0 * g.step;
        if (norm > cap) {
            sx *= cap / norm;
            sy *= cap / norm;
        }
        x = std::clamp(x - sx, best.x - 2.0 * g.step, best.x + 2.0 * g.step);
        y = std::clamp(y - sy, best.y - 2.0 * g.step, best.y + 2.0 * g.step);
        x = std::clamp(x, g.step, g.x_max() - g.step);
        y = std::clamp(y, g.step, g.y_max() - g.step);
    }
    if (ok) {
        best.x = x;
        best.y = y;
        best.refined = true;
    }
    return best;
}

CurveBuildResult solve_euler_lagrange(const HField& h, const ModelParams& params,
                                      const VertexResult& vertex) {
    const Grid2D& g = h.h.grid();
    const double dl = params.delta + params.lambda();
    CurveBuildResult res;
    res.spec.xbar = vertex.x;
    res.spec.ybar = vertex.y;
    const double ub = res.spec.ubar(params);
    const double vb = res.spec.vbar(params);

    if (vertex.y < 1e-12) {
        res.spec.xi1 = placeholder_branch(ub);
    } else {
        BranchInput in{params.p1 / params.p2, params.a1 * dl, ub, vertex.y,
                       g.step,               g.x_max(),       g.y_max()};
        if (!el_branch(in, [&](double x, double y) { return h.hx(x, y); }, res.spec.xi1,
                       res.message, res.multiple_root_events))
            return res;
    }

    const bool sym = params.symmetric() && vertex.x == vertex.y;
    if (sym) {
        res.spec.xi2 = res.spec.xi1;
    } else if (vertex.x < 1e-12) {
        res.spec.xi2 = placeholder_branch(vb);
    } else {
        BranchInput in{params.p2 / params.p1, params.a2() * dl, vb, vertex.x,
                       g.step,                g.y_max(),        g.x_max()};
        // Mirrored branch: swap the roles of the coordinates in H.
        if (!el_branch(in, [&](double x, double y) { return h.hy(y, x); }, res.spec.xi2,
                       res.message, res.multiple_root_events))
            return res;
    }
    res.ok = true;
    return res;
}

namespace {

double spec_distance(const CurveSpec& a, const CurveSpec& b) {
    double d = std::max(std::abs(a.xbar - b.xbar), std::abs(a.ybar - b.ybar));
    auto branch_gap = [](const MonotoneCurve& c1, const MonotoneCurve& c2) {
        double m = 0.0;
        double lo = std::max(c1.domain_lo(), c2.domain_lo());
        double hi = std::min(c1.domain_hi(), c2.domain_hi());
        if (hi <= lo) return 0.0;
        for (std::size_t k = 0; k < c1.size(); ++k) {
            double u = c1.u_at(k);
            if (u < lo || u > hi) continue;
            m = std::max(m, std::abs(c1.z_at(k) - c2.value(u)));
        }
        return m;
    };
    d = std::max(d, branch_gap(a.xi1, b.xi1));
    d = std::max(d, branch_gap(a.xi2, b.xi2));
    return d;
}

}  // namespace

IterateResult run(const ModelParams& params, const BoundaryPayoffs& payoffs, const Grid2D& grid,
                  std::size_t n_max, double fixed_point_tol, V0Convention convention,
                  std::ostream* log) {
    if (n_max < 1) throw std::invalid_argument("run: n_max must be >= 1");
    IterateResult out;
    GridFunction prev = take_run_value(params, payoffs, grid, convention);
    bool have_spec = false;

    for (std::size_t n = 1; n <= n_max; ++n) {
        HField hf = build_H(params, payoffs, prev);
        VertexResult vert = find_vertex(hf, params);
        CurveBuildResult cb = solve_euler_lagrange(hf, params, vert);

        IterationState st;
        st.n = n;
        if (cb.ok) {
            if (have_spec) st.curve_delta = spec_distance(cb.spec, out.final_spec);
            out.final_spec = cb.spec;
            have_spec = true;
            if (cb.multiple_root_events > 0)
                st.note = "multiple candidate roots at " +
                          std::to_string(cb.multiple_root_events) + " samples";
        } else {
            st.curve_ok = false;
            st.note = cb.message;
            if (!have_spec)
                throw std::runtime_error("run: first curve construction failed: " + cb.message);
            // Keep the previous spec and continue; documented fallback.
        }
        st.vertex_x = out.final_spec.xbar;
        st.vertex_y = out.final_spec.ybar;
        st.m1 = out.final_spec.xi1.domain_hi();
        st.m2 = out.final_spec.xi2.domain_hi();

        GridFunction vn = one_step_with_h(out.final_spec, params, hf.h);
        st.sup_delta = vn.sup_diff(prev);
        double min_gap = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < vn.samples().size(); ++k)
            min_gap = std::min(min_gap, vn.samples()[k] - prev.samples()[k]);
        st.min_gap = min_gap;
        const double dl = params.delta + params.lambda();
        double max_l = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 1; j + 1 < grid.ny; ++j)
            for (std::size_t i = 1; i + 1 < grid.nx; ++i)
                max_l = std::max(max_l, params.p1 * vn.dx(i, j) + params.p2 * vn.dy(i, j) -
                                            dl * vn.at(i, j) + hf.h.at(i, j));
        st.max_l_residual = max_l;
        // Affine growth envelope of the iterate (lower/upper worst signed
        // violations; positive means broken).
        const double lo_c = params.weighted_premium() / dl;
        const double hi_c = params.weighted_premium() / params.delta;
        double env_lo = -std::numeric_limits<double>::infinity();
        double env_hi = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < grid.ny; ++j)
            for (std::size_t i = 0; i < grid.nx; ++i) {
                const double affine = params.a1 * grid.x(i) + params.a2() * grid.y(j);
                env_lo = std::max(env_lo, affine + lo_c - vn.at(i, j));
                env_hi = std::max(env_hi, vn.at(i, j) - affine - hi_c);
            }
        st.env_lower = env_lo;
        st.env_upper = env_hi;
        prev = std::move(vn);

        if (log) {
            *log << "{\"n\":" << st.n << ",\"vertex\":[" << st.vertex_x << "," << st.vertex_y
                 << "],\"m1\":" << st.m1 << ",\"m2\":" << st.m2
                 << ",\"sup_delta\":" << st.sup_delta << ",\"min_gap\":" << st.min_gap
                 << ",\"curve_delta\":" << st.curve_delta
                 << ",\"max_l_residual\":" << st.max_l_residual
                 << ",\"curve_ok\":" << (st.curve_ok ? "true" : "false") << ",\"note\":\""
                 << st.note << "\"}\n";
        }
        out.states.push_back(std::move(st));
    }

    out.last_iterate = std::move(prev);
    out.final_value =
        fixed_point_value(out.final_spec, params, payoffs, grid, fixed_point_tol);
    return out;
}

}  // namespace collab
